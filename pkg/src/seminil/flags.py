"""Canonical flags, seminilpotency, and stratification invariants.

The canonical chain starts from the whole space and repeatedly takes the
stable closure of the images under the declared (non-opposite) arrows.  A
representation is seminilpotent exactly when that chain reaches zero; the
reversed chain is then a witness flag that declared arrows strictly lower and
opposite arrows preserve.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .quiver import DimVector
from .rep import GradedSubspace, Rep


def stable_closure(x: Rep, u: GradedSubspace) -> GradedSubspace:
    """Smallest subspace containing u stable under every doubled arrow.

    Saturation in arrow declaration order; the result is order independent,
    and stabilizes within total-dimension many passes.
    """
    current = u
    while True:
        changed = False
        for d in x.quiver.doubled:
            m = x.mat(d.aid)
            new_rows = []
            for row in current.at(d.src):
                img = linalg.mat_apply(x.field, m, row)
                if not current.contains_vector(d.tgt, img):
                    new_rows.append(img)
            if new_rows:
                rows = {v: list(current.at(v)) for v in x.quiver.vertices}
                rows[d.tgt].extend(new_rows)
                current = GradedSubspace(x.field, x.alpha, rows)
                changed = True
        if not changed:
            return current


def _omega_image(x: Rep, w: GradedSubspace) -> GradedSubspace:
    rows = {v: [] for v in x.quiver.vertices}
    for d in x.quiver.doubled:
        if d.sign != 1:
            continue
        m = x.mat(d.aid)
        for row in w.at(d.src):
            rows[d.tgt].append(linalg.mat_apply(x.field, m, row))
    return GradedSubspace(x.field, x.alpha, rows)


@dataclass
class ChainResult:
    descending: list          # W^0 = V  >=  W^1  >=  ...  (stops when stationary)
    seminilpotent: bool
    flag: list | None         # increasing 0 = W_0 < ... < W_r = V when seminilpotent
    steps: tuple | None       # graded dimensions of successive flag quotients


def canonical_chain(x: Rep) -> ChainResult:
    """Iterate stable closures of declared-arrow images from the full space."""
    chain = [GradedSubspace.full(x.field, x.alpha)]
    while True:
        nxt = stable_closure(x, _omega_image(x, chain[-1]))
        if nxt == chain[-1]:
            break
        chain.append(nxt)
    seminil = chain[-1].is_zero()
    if not seminil:
        return ChainResult(chain, False, None, None)
    flag = list(reversed(chain))
    steps = tuple(
        flag[k].dim_vector() - flag[k - 1].dim_vector() for k in range(1, len(flag))
    )
    return ChainResult(chain, True, flag, steps)


def is_seminilpotent(x: Rep) -> bool:
    return canonical_chain(x).seminilpotent


def flag_satisfies_definition(x: Rep, flag) -> bool:
    """Exact check that declared arrows strictly lower the flag and opposites preserve it."""
    for k in range(1, len(flag)):
        wk, wk1 = flag[k], flag[k - 1]
        for d in x.quiver.doubled:
            target = wk1 if d.sign == 1 else wk
            m = x.mat(d.aid)
            for row in wk.at(d.src):
                if not target.contains_vector(d.tgt, linalg.mat_apply(x.field, m, row)):
                    return False
    return True


def concentrated_steps(steps) -> tuple:
    """Flag type as a plain integer tuple when every step sits at one vertex."""
    out = []
    for s in steps:
        con = s.concentrated()
        if con is None:
            raise ValueError("flag step is not concentrated at a single vertex")
        out.append(con[1])
    return tuple(out)


def flag_variety_dim(steps) -> int:
    """Dimension of the graded partial flag variety with the given step dimensions."""
    total = 0
    stepdims = [s.as_dict() if isinstance(s, DimVector) else dict(s) for s in steps]
    if not stepdims:
        return 0
    vertices = set()
    for s in stepdims:
        vertices.update(s)
    for v in vertices:
        dims = [s.get(v, 0) for s in stepdims]
        for j in range(len(dims)):
            for k in range(j + 1, len(dims)):
                total += dims[j] * dims[k]
    return total


# ---------------------------------------------------------------------------
# one-vertex helpers


def _one_vertex_data(x: Rep):
    con = x.alpha.concentrated()
    if con is None:
        if x.alpha.is_zero():
            raise ValueError("zero representation has no distinguished vertex")
        raise ValueError("operation requires dimension concentrated at one vertex")
    v, _ = con
    loops = x.quiver.loops_at(v)
    xs = [x.mat(a) for a in loops]
    ys = [x.mat(f"{a}_bar") for a in loops]
    return v, loops, xs, ys


def _section_rows(field, bigger: GradedSubspace, smaller: GradedSubspace, v: str):
    """Echelon basis of bigger/smaller at v, as canonical ambient representatives."""
    rows = [smaller.reduce(v, r) for r in bigger.at(v)]
    red, piv = linalg.rref(field, rows)
    return red, piv


def _induced_on_quotient(field, m, section, piv, smaller, v):
    """Matrix of an endomorphism on the quotient spanned by a section basis."""
    cols = []
    for row in section:
        img = linalg.mat_apply(field, m, row)
        img = smaller.reduce(v, img)
        coords = linalg.coords_against(field, section, piv, img)
        if coords is None:
            raise ValueError("quotient is not preserved")
        cols.append(coords)
    return linalg.transpose(cols) if cols else []


def intertwiner_defects(x: Rep, flag=None) -> tuple:
    """Defect tuple of a one-vertex representation along its canonical flag.

    Entry k is the dimension of the joint kernel of the maps
    X -> y^(k+1) X - X y^(k) over all loops, where y^(k) is the induced
    opposite-loop action on the k-th flag quotient.
    """
    v, loops, _, ys = _one_vertex_data(x)
    if flag is None:
        res = canonical_chain(x)
        if not res.seminilpotent:
            raise ValueError("defects need a seminilpotent representation")
        flag = res.flag
    F = x.field
    r = len(flag) - 1
    sections = []
    for k in range(1, r + 1):
        sec, piv = _section_rows(F, flag[k], flag[k - 1], v)
        sections.append((sec, piv, flag[k - 1]))
    induced = []
    for sec, piv, smaller in sections:
        induced.append([_induced_on_quotient(F, y, sec, piv, smaller, v) for y in ys])
    defects = []
    for k in range(r - 1):
        dk = len(sections[k][0])
        dk1 = len(sections[k + 1][0])
        if dk == 0 or dk1 == 0:
            defects.append(0)
            continue
        rows = []
        for i in range(len(ys)):
            ylow = induced[k][i]
            yhigh = induced[k + 1][i]
            # unknown X is dk1 x dk, flattened row-major
            for a in range(dk1):
                for b in range(dk):
                    row = [F.zero] * (dk1 * dk)
                    for c in range(dk1):
                        row[c * dk + b] = F.add(row[c * dk + b], yhigh[a][c])
                    for c in range(dk):
                        row[a * dk + c] = F.sub(row[a * dk + c], ylow[c][b])
                    rows.append(row)
        defects.append(len(linalg.nullspace(F, rows, dk1 * dk)))
    return tuple(defects)


def kernel_chain(x: Rep) -> list:
    """Increasing chain of largest stable subspaces of iterated loop preimages.

    One-vertex only.  Starts at zero; each next term is the biggest subspace
    of the joint preimage of the previous one under the declared loops that is
    stable under all loop maps.
    """
    v, loops, xs, ys = _one_vertex_data(x)
    F = x.field
    n = x.alpha[v]
    chain = [GradedSubspace.zero(F, x.alpha)]
    allmaps = xs + ys
    while True:
        prev = chain[-1]
        # joint preimage of prev under the declared loops
        constraints = []
        for m in xs:
            cols = []
            for c in range(n):
                e = [F.zero] * n
                e[c] = F.one
                cols.append(prev.reduce(v, linalg.mat_apply(F, m, e)))
            constraints.extend(linalg.transpose(cols))
        space = linalg.nullspace(F, constraints, n) if constraints else linalg.identity(F, n)
        sub = _largest_stable_inside(F, x.alpha, v, allmaps, space)
        if sub == prev:
            break
        chain.append(sub)
    return chain


def _largest_stable_inside(field, alpha, v, maps, spanning_rows) -> GradedSubspace:
    """Biggest subspace of the span that every map keeps inside the span."""
    current = GradedSubspace(field, alpha, {v: spanning_rows})
    n = alpha[v]
    while True:
        constraints = []
        for m in [None] + list(maps):
            cols = []
            for c in range(n):
                e = [field.zero] * n
                e[c] = field.one
                w = e if m is None else linalg.mat_apply(field, m, e)
                cols.append(current.reduce(v, w))
            constraints.extend(linalg.transpose(cols))
        basis = linalg.nullspace(field, constraints, n)
        nxt = GradedSubspace(field, alpha, {v: basis})
        if nxt == current:
            return current
        current = nxt


def kernel_type(x: Rep) -> tuple:
    """Jump sizes of the kernel chain; the triangularity-side label of a point."""
    chain = kernel_chain(x)
    v = x.alpha.concentrated()[0]
    dims = [c.dim_at(v) for c in chain]
    if dims[-1] != x.alpha[v]:
        raise ValueError("kernel chain does not exhaust the space; point is not seminilpotent")
    return tuple(dims[k] - dims[k - 1] for k in range(1, len(dims)))


def nilpotent_kernel_jumps(field, m) -> tuple:
    """Jumps of dim ker m^i for a nilpotent matrix; the partition label."""
    n = len(m)
    jumps = []
    power = linalg.identity(field, n)
    prev = 0
    while prev < n:
        power = linalg.mat_mul(field, m, power)
        k = n - linalg.rank(field, power)
        if k == prev:
            raise ValueError("matrix is not nilpotent")
        jumps.append(k - prev)
        prev = k
    return tuple(jumps)


# ---------------------------------------------------------------------------
# peeling invariants


def ideal_subspace(x: Rep, vertices) -> GradedSubspace:
    """Stable closure of the coordinate spaces away from the given vertices."""
    keep = set(vertices)
    F = x.field
    rows = {
        v: linalg.identity(F, x.alpha[v]) for v in x.quiver.vertices if v not in keep
    }
    return stable_closure(x, GradedSubspace(F, x.alpha, rows))


def ideal_codim(x: Rep, v: str) -> int:
    """Codimension at v of the stable closure of everything away from v.

    This is the peeling statistic: how much of the space at v survives above
    the part generated by the other vertices.
    """
    return x.alpha[v] - ideal_subspace(x, {v}).dim_at(v)


def peel_point(x: Rep, v: str):
    """Split x into its ideal-subspace part and the concentrated quotient at v."""
    from .rep import quotient, restrict

    sub = ideal_subspace(x, {v})
    return restrict(x, sub), quotient(x, sub)
