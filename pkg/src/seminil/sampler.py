"""Seeded constructive samplers for pseudo-generic component points.

Every sampler returns exact rational (in fact integer-entried) points and
certifies the open conditions its construction needs: moment map zero,
seminilpotency, canonical flag type, vanishing defects, peeling codimensions.
"Pseudo-generic" means exactly "passes that certificate"; identical
(label, config) pairs give identical output bit for bit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import flags, linalg
from .linalg import QQ
from .quiver import DimVector, Quiver
from .rep import Rep, moment_is_zero, zero_rep


class SamplingFailed(RuntimeError):
    def __init__(self, what, seed):
        self.what = what
        self.seed = seed
        super().__init__(f"sampling failed for {what} (seed {seed}); consider raising the coefficient bound")


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    bound: int = 10       # random integer coefficients live in [-bound, bound]
    retries: int = 64
    n_seeds: int = 3      # samples per consensus question

    def rng(self, *key) -> random.Random:
        return random.Random(":".join([str(self.seed)] + [str(k) for k in key]))


def _rand_matrix(rng, nrows, ncols, bound):
    return [[Fraction(rng.randint(-bound, bound)) for _ in range(ncols)] for _ in range(nrows)]


def _rand_unimodular(rng, n, spread=2):
    upper = linalg.identity(QQ, n)
    lower = linalg.identity(QQ, n)
    for i in range(n):
        for j in range(n):
            if i < j:
                upper[i][j] = Fraction(rng.randint(-spread, spread))
            elif i > j:
                lower[i][j] = Fraction(rng.randint(-spread, spread))
    return linalg.mat_mul(QQ, upper, lower)


def _invert_unimodular(m):
    n = len(m)
    aug = [list(r) + list(e) for r, e in zip(m, linalg.identity(QQ, n))]
    red, _ = linalg.rref(QQ, aug)
    return [row[n:] for row in red]


def _rand_split_matrix(rng, n, bound):
    """Random integer matrix with distinct integer eigenvalues.

    A triangular matrix with distinct diagonal entries conjugated by a random
    unimodular matrix; keeping loop spectra split over Q is what lets the
    point-count oracle recognize degenerate reductions exactly.
    """
    span = max(bound, n)
    diag = rng.sample(range(-span, span + 1), n)
    t = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        t[i][i] = Fraction(diag[i])
        for j in range(i + 1, n):
            t[i][j] = Fraction(rng.randint(-bound, bound))
    g = _rand_unimodular(rng, n)
    return linalg.mat_mul(QQ, linalg.mat_mul(QQ, g, t), _invert_unimodular(g))


def _conjugate_partition(parts):
    if not parts:
        return ()
    out = []
    for j in range(1, max(parts) + 1):
        out.append(sum(1 for p in parts if p >= j))
    return tuple(out)


def _jordan_nilpotent(block_sizes):
    """Nilpotent matrix in Jordan form, ones on the superdiagonal per block."""
    n = sum(block_sizes)
    m = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for b in block_sizes:
        for k in range(b - 1):
            m[off + k][off + k + 1] = Fraction(1)
        off += b
    return m


def commutant_basis(field, m):
    """Exact basis of {c : mc = cm}, scaled to integer entries over Q."""
    n = len(m)
    rows = []
    for r in range(n):
        for c in range(n):
            e = linalg.zeros(field, n, n)
            e[r][c] = field.one
            comm = linalg.mat_sub(field, linalg.mat_mul(field, m, e), linalg.mat_mul(field, e, m))
            rows.append([comm[i][j] for i in range(n) for j in range(n)])
    # rows currently index the unknown; constraints are the transpose
    constraints = linalg.transpose(rows)
    kernel = linalg.nullspace(field, constraints, n * n)
    basis = []
    for vec in kernel:
        if field == QQ:
            vec = linalg.integerize(vec)
        basis.append([[vec[i * n + j] for j in range(n)] for i in range(n)])
    return basis


def _block_intertwiners(m_src, n_tgt):
    """Integer basis of {t : J_tgt t = t J_src} for two nilpotent Jordan blocks."""
    F = QQ
    jsrc = _jordan_nilpotent([m_src])
    jtgt = _jordan_nilpotent([n_tgt])
    constraints = []
    for r in range(n_tgt):
        for c in range(m_src):
            e = linalg.zeros(F, n_tgt, m_src)
            e[r][c] = F.one
            comm = linalg.mat_sub(F, linalg.mat_mul(F, jtgt, e), linalg.mat_mul(F, e, jsrc))
            constraints.append([comm[i][j] for i in range(n_tgt) for j in range(m_src)])
    kernel = linalg.nullspace(F, linalg.transpose(constraints), n_tgt * m_src)
    out = []
    for vec in kernel:
        vec = linalg.integerize(vec)
        out.append([[vec[i * m_src + j] for j in range(m_src)] for i in range(n_tgt)])
    return out


def split_commuting_element(block_sizes, rng, bound):
    """A commuting element with split integer spectrum.

    Block upper triangular over the Jordan block decomposition, with a
    distinct integer scalar on each diagonal block.  Keeping the spectrum
    rational and split is what keeps finite-field point counts of stable-flag
    fibers polynomial in the field size.
    """
    n = sum(block_sizes)
    y = [[Fraction(0)] * n for _ in range(n)]
    span = max(bound, len(block_sizes))
    scalars = rng.sample(range(-span, span + 1), len(block_sizes))
    offsets = []
    off = 0
    for b in block_sizes:
        offsets.append(off)
        off += b
    for q, (bq, oq) in enumerate(zip(block_sizes, offsets)):
        # diagonal block: scalar plus a random polynomial in the block shift
        for k in range(bq):
            y[oq + k][oq + k] += Fraction(scalars[q])
        shift = _jordan_nilpotent([bq])
        power = linalg.identity(QQ, bq)
        for s in range(1, bq):
            power = linalg.mat_mul(QQ, power, shift)
            c = Fraction(rng.randint(-bound, bound))
            for i in range(bq):
                for j in range(bq):
                    y[oq + i][oq + j] += c * power[i][j]
        # strictly-upper cross blocks: random intertwiners
        for p in range(q):
            bp, op = block_sizes[p], offsets[p]
            for t in _block_intertwiners(bq, bp):
                c = Fraction(rng.randint(-bound, bound))
                for i in range(bp):
                    for j in range(bq):
                        y[op + i][oq + j] += c * t[i][j]
    return y


def _one_vertex_rep(quiver: Quiver, v: str, xs, ys) -> Rep:
    n = len(xs[0]) if xs else 0
    alpha = DimVector.unit(quiver, v, n)
    loops = quiver.loops_at(v)
    mats = {}
    for a, xm, ym in zip(loops, xs, ys):
        mats[a] = xm
        mats[f"{a}_bar"] = ym
    return Rep(quiver, alpha, mats, QQ)


def sample_jordan(quiver: Quiver, v: str, parts, cfg: SamplerConfig, salt="") -> Rep:
    """A point of the one-loop component labelled by kernel jumps ``parts``.

    The loop map is nilpotent with dim ker x^i equal to the partial sums of
    parts (Jordan type the conjugate partition); its partner is a split
    generic commuting element, so the bracket vanishes exactly.
    """
    parts = tuple(parts)
    if tuple(sorted(parts, reverse=True)) != parts or any(p <= 0 for p in parts):
        raise ValueError(f"{parts} is not a partition")
    loops = quiver.loops_at(v)
    if len(loops) != 1:
        raise ValueError(f"vertex {v} does not carry exactly one loop")
    blocks = _conjugate_partition(parts)
    x = _jordan_nilpotent(blocks)
    rng = cfg.rng("jordan", v, parts, salt)
    y = split_commuting_element(blocks, rng, cfg.bound)
    rep = _one_vertex_rep(quiver, v, [x], [y])
    assert moment_is_zero(rep)
    res = flags.canonical_chain(rep)
    assert res.seminilpotent
    assert flags.concentrated_steps(res.steps) == tuple(reversed(parts))
    assert flags.nilpotent_kernel_jumps(QQ, x) == parts
    return rep


def multiloop_witness(quiver: Quiver, v: str, parts) -> Rep:
    """Deterministic point with prescribed flag type and zero defects.

    First loop: full staircase blocks down the flag; its partner acts block
    diagonally with globally distinct integer eigenvalues so that consecutive
    quotient spectra are disjoint and quotients are cyclically generated.
    Second loop is the negated staircase with the same partner, which kills
    the bracket; remaining loops are zero.
    """
    loops = quiver.loops_at(v)
    g = len(loops)
    if g < 2:
        raise ValueError("witness construction needs at least two loops")
    parts = tuple(parts)
    n = sum(parts)
    offsets = []
    off = 0
    for p in parts:
        offsets.append(off)
        off += p
    x1 = [[Fraction(0)] * n for _ in range(n)]
    for k in range(len(parts) - 1):
        # all-ones block mapping step k+1 onto a cyclic vector of step k
        for i in range(parts[k]):
            for j in range(parts[k + 1]):
                x1[offsets[k] + i][offsets[k + 1] + j] = Fraction(1)
    y1 = [[Fraction(0)] * n for _ in range(n)]
    c = 1
    for k, p in enumerate(parts):
        for i in range(p):
            y1[offsets[k] + i][offsets[k] + i] = Fraction(c)
            c += 1
    xs = [x1, linalg.mat_scale(QQ, Fraction(-1), x1)] + [linalg.zeros(QQ, n, n) for _ in range(g - 2)]
    ys = [y1, [list(r) for r in y1]] + [linalg.zeros(QQ, n, n) for _ in range(g - 2)]
    rep = _one_vertex_rep(quiver, v, xs, ys)
    assert moment_is_zero(rep)
    return rep


def _phi_kernel_basis(xs, ys, zs):
    """Integer kernel basis of the extension constraint for one-vertex stacking.

    Unknowns are g pairs (u_i, v_i) of maps from the new top block into the
    old space; the constraint is sum(x_i v_i + u_i z_i - y_i u_i) = 0.
    """
    F = QQ
    g = len(xs)
    m = len(xs[0])
    l = len(zs[0])
    ncols = 2 * g * m * l
    rows = [[F.zero] * ncols for _ in range(m * l)]

    def col_index(i, which, r, c):
        return (2 * i + which) * m * l + r * l + c

    for i in range(g):
        for r in range(m):
            for c in range(l):
                # u_i[r][c] appears in (u_i z_i - y_i u_i)
                for cc in range(l):
                    rows[r * l + cc][col_index(i, 0, r, c)] += zs[i][c][cc]
                for rr in range(m):
                    rows[rr * l + c][col_index(i, 0, r, c)] -= ys[i][rr][r]
                # v_i[r][c] appears in x_i v_i
                for rr in range(m):
                    rows[rr * l + c][col_index(i, 1, r, c)] += xs[i][rr][r]
    kernel = linalg.nullspace(F, rows, ncols)
    return [linalg.integerize(vec) for vec in kernel], rows


def _unpack_uv(vec, g, m, l):
    us, vs = [], []
    for i in range(g):
        u = [[vec[(2 * i) * m * l + r * l + c] for c in range(l)] for r in range(m)]
        w = [[vec[(2 * i + 1) * m * l + r * l + c] for c in range(l)] for r in range(m)]
        us.append(u)
        vs.append(w)
    return us, vs


def _stack_stage(xs, ys, zs, us, vs):
    """Assemble the block representation with the new top quotient."""
    F = QQ
    m = len(xs[0])
    l = len(zs[0])
    n = m + l
    nxs, nys = [], []
    for x, y, z, u, v in zip(xs, ys, zs, us, vs):
        nx = linalg.zeros(F, n, n)
        ny = linalg.zeros(F, n, n)
        for i in range(m):
            for j in range(m):
                nx[i][j] = x[i][j]
                ny[i][j] = y[i][j]
        for i in range(m):
            for j in range(l):
                nx[i][m + j] = u[i][j]
                ny[i][m + j] = v[i][j]
        for i in range(l):
            for j in range(l):
                ny[m + i][m + j] = z[i][j]
        nxs.append(nx)
        nys.append(ny)
    return nxs, nys


def _multiloop_ok(rep: Rep, parts) -> bool:
    res = flags.canonical_chain(rep)
    if not res.seminilpotent:
        return False
    if flags.concentrated_steps(res.steps) != tuple(parts):
        return False
    return all(d == 0 for d in flags.intertwiner_defects(rep, res.flag))


def _common_eigenline_free(mats, n) -> bool:
    """No joint stable line or hyperplane over Q for a split tuple."""
    if n <= 1:
        return True
    roots = [linalg.rational_roots(linalg.charpoly(m)) for m in mats]
    for flip in (False, True):
        t = [linalg.transpose(m) for m in mats] if flip else mats
        if linalg.joint_eigen_profile(QQ, t, n, roots):
            return False
    return True


def sample_multiloop(quiver: Quiver, v: str, parts, cfg: SamplerConfig, salt="") -> Rep:
    """A defect-zero point with prescribed canonical flag type, g >= 2 loops.

    Built one flag step at a time: solve the exact linear extension constraint,
    draw a random integer kernel element, and accept only if the canonical type
    and defects come out right.  Falls back to perturbations of the
    deterministic witness before giving up.
    """
    parts = tuple(parts)
    if any(p <= 0 for p in parts):
        raise ValueError(f"{parts} is not a composition")
    loops = quiver.loops_at(v)
    g = len(loops)
    if g < 2:
        raise ValueError(f"vertex {v} needs at least two loops")

    def try_random(rng):
        m0 = parts[0]
        xs = [linalg.zeros(QQ, m0, m0) for _ in range(g)]
        for attempt in range(cfg.retries):
            ys = [_rand_split_matrix(rng, m0, cfg.bound) for _ in range(g)]
            if _common_eigenline_free(ys, m0):
                break
        else:
            return None
        for stage, l in enumerate(parts[1:], start=2):
            prefix = parts[:stage]
            for attempt in range(cfg.retries):
                zs = [_rand_split_matrix(rng, l, cfg.bound) for _ in range(g)]
                kernel, _ = _phi_kernel_basis(xs, ys, zs)
                m = len(xs[0])
                vec = [Fraction(0)] * (2 * g * m * l)
                for b in kernel:
                    c = rng.randint(-cfg.bound, cfg.bound)
                    if c:
                        vec = [a + c * e for a, e in zip(vec, b)]
                us, vs = _unpack_uv(vec, g, m, l)
                nxs, nys = _stack_stage(xs, ys, zs, us, vs)
                rep = _one_vertex_rep(quiver, v, nxs, nys)
                if moment_is_zero(rep) and _multiloop_ok(rep, prefix):
                    xs, ys = nxs, nys
                    break
            else:
                return None
        return _one_vertex_rep(quiver, v, xs, ys)

    for outer in range(cfg.retries):
        rng = cfg.rng("multiloop", v, parts, salt, outer)
        rep = try_random(rng)
        if rep is not None and _multiloop_ok(rep, parts):
            return rep

    witness = multiloop_witness(quiver, v, parts)
    if len(parts) >= 2:
        rng = cfg.rng("multiloop-witness", v, parts, salt)
        m = sum(parts[:-1])
        l = parts[-1]
        wx = [witness.mat(a) for a in loops]
        wy = [witness.mat(f"{a}_bar") for a in loops]
        xs = [[list(r[:m]) for r in x[:m]] for x in wx]
        ys = [[list(r[:m]) for r in y[:m]] for y in wy]
        zs = [[list(r[m:]) for r in y[m:]] for y in wy]
        base_u = [[list(r[m:]) for r in x[:m]] for x in wx]
        base_v = [[list(r[m:]) for r in y[:m]] for y in wy]
        kernel, _ = _phi_kernel_basis(xs, ys, zs)
        for attempt in range(cfg.retries):
            us = [linalg.copy_matrix(u) for u in base_u]
            vs = [linalg.copy_matrix(w) for w in base_v]
            vec = [Fraction(0)] * (2 * len(loops) * m * l)
            for b in kernel:
                c = rng.randint(-cfg.bound, cfg.bound)
                if c:
                    vec = [a + c * e for a, e in zip(vec, b)]
            du, dv = _unpack_uv(vec, len(loops), m, l)
            us = [linalg.mat_add(QQ, u, d) for u, d in zip(us, du)]
            vs = [linalg.mat_add(QQ, w, d) for w, d in zip(vs, dv)]
            nxs, nys = _stack_stage(xs, ys, zs, us, vs)
            rep = _one_vertex_rep(quiver, v, nxs, nys)
            if moment_is_zero(rep) and _multiloop_ok(rep, parts):
                return rep
    if _multiloop_ok(witness, parts):
        return witness
    raise SamplingFailed(f"multiloop type {parts} at vertex {v} (g={g})", cfg.seed)


# ---------------------------------------------------------------------------
# general-quiver extension


def extension_constraint(y: Rep, z: Rep, v: str):
    """Matrix of the linear condition on the connecting block at vertex v.

    Unknowns are the components eta_h from the new block into the old space,
    one for each doubled arrow with source v; the condition is the vanishing
    of the mixed block of the moment map.  Returns (constraint matrix,
    unknown block index) where the index lists (arrow id, rows, cols).
    """
    F = y.field
    l = z.alpha[v]
    blocks = []
    for d in y.quiver.doubled:
        if d.src != v:
            continue
        tdim = y.alpha[d.tgt]
        if tdim == 0 or l == 0:
            continue
        blocks.append((d.aid, tdim, l))
    ncols = sum(t * l for _, t, l in blocks)
    target = y.alpha[v] * l
    rows = [[F.zero] * ncols for _ in range(target)]
    col0 = 0
    for aid, tdim, lcols in blocks:
        d = y.quiver.arrow(aid)
        ybar = y.mat(d.bar)  # target -> v inside the old space
        for r in range(tdim):
            for c in range(lcols):
                col = col0 + r * lcols + c
                sign = d.sign
                # term y_{h bar} eta_h lands in Hom(new block, old at v)
                for rr in range(y.alpha[v]):
                    val = ybar[rr][r]
                    if not F.is_zero(val):
                        val = F.mul(F.of(sign), val)
                        rows[rr * l + c][col] = F.add(rows[rr * l + c][col], val)
                if d.tgt == v:
                    # loop at v: eta also appears composed with the new block action
                    zbar = z.mat(d.bar)
                    for cc in range(l):
                        val = zbar[c][cc]
                        if not F.is_zero(val):
                            val = F.mul(F.of(-sign), val)
                            rows[r * l + cc][col] = F.add(rows[r * l + cc][col], val)
        col0 += tdim * lcols
    return rows, blocks


def _assemble_extension(y: Rep, z: Rep, v: str, blocks, vec) -> Rep:
    """Block representation with diagonal (y, z) and connecting components vec.

    At vertex v the old space occupies the leading coordinates and the new
    block the trailing ones, so the old space is spanned by leading unit
    vectors and stays an exact graded subspace of the result.
    """
    F = y.field
    quiver = y.quiver
    alpha = y.alpha + DimVector.unit(quiver, v, z.alpha[v])
    eta = {}
    k = 0
    for aid, tdim, lcols in blocks:
        eta[aid] = [[vec[k + r * lcols + c] for c in range(lcols)] for r in range(tdim)]
        k += tdim * lcols
    mats = {}
    off = y.alpha[v]
    for d in quiver.doubled:
        m = linalg.zeros(F, alpha[d.tgt], alpha[d.src])
        ym = y.mat(d.aid)
        for i in range(y.alpha[d.tgt]):
            for j in range(y.alpha[d.src]):
                m[i][j] = ym[i][j]
        if d.aid in eta:
            for i in range(y.alpha[d.tgt]):
                for j in range(z.alpha[v]):
                    m[i][off + j] = eta[d.aid][i][j]
        if d.src == v and d.tgt == v:
            zm = z.mat(d.aid)
            for i in range(z.alpha[v]):
                for j in range(z.alpha[v]):
                    m[off + i][off + j] = zm[i][j]
        mats[d.aid] = m
    return Rep(quiver, alpha, mats, F)


def extend_point(y: Rep, z: Rep, v: str, cfg: SamplerConfig, salt="") -> Rep:
    """Stack a concentrated block z on top of y at vertex v.

    Requires the old part to be generated away from v (peeling codimension 0)
    and z seminilpotent; the connecting block is a random integer element of
    the exact kernel of the extension constraint.  The result always has
    moment map zero; acceptance re-checks seminilpotency and the peeling
    codimension at v.
    """
    if flags.ideal_codim(y, v) != 0:
        raise ValueError(f"base point is not generated away from {v!r}")
    if not flags.is_seminilpotent(z):
        raise ValueError("top block is not seminilpotent")
    l = z.alpha[v]
    rows, blocks = extension_constraint(y, z, v)
    ncols = sum(t * lc for _, t, lc in blocks)
    kernel = [linalg.integerize(b) for b in linalg.nullspace(y.field, rows, ncols)]
    rng = cfg.rng("extend", v, l, salt)
    for attempt in range(cfg.retries):
        vec = [Fraction(0)] * ncols
        for b in kernel:
            c = rng.randint(-cfg.bound, cfg.bound)
            if c:
                vec = [a + c * e for a, e in zip(vec, b)]
        x = _assemble_extension(y, z, v, blocks, vec)
        if moment_is_zero(x) and flags.is_seminilpotent(x) and flags.ideal_codim(x, v) == l:
            return x
    raise SamplingFailed(f"extension at vertex {v} with block size {l}", cfg.seed)


def sample_component(label, cfg: SamplerConfig, salt="", expect_signature=None) -> Rep:
    """Dispatch a label to its constructive sampler; certify before returning.

    When the catalogued generic peeling signature is supplied, samples whose
    signature degenerates anywhere are rejected and redrawn.
    """
    from . import components

    if isinstance(label, components.EmptyLabel):
        return zero_rep(label.quiver, DimVector.zero(label.quiver))
    if isinstance(label, components.OneVertexLabel):
        if label.kind == "point":
            return zero_rep(label.quiver, label.alpha)
        if label.kind == "partition":
            return sample_jordan(label.quiver, label.vertex, label.parts, cfg, salt)
        return sample_multiloop(label.quiver, label.vertex, label.parts, cfg, salt)
    # peel label: sample the two halves and stack
    for attempt in range(cfg.retries):
        inner_salt = f"{salt}|{attempt}"
        y = sample_component(label.rest, cfg, inner_salt + "r")
        if flags.ideal_codim(y, label.vertex) != 0:
            continue
        z = sample_component(label.inner, cfg, inner_salt + "i")
        try:
            x = extend_point(y, z, label.vertex, cfg, inner_salt)
        except SamplingFailed:
            continue
        if expect_signature is not None and any(
            flags.ideal_codim(x, u) != expect_signature[u] for u in label.quiver.vertices
        ):
            continue
        return x
    raise SamplingFailed(f"component {label}", cfg.seed)


def certificate(x: Rep, cfg: SamplerConfig | None = None) -> dict:
    """Exact membership certificate: the open conditions a sample must pass."""
    res = flags.canonical_chain(x)
    out = {
        "mu_zero": moment_is_zero(x),
        "seminilpotent": res.seminilpotent,
        "w": [s.as_dict() for s in res.steps] if res.steps is not None else None,
        "eps": {v: flags.ideal_codim(x, v) for v in x.quiver.vertices},
    }
    con = x.alpha.concentrated()
    if con is not None and res.seminilpotent and x.quiver.loops_at(con[0]):
        out["delta"] = list(flags.intertwiner_defects(x, res.flag))
    else:
        out["delta"] = None
    if cfg is not None:
        out["seed"] = cfg.seed
    return out
