"""Convolution algebra of constructible functions on the component varieties.

Functions are kept symbolic as rational combinations of generator words and
are only ever evaluated through the point-count oracle: the value of a word
at a point is the Euler characteristic of the variety of graded flags, stable
under every doubled arrow, whose step sizes follow the word read right to
left (rightmost generator innermost) and whose induced declared-loop maps
vanish on each step quotient.  The characteristic is obtained by counting
the fiber over several prime fields and evaluating the interpolating count
polynomial at one; a failed polynomial fit is a first-class error, never an
approximation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import factorial

from . import flags, linalg
from .components import (
    Catalog,
    OneVertexLabel,
    dominated_by,
    enumerate_components,
    label_samples,
    one_vertex_labels,
    prefix_sums,
)
from .linalg import QQ, BadPrime
from .quiver import DimVector, Quiver
from .rep import Rep, moment_is_zero, reduce_mod_p
from .sampler import SamplerConfig

DEFAULT_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


class DegreeMismatch(ValueError):
    pass


class OracleError(RuntimeError):
    pass


class NonPolynomialCount(OracleError):
    def __init__(self, counts, fitted):
        self.counts = counts
        self.fitted = fitted
        super().__init__(
            f"point counts {counts} do not follow the fitted degree-bounded polynomial {fitted}"
        )


class NoConsensus(RuntimeError):
    def __init__(self, values):
        self.values = values
        super().__init__(f"sampled values disagree: {values}")


# ---------------------------------------------------------------------------
# symbolic functions: rational combinations of atom words


class ConvFunction:
    """Formal rational combination of generator words of one total degree.

    A word is a tuple of atoms (vertex, size), leftmost factor first; all
    words of one function share the same degree, and convolution concatenates
    words so that the left factor constrains the top flag steps.
    """

    __slots__ = ("quiver", "alpha", "terms")

    def __init__(self, quiver: Quiver, alpha: DimVector, terms):
        self.quiver = quiver
        self.alpha = alpha
        clean = {}
        for word, coeff in terms.items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            if word_degree(quiver, word) != alpha:
                raise DegreeMismatch(f"word {word} does not have degree {alpha.counts}")
            clean[tuple(word)] = coeff
        self.terms = clean

    def __add__(self, other: "ConvFunction") -> "ConvFunction":
        if self.alpha != other.alpha:
            raise DegreeMismatch("can only add functions of equal degree")
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, Fraction(0)) + c
        return ConvFunction(self.quiver, self.alpha, terms)

    def __sub__(self, other: "ConvFunction") -> "ConvFunction":
        return self + other.scale(-1)

    def scale(self, c) -> "ConvFunction":
        c = Fraction(c)
        return ConvFunction(self.quiver, self.alpha, {w: c * x for w, x in self.terms.items()})

    def convolve(self, other: "ConvFunction") -> "ConvFunction":
        """Bilinear product; left factor lands on the top flag steps."""
        alpha = self.alpha + other.alpha
        terms = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                terms[w] = terms.get(w, Fraction(0)) + c1 * c2
        return ConvFunction(self.quiver, alpha, terms)

    def to_json(self):
        items = sorted(self.terms.items())
        return [
            {"coeff": str(c), "word": [[v, l] for v, l in w]} for w, c in items
        ]

    def __eq__(self, other):
        return (
            isinstance(other, ConvFunction)
            and self.quiver == other.quiver
            and self.alpha == other.alpha
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "ConvFunction(0)"
        bits = []
        for w, c in sorted(self.terms.items()):
            word = "*".join(f"1_({v},{l})" for v, l in w)
            bits.append(f"{c}*{word}")
        return " + ".join(bits)


def word_degree(quiver: Quiver, word) -> DimVector:
    d = DimVector.zero(quiver)
    for v, l in word:
        d = d + DimVector.unit(quiver, v, l)
    return d


def atom(quiver: Quiver, v: str, l: int) -> ConvFunction:
    """The generator supported where all declared loop maps at v vanish."""
    if l < 1:
        raise ValueError("atom size must be positive")
    if not quiver.loops_at(v) and l != 1:
        raise ValueError(f"vertex {v} carries no loop; only size 1 is a generator")
    word = ((v, l),)
    return ConvFunction(quiver, DimVector.unit(quiver, v, l), {word: Fraction(1)})


def unit_power(quiver: Quiver, v: str, l: int) -> ConvFunction:
    """Normalized l-fold product of the loop-free generator at v; value 1 on the point."""
    word = tuple((v, 1) for _ in range(l))
    return ConvFunction(
        quiver, DimVector.unit(quiver, v, l), {word: Fraction(1, factorial(l))}
    )


# ---------------------------------------------------------------------------
# the point-count oracle


def _subspace_rref_matrices(p: int, l: int, d: int):
    """All reduced-echelon l x d matrices over F_p (one per l-dim subspace)."""
    if l == 0:
        yield []
        return
    for pivots in combinations(range(d), l):
        freepos = []
        for i, pc in enumerate(pivots):
            for j in range(pc + 1, d):
                if j not in pivots:
                    freepos.append((i, j))
        for assignment in product(range(p), repeat=len(freepos)):
            m = [[0] * d for _ in range(l)]
            for i, pc in enumerate(pivots):
                m[i][pc] = 1
            for (i, j), val in zip(freepos, assignment):
                m[i][j] = val
            yield m


def flag_fiber_count(xp: Rep, steps) -> int:
    """Number of constrained graded flags of one representation over F_p.

    steps are (vertex, size) pairs, innermost first; every partial flag
    member must be stable under all doubled arrows and the induced declared
    loop maps must vanish on each new quotient.
    """
    from .rep import GradedSubspace

    F = xp.field
    p = F.p
    quiver = xp.quiver

    def extend(w: "GradedSubspace", k: int) -> int:
        if k == len(steps):
            return 1
        v, l = steps[k]
        comp = w.complement_positions(v)
        d0 = len(comp)
        if l > d0:
            return 0
        # induced quotient maps out of v, in complement coordinates
        constraint_rows = []
        invariance = []
        for d in quiver.doubled:
            if d.src != v:
                continue
            m = xp.mat(d.aid)
            reduced_cols = []
            for c in comp:
                e = [F.zero] * xp.alpha[v]
                e[c] = F.one
                reduced_cols.append(w.reduce(d.tgt, linalg.mat_apply(F, m, e)))
            if d.tgt != v or d.sign == 1:
                # images must fall into the previous flag member (vanish in the quotient)
                constraint_rows.extend(linalg.transpose(reduced_cols))
            else:
                comp_t = w.complement_positions(d.tgt)
                induced = [[col[j] for col in reduced_cols] for j in comp_t]
                invariance.append(induced)
        dspace = (
            linalg.nullspace(F, constraint_rows, d0)
            if constraint_rows
            else linalg.identity(F, d0)
        )
        if len(dspace) < l:
            return 0
        total = 0
        for small in _subspace_rref_matrices(p, l, len(dspace)):
            rows = linalg.mat_mul(F, small, dspace) if small else []
            red, piv = linalg.rref(F, rows)
            ok = True
            for op in invariance:
                for r in red:
                    img = linalg.mat_apply(F, op, r)
                    if linalg.coords_against(F, red, piv, img) is None:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            ambient_rows = []
            for r in red:
                vec = [F.zero] * xp.alpha[v]
                for val, pos in zip(r, comp):
                    vec[pos] = val
                ambient_rows.append(vec)
            merged = {u: list(w.at(u)) for u in quiver.vertices}
            merged[v] = merged[v] + ambient_rows
            total += extend(GradedSubspace(F, xp.alpha, merged), k + 1)
        return total

    from .rep import GradedSubspace as GS

    return extend(GS.zero(F, xp.alpha), 0)


def brute_force_count_f2(x2: Rep, steps) -> int:
    """Direct flag count over F_2 by enumerating additively closed subsets.

    Deliberately independent of the echelon enumeration; only usable for
    small total dimension.
    """
    F = x2.field
    if F.p != 2:
        raise ValueError("brute force checker works over F_2 only")
    quiver = x2.quiver

    def all_subspaces(n):
        vectors = [tuple(v) for v in product((0, 1), repeat=n)]
        nonzero = [v for v in vectors if any(v)]
        spaces = []
        for mask in range(1 << len(nonzero)):
            chosen = [nonzero[i] for i in range(len(nonzero)) if mask >> i & 1]
            s = set(chosen) | {tuple([0] * n)}
            closed = all(
                tuple((a + b) % 2 for a, b in zip(u, w)) in s for u in s for w in s
            )
            if closed:
                spaces.append(frozenset(s))
        return spaces

    spaces = {v: all_subspaces(x2.alpha[v]) for v in quiver.vertices}

    def dim(space):
        return len(space).bit_length() - 1

    def apply(aid, vec):
        return tuple(linalg.mat_apply(F, x2.mat(aid), list(vec)))

    def count(current, k):
        if k == len(steps):
            return 1
        v, l = steps[k]
        total = 0
        for cand in spaces[v]:
            if dim(cand) != dim(current[v]) + l or not current[v] <= cand:
                continue
            nxt = dict(current)
            nxt[v] = cand
            stable = all(
                apply(d.aid, vec) in nxt[d.tgt]
                for d in quiver.doubled
                for vec in nxt[d.src]
            )
            if not stable:
                continue
            killed = all(
                apply(d.aid, vec) in current[v]
                for d in quiver.doubled
                if d.src == v and d.tgt == v and d.sign == 1
                for vec in cand
            )
            if not killed:
                continue
            total += count(nxt, k + 1)
        return total

    zero = {v: frozenset({tuple([0] * x2.alpha[v])}) for v in quiver.vertices}
    return count(zero, 0)


def _loop_profile(m):
    """Rational spectral shape of a square matrix: squarefree part and power ranks."""
    radical = linalg.poly_radical(linalg.charpoly(m))
    gm = linalg.matrix_poly_eval(QQ, radical, m)
    ranks = []
    power = linalg.identity(QQ, len(m))
    for _ in range(len(m)):
        power = linalg.mat_mul(QQ, power, gm)
        ranks.append(linalg.rank(QQ, power))
    return radical, tuple(ranks)


def _vertex_loop_mats(x: Rep, v: str):
    mats = []
    for a in x.quiver.loops_at(v):
        mats.append([list(r) for r in x.mat(a)])
        mats.append([list(r) for r in x.mat(f"{a}_bar")])
    return mats


def _vertex_arrangement(x: Rep, v: str, loop_mats, roots_by_matrix):
    """Canonical rational subspaces at a vertex: loop eigenspaces, kernels of
    outgoing arrows, images of incoming ones.  Their incidence pattern is
    what constrained-flag fibers are cut out of."""
    F = x.field
    n = x.alpha[v]
    items = []
    for m, roots in zip(loop_mats, roots_by_matrix):
        for lam in roots:
            shifted = [
                [F.sub(m[r][c], F.of(lam) if r == c else F.zero) for c in range(n)]
                for r in range(n)
            ]
            items.append(linalg.nullspace(F, shifted, n))
    for d in x.quiver.doubled:
        if d.src == v and d.tgt != v and x.alpha[d.tgt] > 0:
            items.append(linalg.nullspace(F, [list(r) for r in x.mat(d.aid)], n))
        if d.tgt == v and d.src != v and x.alpha[d.src] > 0:
            rows = linalg.transpose([list(r) for r in x.mat(d.aid)])
            items.append(linalg.rref(F, rows)[0])
    return items


def _arrangement_profile(field, items, n, max_subset=3):
    """Intersection and sum dimensions over small subsets of an arrangement."""
    anns = [linalg.nullspace(field, rows, n) if rows else linalg.identity(field, n) for rows in items]
    profile = []
    idx = list(range(len(items)))
    for size in range(1, max_subset + 1):
        for subset in combinations(idx, size):
            stack_sum = [r for i in subset for r in items[i]]
            stack_ann = [r for i in subset for r in anns[i]]
            dim_sum = linalg.rank(field, stack_sum) if stack_sum else 0
            dim_int = n - (linalg.rank(field, stack_ann) if stack_ann else 0)
            profile.append((subset, dim_sum, dim_int))
    return tuple(profile)


_GOOD_PRIME_CACHE: dict = {}


def good_prime(x: Rep, p: int) -> bool:
    """Whether reduction mod p preserves the sample's linear-algebra shape.

    Requires, in order: no denominator divisible by p; every arrow matrix and
    every composable product of two arrow matrices keeps its rank; every loop
    matrix keeps its rational spectral structure (squarefree part of the
    characteristic polynomial stays squarefree mod p with unchanged power
    ranks); the canonical chain keeps its type; and the joint rational
    eigenspace profile of the loop tuple at each vertex is unchanged, which
    accounts for every common stable line the reduction could gain or lose.
    Degenerate reductions are non-generic points of the fiber geometry and
    are skipped by the oracle.
    """
    key = (x, p)
    if key in _GOOD_PRIME_CACHE:
        return _GOOD_PRIME_CACHE[key]
    result = _good_prime(x, p)
    _GOOD_PRIME_CACHE[key] = result
    return result


def _good_prime(x: Rep, p: int) -> bool:
    try:
        xp = reduce_mod_p(x, p)
        return _good_prime_checks(x, xp)
    except BadPrime:
        return False


def _good_prime_checks(x: Rep, xp: Rep) -> bool:
    F = xp.field
    mats_q = {d.aid: [list(r) for r in x.mat(d.aid)] for d in x.quiver.doubled}
    mats_p = {d.aid: [list(r) for r in xp.mat(d.aid)] for d in x.quiver.doubled}
    for d in x.quiver.doubled:
        if linalg.rank(QQ, mats_q[d.aid]) != linalg.rank(F, mats_p[d.aid]):
            return False
        for e in x.quiver.doubled:
            if e.tgt != d.src or x.alpha[e.src] == 0 or x.alpha[d.tgt] == 0 or x.alpha[d.src] == 0:
                continue
            prod_q = linalg.mat_mul(QQ, mats_q[d.aid], mats_q[e.aid])
            prod_p = linalg.mat_mul(F, mats_p[d.aid], mats_p[e.aid])
            if linalg.rank(QQ, prod_q) != linalg.rank(F, prod_p):
                return False
        if d.src == d.tgt and x.alpha[d.src] > 0:
            radical, ranks = _loop_profile(mats_q[d.aid])
            try:
                rad_p = [F.of(c) for c in radical]
            except BadPrime:
                return False
            if linalg.poly_gcd(F, rad_p, linalg.poly_deriv(F, rad_p)) != [F.one]:
                return False
            gmp = linalg.matrix_poly_eval(F, rad_p, mats_p[d.aid])
            power = linalg.identity(F, len(gmp))
            for k in range(len(gmp)):
                power = linalg.mat_mul(F, power, gmp)
                if linalg.rank(F, power) != ranks[k]:
                    return False
    res_q = flags.canonical_chain(x)
    res_p = flags.canonical_chain(xp)
    if res_q.seminilpotent != res_p.seminilpotent:
        return False
    if res_q.seminilpotent and [s.counts for s in res_q.steps] != [s.counts for s in res_p.steps]:
        return False
    for v in x.quiver.vertices:
        mq = _vertex_loop_mats(x, v)
        if not mq or x.alpha[v] == 0:
            continue
        # the joint profile is a complete invariant only when every loop
        # spectrum splits over Q (then any common stable line is rational);
        # otherwise leave coincidences to the interpolation validation
        radicals = [linalg.poly_radical(linalg.charpoly(m)) for m in mq]
        roots_q = [linalg.rational_roots(rad) for rad in radicals]
        if any(len(r) != len(rad) - 1 for r, rad in zip(roots_q, radicals)):
            continue
        mp = _vertex_loop_mats(xp, v)
        n = x.alpha[v]
        roots_p = [linalg.roots_mod_p(F, [F.of(c) for c in linalg.charpoly(m)]) for m in mq]
        # common stable lines, and common stable hyperplanes via the
        # transposed tuple (annihilators turn invariant planes into lines)
        for flip in (False, True):
            tq = [linalg.transpose(m) for m in mq] if flip else mq
            tp = [linalg.transpose(m) for m in mp] if flip else mp
            prof_q = linalg.joint_eigen_profile(QQ, tq, n, roots_q)
            prof_p = linalg.joint_eigen_profile(F, tp, n, roots_p)
            if prof_q != prof_p:
                return False
        # mixed incidences with the connecting arrows
        items_q = _vertex_arrangement(x, v, mq, roots_q)
        items_p = _vertex_arrangement(xp, v, mp, [[F.of(r) for r in rs] for rs in roots_q])
        if _arrangement_profile(QQ, items_q, n) != _arrangement_profile(F, items_p, n):
            return False
    return True


def _prime_stream(primes, cap=199):
    """The configured pool, extended by the next primes when it runs dry."""
    seen = set()
    for p in primes:
        seen.add(p)
        yield p
    start = max(primes) + 1 if primes else 2
    for n in range(start, cap + 1):
        if n not in seen and linalg.is_prime(n):
            yield n


def flag_fiber_euler(x: Rep, steps, primes=DEFAULT_PRIMES) -> int:
    """Euler characteristic of the constrained flag fiber via point counts.

    Counts over the first (dim + 2) good primes, fits the unique polynomial
    of degree at most the ambient flag variety dimension through the first
    dim + 1 counts, validates the fit on the rest, and evaluates at one.
    Primes whose reduction degenerates the point are skipped, extending past
    the configured pool if necessary.
    """
    if x.field != QQ:
        raise ValueError("the oracle wants a rational representation")
    shape = [DimVector.unit(x.quiver, v, l) for v, l in steps]
    d = flags.flag_variety_dim(shape)
    need = d + 2
    counts = []
    for p in _prime_stream(primes):
        if not good_prime(x, p):
            continue
        counts.append((p, flag_fiber_count(reduce_mod_p(x, p), steps)))
        if len(counts) == need:
            break
    if len(counts) < need:
        raise OracleError(
            f"prime pool {primes} has fewer than {need} good primes for this point"
        )
    coeffs = linalg.lagrange_interpolate(counts[: d + 1])
    for p, n in counts[d + 1 :]:
        if linalg.poly_eval(coeffs, p) != n:
            raise NonPolynomialCount(counts, coeffs)
    chi = linalg.poly_eval(coeffs, 1)
    if chi.denominator != 1:
        raise NonPolynomialCount(counts, coeffs)
    return int(chi)


def evaluate_word(word, x: Rep, primes=DEFAULT_PRIMES, check=True) -> int:
    """Value of a generator word at a rational point."""
    if word_degree(x.quiver, word) != x.alpha:
        raise DegreeMismatch(
            f"word degree {word_degree(x.quiver, word).counts} != point degree {x.alpha.counts}"
        )
    if check and not (moment_is_zero(x) and flags.is_seminilpotent(x)):
        raise ValueError("points must satisfy the moment map and seminilpotency conditions")
    steps = [(v, l) for v, l in reversed(word)]
    return flag_fiber_euler(x, steps, primes)


def evaluate(f: ConvFunction, x: Rep, primes=DEFAULT_PRIMES, check=True) -> Fraction:
    if f.alpha != x.alpha:
        raise DegreeMismatch("function and point degrees differ")
    if check and not (moment_is_zero(x) and flags.is_seminilpotent(x)):
        raise ValueError("points must satisfy the moment map and seminilpotency conditions")
    total = Fraction(0)
    for w, c in f.terms.items():
        total += c * evaluate_word(w, x, primes, check=False)
    return total


def consensus_value(f: ConvFunction, samples, primes=DEFAULT_PRIMES) -> Fraction:
    values = [evaluate(f, x, primes) for x in samples]
    if any(v != values[0] for v in values):
        raise NoConsensus(values)
    return values[0]


_CONSENSUS_BATCHES = 8


def component_values(functions, component, cfg: SamplerConfig, primes=DEFAULT_PRIMES, salt="rho"):
    """Consensus values of several functions on one component.

    A certified sample can still be non-generic for a particular function;
    a batch that disagrees on any value is discarded and redrawn, and only a
    persistently split batch is reported.
    """
    label = component.label if hasattr(component, "label") else component
    expect = component.signature if hasattr(component, "signature") else None
    for f in functions.values():
        if f.alpha != label.alpha:
            raise DegreeMismatch("function degree differs from the component degree")
    for attempt in range(_CONSENSUS_BATCHES):
        xs = label_samples(label, cfg, salt=f"{salt}{attempt}", expect_signature=expect)
        try:
            return {k: consensus_value(f, xs, primes) for k, f in functions.items()}, xs
        except NoConsensus:
            if attempt == _CONSENSUS_BATCHES - 1:
                raise
    raise AssertionError("unreachable")


def generic_value(f: ConvFunction, component, cfg: SamplerConfig, primes=DEFAULT_PRIMES) -> Fraction:
    """The constant value of f on a dense part of a component.

    Accepts a label or a catalog entry; with an entry, samples are certified
    against its stored peeling signature.
    """
    values, _ = component_values({"f": f}, component, cfg, primes)
    return values["f"]


# ---------------------------------------------------------------------------
# the unitriangular one-vertex basis


def _descending_tuples(tuples, total):
    return sorted(tuples, key=lambda w: prefix_sums(w, total), reverse=True)


def tilde_function(quiver: Quiver, v: str, parts) -> ConvFunction:
    """Product of atoms realizing a tuple, largest flag step leftmost."""
    f = atom(quiver, v, parts[-1])
    for part in reversed(parts[:-1]):
        f = f.convolve(atom(quiver, v, part))
    return f


@dataclass
class BasisResult:
    order: list                 # tuples, triangularity-descending
    basis: dict                 # tuple -> ConvFunction
    matrix: dict                # (row tuple, column tuple) -> Fraction, rho of tilde


def one_vertex_basis(quiver: Quiver, v: str, n: int, cfg: SamplerConfig, primes=DEFAULT_PRIMES) -> BasisResult:
    """Functions indexed by the one-vertex component tuples with identity rho matrix.

    The raw transition matrix of atom-word products against components is
    asserted unitriangular for partial-sum domination with unit diagonal, and
    inverted by descending elimination.
    """
    g = len(quiver.loops_at(v))
    if g == 0:
        if n < 1:
            raise ValueError("degree must be positive")
        return BasisResult([(n,)], {(n,): unit_power(quiver, v, n)}, {((n,), (n,)): Fraction(1)})
    labels = {lab.parts: lab for lab in one_vertex_labels(quiver, v, n)}
    order = _descending_tuples(labels.keys(), n)
    tildes = {w: tilde_function(quiver, v, w) for w in order}
    matrix = {}
    for wrow in order:
        values, xs = component_values(tildes, labels[wrow], cfg, primes, salt="basis")
        for x in xs:
            _assert_alignment(x, wrow, g)
        for wcol in order:
            val = values[wcol]
            matrix[(wrow, wcol)] = val
            if wrow == wcol and val != 1:
                raise OracleError(f"diagonal value at {wrow} is {val}, not 1")
            if val != 0 and not dominated_by(wcol, wrow):
                raise OracleError(
                    f"triangularity violated: rho_{wrow}(tilde {wcol}) = {val}"
                )
    basis = {}
    for w in order:
        f = tilde_function(quiver, v, w)
        for prev in order:
            if prev == w:
                break
            c = matrix[(prev, w)]
            if c != 0:
                f = f - basis[prev].scale(c)
        basis[w] = f
    return BasisResult(order, basis, matrix)


def _assert_alignment(x: Rep, parts, g: int):
    """Samples must carry the labelling flag data their tuple promises."""
    if g == 1:
        v = x.alpha.concentrated()[0]
        loop = x.quiver.loops_at(v)[0]
        jumps = flags.nilpotent_kernel_jumps(x.field, list(map(list, x.mat(loop))))
        if jumps != tuple(parts):
            raise OracleError(f"kernel jumps {jumps} disagree with label {parts}")
    else:
        ktype = flags.kernel_type(x)
        if ktype != tuple(parts):
            raise OracleError(f"kernel chain type {ktype} disagrees with label {parts}")


# ---------------------------------------------------------------------------
# distinguishing functions on a general quiver


@dataclass
class DistinguishedResult:
    catalog: Catalog
    functions: dict             # label key -> ConvFunction
    matrix: dict                # (row label key, column label key) -> Fraction


def _generator_for(quiver: Quiver, inner: OneVertexLabel, basis_cache, cfg, primes) -> ConvFunction:
    v, total = inner.vertex, sum(inner.parts)
    if inner.kind == "point":
        return unit_power(quiver, v, total)
    key = (v, total)
    if key not in basis_cache:
        basis_cache[key] = one_vertex_basis(quiver, v, total, cfg, primes)
    return basis_cache[key].basis[inner.parts]


def distinguished_functions(quiver: Quiver, alpha, cfg: SamplerConfig, primes=DEFAULT_PRIMES) -> DistinguishedResult:
    """One function per component of (quiver, alpha) with identity rho matrix.

    Peel the canonical vertex, convolve the top-block basis function with the
    distinguishing function of the rest, then clear the components of larger
    peeling codimension by descending corrections.
    """
    alpha = DimVector.of(quiver, alpha)
    basis_cache = {}
    memo = {}

    def build(a: DimVector) -> DistinguishedResult:
        if a.counts in memo:
            return memo[a.counts]
        catalog = enumerate_components(quiver, a, cfg)
        functions = {}
        con = a.concentrated()
        if a.is_zero():
            lab = catalog.entries[0].label
            functions[lab.key()] = ConvFunction(quiver, a, {(): Fraction(1)})
        elif con is not None:
            v, n = con
            if not quiver.loops_at(v):
                lab = catalog.entries[0].label
                functions[lab.key()] = unit_power(quiver, v, n)
            else:
                result = one_vertex_basis(quiver, v, n, cfg, primes)
                for entry in catalog.entries:
                    functions[entry.label.key()] = result.basis[entry.label.parts]
        else:
            entries = list(catalog.entries)
            entries.sort(
                key=lambda e: (
                    quiver.vertex_index(e.label.vertex),
                    -e.signature[e.label.vertex],
                )
            )
            for entry in entries:
                label = entry.label
                v, l = label.vertex, label.size
                rest_result = build(label.rest.alpha)
                g_rest = rest_result.functions[label.rest.key()]
                top = _generator_for(quiver, label.inner, basis_cache, cfg, primes)
                f = top.convolve(g_rest)
                for other in entries:
                    if other is entry:
                        continue
                    if other.signature[v] <= l:
                        continue
                    okey = other.label.key()
                    if okey not in functions:
                        raise RuntimeError(
                            f"correction order broke: {okey} not built before {label.key()}"
                        )
                    values, _ = component_values({"f": f}, other, cfg, primes, salt="distfix")
                    if values["f"] != 0:
                        f = f - functions[okey].scale(values["f"])
                functions[label.key()] = f
        result = DistinguishedResult(catalog, functions, {})
        memo[a.counts] = result
        return result

    result = build(alpha)
    # verification matrix over the target degree only
    matrix = {}
    for erow in result.catalog.entries:
        values, _ = component_values(result.functions, erow, cfg, primes, salt="distcheck")
        for ecol in result.catalog.entries:
            matrix[(erow.label.key(), ecol.label.key())] = values[ecol.label.key()]
    return DistinguishedResult(result.catalog, result.functions, matrix)
