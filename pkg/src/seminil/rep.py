"""Representations of the doubled quiver and graded subspaces.

A representation assigns a matrix to every doubled arrow; shapes follow the
dimension vector at each endpoint.  Values are immutable after construction
and safe to share across workers.  Graded subspaces are canonicalized by
per-vertex reduced echelon form, so subspace equality is structural equality.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .linalg import QQ, BadPrime, PrimeField
from .quiver import DimVector, Quiver


class RepError(ValueError):
    pass


class StabilityError(RepError):
    def __init__(self, aid):
        self.aid = aid
        super().__init__(f"subspace is not stable under arrow {aid!r}")


class Rep:
    """An element of the doubled representation space for (quiver, alpha)."""

    __slots__ = ("quiver", "alpha", "field", "mats")

    def __init__(self, quiver: Quiver, alpha, mats=None, field=QQ):
        alpha = DimVector.of(quiver, alpha)
        self.quiver = quiver
        self.alpha = alpha
        self.field = field
        mats = dict(mats or {})
        store = {}
        for d in quiver.doubled:
            nrows, ncols = alpha[d.tgt], alpha[d.src]
            m = mats.pop(d.aid, None)
            if m is None:
                m = linalg.zeros(field, nrows, ncols)
            if len(m) != nrows or any(len(r) != ncols for r in m):
                raise RepError(
                    f"arrow {d.aid}: expected shape {nrows}x{ncols}"
                )
            store[d.aid] = tuple(tuple(field.of(x) for x in row) for row in m)
        if mats:
            raise RepError(f"unknown arrow ids {sorted(mats)}")
        self.mats = store

    def mat(self, aid: str):
        return self.mats[aid]

    def is_zero(self) -> bool:
        return all(
            self.field.is_zero(x) for m in self.mats.values() for row in m for x in row
        )

    def __eq__(self, other):
        return (
            isinstance(other, Rep)
            and self.quiver == other.quiver
            and self.alpha == other.alpha
            and self.field == other.field
            and self.mats == other.mats
        )

    def __hash__(self):
        return hash((self.quiver, self.alpha.counts, self.field, tuple(sorted(self.mats.items()))))

    def to_json(self) -> dict:
        entries = {}
        for aid, m in self.mats.items():
            entries[aid] = [[str(x) for x in row] for row in m]
        field = "Q" if self.field == QQ else {"p": self.field.p}
        return {"alpha": self.alpha.as_dict(), "field": field, "entries": entries}

    @classmethod
    def from_json(cls, quiver: Quiver, doc: dict) -> "Rep":
        field = QQ if doc.get("field", "Q") == "Q" else PrimeField(doc["field"]["p"])
        alpha = DimVector.of(quiver, doc["alpha"])
        mats = {
            aid: [[field.of(Fraction(x)) for x in row] for row in m]
            for aid, m in doc["entries"].items()
        }
        return cls(quiver, alpha, mats, field)


def zero_rep(quiver: Quiver, alpha, field=QQ) -> Rep:
    return Rep(quiver, alpha, {}, field)


def _mm(field, a, b, nrows, ncols):
    """Matrix product with explicit output shape, sound through 0-dim spaces."""
    if nrows == 0 or ncols == 0 or not b or (a and not a[0]):
        return linalg.zeros(field, nrows, ncols)
    return linalg.mat_mul(field, a, b)


def moment_map(x: Rep) -> dict:
    """Per-vertex component of the quadratic moment map.

    At vertex i this is the signed sum over doubled arrows h with source i of
    x_{h bar} x_h, an alpha_i x alpha_i matrix.  Its zero fiber is the ambient
    of all varieties considered here.
    """
    F = x.field
    out = {}
    for v in x.quiver.vertices:
        n = x.alpha[v]
        acc = linalg.zeros(F, n, n)
        for d in x.quiver.doubled:
            if d.src != v:
                continue
            prod = _mm(F, x.mat(d.bar), x.mat(d.aid), n, n)
            prod = linalg.mat_scale(F, F.of(d.sign), prod)
            acc = linalg.mat_add(F, acc, prod)
        out[v] = acc
    return out


def moment_differential(x: Rep, xi: Rep) -> dict:
    """Derivative of the moment map at x in the direction xi (exact)."""
    F = x.field
    out = {}
    for v in x.quiver.vertices:
        n = x.alpha[v]
        acc = linalg.zeros(F, n, n)
        for d in x.quiver.doubled:
            if d.src != v:
                continue
            term = linalg.mat_add(
                F,
                _mm(F, xi.mat(d.bar), x.mat(d.aid), n, n),
                _mm(F, x.mat(d.bar), xi.mat(d.aid), n, n),
            )
            acc = linalg.mat_add(F, acc, linalg.mat_scale(F, F.of(d.sign), term))
        out[v] = acc
    return out


def moment_is_zero(x: Rep) -> bool:
    mm = moment_map(x)
    return all(linalg.is_zero_matrix(x.field, m) for m in mm.values())


def symplectic_form(a: Rep, b: Rep):
    """Signed trace pairing on the doubled representation space.

    Antisymmetric and nondegenerate; tangent vectors reuse the Rep carrier.
    """
    if a.quiver != b.quiver or a.alpha != b.alpha:
        raise RepError("symplectic form needs matching quiver and dimensions")
    F = a.field
    s = F.zero
    for d in a.quiver.doubled:
        n = a.alpha[d.tgt]
        prod = _mm(F, a.mat(d.aid), b.mat(d.bar), n, n)
        s = F.add(s, F.mul(F.of(d.sign), linalg.trace(F, prod)))
    return s


# ---------------------------------------------------------------------------
# graded subspaces


class GradedSubspace:
    """A per-vertex subspace of the coordinate space of a dimension vector.

    Stored as the reduced-echelon row basis at each vertex, which is unique,
    so == is subspace equality.
    """

    __slots__ = ("field", "alpha", "rows", "pivots")

    def __init__(self, field, alpha: DimVector, rows_by_vertex=None):
        self.field = field
        self.alpha = alpha
        rows = {}
        pivots = {}
        for v in alpha.quiver.vertices:
            raw = list((rows_by_vertex or {}).get(v, []))
            for r in raw:
                if len(r) != alpha[v]:
                    raise RepError(f"vector length {len(r)} != ambient {alpha[v]} at {v}")
            red, piv = linalg.rref(field, [[field.of(x) for x in r] for r in raw])
            rows[v] = tuple(tuple(r) for r in red)
            pivots[v] = tuple(piv)
        self.rows = rows
        self.pivots = pivots

    @classmethod
    def zero(cls, field, alpha: DimVector) -> "GradedSubspace":
        return cls(field, alpha, {})

    @classmethod
    def full(cls, field, alpha: DimVector) -> "GradedSubspace":
        rows = {v: linalg.identity(field, alpha[v]) for v in alpha.quiver.vertices}
        return cls(field, alpha, rows)

    def at(self, v: str):
        return self.rows[v]

    def dim_at(self, v: str) -> int:
        return len(self.rows[v])

    def dim_vector(self) -> DimVector:
        return DimVector(self.alpha.quiver, [self.dim_at(v) for v in self.alpha.quiver.vertices])

    @property
    def total_dim(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def is_full(self) -> bool:
        return self.dim_vector() == self.alpha

    def reduce(self, v: str, vec):
        return linalg.reduce_vector(self.field, self.rows[v], self.pivots[v], vec)

    def contains_vector(self, v: str, vec) -> bool:
        return all(self.field.is_zero(x) for x in self.reduce(v, vec))

    def coords(self, v: str, vec):
        return linalg.coords_against(self.field, self.rows[v], self.pivots[v], vec)

    def contains(self, other: "GradedSubspace") -> bool:
        return all(
            self.contains_vector(v, r) for v in self.alpha.quiver.vertices for r in other.rows[v]
        )

    def sum(self, other: "GradedSubspace") -> "GradedSubspace":
        rows = {
            v: list(self.rows[v]) + list(other.rows[v]) for v in self.alpha.quiver.vertices
        }
        return GradedSubspace(self.field, self.alpha, rows)

    def complement_positions(self, v: str):
        """Coordinate positions completing the echelon basis at v."""
        piv = set(self.pivots[v])
        return tuple(c for c in range(self.alpha[v]) if c not in piv)

    def __eq__(self, other):
        return (
            isinstance(other, GradedSubspace)
            and self.field == other.field
            and self.alpha == other.alpha
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field, self.alpha.counts, tuple(sorted(self.rows.items()))))

    def to_json(self):
        return {v: [[str(x) for x in r] for r in self.rows[v]] for v in self.alpha.quiver.vertices}

    def __repr__(self):
        return f"GradedSubspace(dims={self.dim_vector().counts})"


def stability_violation(x: Rep, w: GradedSubspace):
    """Id of the first doubled arrow not preserving w, or None if stable."""
    for d in x.quiver.doubled:
        m = x.mat(d.aid)
        for row in w.at(d.src):
            img = linalg.mat_apply(x.field, m, row)
            if not w.contains_vector(d.tgt, img):
                return d.aid
    return None


def is_stable(x: Rep, w: GradedSubspace) -> bool:
    return stability_violation(x, w) is None


def restrict(x: Rep, w: GradedSubspace) -> Rep:
    """The induced representation on an x-stable graded subspace."""
    bad = stability_violation(x, w)
    if bad is not None:
        raise StabilityError(bad)
    F = x.field
    beta = w.dim_vector()
    mats = {}
    for d in x.quiver.doubled:
        cols = []
        for row in w.at(d.src):
            img = linalg.mat_apply(F, x.mat(d.aid), row)
            cols.append(w.coords(d.tgt, img))
        mats[d.aid] = linalg.transpose(cols) if cols else linalg.zeros(F, beta[d.tgt], 0)
    return Rep(x.quiver, beta, mats, F)


def quotient(x: Rep, w: GradedSubspace) -> Rep:
    """The induced representation on the quotient by an x-stable subspace.

    Quotient coordinates are the non-pivot positions of the echelon basis of
    w, i.e. the basis completing it.
    """
    bad = stability_violation(x, w)
    if bad is not None:
        raise StabilityError(bad)
    F = x.field
    comp = {v: w.complement_positions(v) for v in x.quiver.vertices}
    gamma = DimVector(x.quiver, [len(comp[v]) for v in x.quiver.vertices])
    mats = {}
    for d in x.quiver.doubled:
        cols = []
        for c in comp[d.src]:
            e = [F.zero] * x.alpha[d.src]
            e[c] = F.one
            img = linalg.mat_apply(F, x.mat(d.aid), e)
            red = w.reduce(d.tgt, img)
            cols.append([red[j] for j in comp[d.tgt]])
        mats[d.aid] = linalg.transpose(cols) if cols else linalg.zeros(F, gamma[d.tgt], 0)
    return Rep(x.quiver, gamma, mats, F)


def reduce_mod_p(x: Rep, p: int) -> Rep:
    """Entrywise reduction to F_p; raises BadPrime on a divisible denominator."""
    if x.field != QQ:
        raise RepError("can only reduce rational representations")
    F = PrimeField(p)
    mats = {aid: [[F.of(e) for e in row] for row in m] for aid, m in x.mats.items()}
    return Rep(x.quiver, x.alpha, mats, F)


# ---------------------------------------------------------------------------
# flat coordinates on the doubled representation space


def edge_coordinates(quiver: Quiver, alpha: DimVector):
    """Deterministic list of (arrow id, row, col) coordinates."""
    coords = []
    for d in quiver.doubled:
        for r in range(alpha[d.tgt]):
            for c in range(alpha[d.src]):
                coords.append((d.aid, r, c))
    return coords


def rep_to_vector(x: Rep):
    vec = []
    for d in x.quiver.doubled:
        for row in x.mat(d.aid):
            vec.extend(row)
    return vec


def rep_from_vector(quiver: Quiver, alpha: DimVector, vec, field=QQ) -> Rep:
    mats = {}
    k = 0
    for d in quiver.doubled:
        nrows, ncols = alpha[d.tgt], alpha[d.src]
        m = []
        for _ in range(nrows):
            m.append(list(vec[k : k + ncols]))
            k += ncols
        mats[d.aid] = m
    if k != len(vec):
        raise RepError("coordinate vector length mismatch")
    return Rep(quiver, alpha, mats, field)
