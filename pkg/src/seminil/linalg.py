"""Exact linear algebra over the rationals and over prime fields.

Matrices are sequences of rows, vectors are flat sequences.  Elements are
`fractions.Fraction` over Q and plain ints in [0, p) over F_p.  No floating
point anywhere: every downstream claim is a rank or dimension statement and
rounding would be fatal.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm


class Rationals:
    """Field tag for exact rational arithmetic."""

    name = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def of(value):
        if isinstance(value, Fraction):
            return value
        return Fraction(value)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        return Fraction(1) / a

    @staticmethod
    def is_zero(a):
        return a == 0

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Rationals")


QQ = Rationals()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class BadPrime(ValueError):
    """Raised when reducing a rational with denominator divisible by p."""

    def __init__(self, p, value):
        self.p = p
        self.value = value
        super().__init__(f"prime {p} divides denominator of {value}")


class PrimeField:
    """The field F_p with int elements in [0, p)."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"
        self.zero = 0
        self.one = 1 % p

    def of(self, value):
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise BadPrime(self.p, value)
            return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
        return value % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))


# ---------------------------------------------------------------------------
# matrix helpers


def zeros(field, nrows: int, ncols: int):
    return [[field.zero for _ in range(ncols)] for _ in range(nrows)]


def identity(field, n: int):
    m = zeros(field, n, n)
    for i in range(n):
        m[i][i] = field.one
    return m


def copy_matrix(m):
    return [list(row) for row in m]


def transpose(m):
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def mat_mul(field, a, b):
    if a and b and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch {len(a)}x{len(a[0])} @ {len(b)}x{len(b[0]) if b else 0}")
    if not a or not b:
        return [[field.zero for _ in range(len(b[0]) if b else 0)] for _ in a]
    bt = transpose(b)
    out = []
    for row in a:
        orow = []
        for col in bt:
            s = field.zero
            for x, y in zip(row, col):
                s = field.add(s, field.mul(x, y))
            orow.append(s)
        out.append(orow)
    return out


def mat_add(field, a, b):
    return [[field.add(x, y) for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_sub(field, a, b):
    return [[field.sub(x, y) for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_scale(field, c, a):
    return [[field.mul(c, x) for x in row] for row in a]


def mat_apply(field, m, vec):
    """Matrix times column vector."""
    out = []
    for row in m:
        s = field.zero
        for x, v in zip(row, vec):
            s = field.add(s, field.mul(x, v))
        out.append(s)
    return out


def is_zero_matrix(field, m) -> bool:
    return all(field.is_zero(x) for row in m for x in row)


def trace(field, m):
    s = field.zero
    for i in range(len(m)):
        s = field.add(s, m[i][i])
    return s


# ---------------------------------------------------------------------------
# echelon forms, kernels, solving


def rref(field, rows):
    """Reduced row echelon form.

    Returns (nonzero rows, pivot column indices).  The result is the canonical
    basis of the row space: leading 1 per row, zeros above and below pivots.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(m)):
            if not field.is_zero(m[i][c]):
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, e) for e in m[r]]
        for i in range(len(m)):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(field, m) -> int:
    return len(rref(field, m)[0])


def nullspace(field, m, ncols=None):
    """Canonical basis of the right kernel {v : m v = 0}."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    red, pivots = rref(field, m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for i, p in enumerate(pivots):
            v[p] = field.neg(red[i][f])
        basis.append(v)
    return basis


def solve(field, a, b):
    """One solution of a x = b, or None if inconsistent.  Free variables 0."""
    aug = [list(row) + [be] for row, be in zip(a, b)]
    ncols = len(a[0]) if a else 0
    red, pivots = rref(field, aug)
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for i, p in enumerate(pivots):
        x[p] = red[i][ncols]
    return x


def reduce_vector(field, basis_rows, pivots, v):
    """Canonical representative of v modulo the row space of an RREF basis."""
    out = list(v)
    for row, p in zip(basis_rows, pivots):
        c = out[p]
        if field.is_zero(c):
            continue
        out = [field.sub(a, field.mul(c, b)) for a, b in zip(out, row)]
    return out


def coords_against(field, basis_rows, pivots, v):
    """Coordinates of v in an RREF basis, or None if v is outside the span."""
    coords = [v[p] for p in pivots]
    rem = reduce_vector(field, basis_rows, pivots, v)
    if any(not field.is_zero(x) for x in rem):
        return None
    return coords


def integerize(vec):
    """Scale a rational vector by the lcm of denominators; keeps the line."""
    denoms = [Fraction(x).denominator for x in vec]
    m = lcm(*denoms) if denoms else 1
    return [Fraction(x) * m for x in vec]


def determinant(field, m):
    """Exact determinant by fraction-free-enough Gaussian elimination."""
    n = len(m)
    a = [list(row) for row in m]
    det = field.one
    for c in range(n):
        pr = None
        for i in range(c, n):
            if not field.is_zero(a[i][c]):
                pr = i
                break
        if pr is None:
            return field.zero
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            det = field.neg(det)
        det = field.mul(det, a[c][c])
        inv = field.inv(a[c][c])
        for i in range(c + 1, n):
            f = field.mul(inv, a[i][c])
            if field.is_zero(f):
                continue
            a[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(a[i], a[c])]
    return det


# ---------------------------------------------------------------------------
# univariate polynomials (ascending coefficient lists over a field)


def poly_trim(field, a):
    a = list(a)
    while a and field.is_zero(a[-1]):
        a.pop()
    return a


def poly_deriv(field, a):
    return poly_trim(field, [field.mul(field.of(i), a[i]) for i in range(1, len(a))])


def poly_divmod(field, a, b):
    a = poly_trim(field, a)
    b = poly_trim(field, b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [field.zero] * max(0, len(a) - len(b) + 1)
    r = list(a)
    inv = field.inv(b[-1])
    while len(r) >= len(b) and poly_trim(field, r):
        r = poly_trim(field, r)
        if len(r) < len(b):
            break
        k = len(r) - len(b)
        c = field.mul(r[-1], inv)
        q[k] = c
        for i, be in enumerate(b):
            r[k + i] = field.sub(r[k + i], field.mul(c, be))
        r = r[:-1]
    return poly_trim(field, q), poly_trim(field, r)


def poly_gcd(field, a, b):
    """Monic gcd by Euclid's algorithm."""
    a = poly_trim(field, a)
    b = poly_trim(field, b)
    while b:
        _, r = poly_divmod(field, a, b)
        a, b = b, r
    if a:
        inv = field.inv(a[-1])
        a = [field.mul(inv, c) for c in a]
    return a


def matrix_poly_eval(field, coeffs, m):
    """Evaluate a polynomial at a square matrix (Horner)."""
    n = len(m)
    acc = zeros(field, n, n)
    for c in reversed(coeffs):
        acc = mat_mul(field, acc, m)
        for i in range(n):
            acc[i][i] = field.add(acc[i][i], field.of(c))
    return acc


def charpoly(m):
    """Characteristic polynomial of a rational matrix, ascending coefficients.

    Computed by interpolating det(c - m) at n + 1 integer points; exact.
    """
    n = len(m)
    if n == 0:
        return [Fraction(1)]
    points = []
    for c in range(n + 1):
        shifted = [[Fraction(c) * (1 if i == j else 0) - Fraction(m[i][j]) for j in range(n)] for i in range(n)]
        points.append((c, determinant(QQ, shifted)))
    coeffs = lagrange_interpolate(points)
    coeffs += [Fraction(0)] * (n + 1 - len(coeffs))
    return coeffs


def poly_radical(f):
    """Squarefree part of a rational polynomial."""
    df = poly_deriv(QQ, f)
    g = poly_gcd(QQ, f, df)
    if not g:
        return poly_trim(QQ, f)
    radical, _ = poly_divmod(QQ, f, g)
    return radical


def _divisors(n: int):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def rational_roots(f):
    """Integer roots of a monic integral polynomial (the only rational ones)."""
    f = poly_trim(QQ, f)
    roots = []
    if f and f[0] == 0:
        roots.append(Fraction(0))
        while f and f[0] == 0:
            f = f[1:]
    if len(f) > 1 and all(Fraction(c).denominator == 1 for c in f):
        for c in _divisors(abs(Fraction(f[0]).numerator)):
            for cand in (Fraction(c), Fraction(-c)):
                if poly_eval(f, cand) == 0:
                    roots.append(cand)
    return roots


def roots_mod_p(field, coeffs):
    out = []
    for c in range(field.p):
        acc = field.zero
        for co in reversed(coeffs):
            acc = field.add(field.mul(acc, c), co)
        if field.is_zero(acc):
            out.append(c)
    return out


def joint_eigen_profile(field, mats, n, roots_by_matrix):
    """Multiset of joint eigenspace dimensions over rational eigenvalue tuples.

    A line stable under every matrix of a tuple is acted on by scalars from
    the base field, so this profile sees every common stable line.
    """
    dims = []
    if not mats or n == 0:
        return ()

    def rec(i, rows):
        if i == len(mats):
            basis = nullspace(field, rows, n) if rows else identity(field, n)
            if basis:
                dims.append(len(basis))
            return
        for lam in roots_by_matrix[i]:
            shifted = [
                [field.sub(mats[i][r][c], field.of(lam) if r == c else field.zero) for c in range(n)]
                for r in range(n)
            ]
            rec(i + 1, rows + shifted)

    rec(0, [])
    return tuple(sorted(dims))


# ---------------------------------------------------------------------------
# univariate interpolation over Q (for the point-count oracle)


def poly_eval(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def lagrange_interpolate(points):
    """Coefficients (ascending) of the unique degree < len(points) polynomial."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = poly_mul(basis, [Fraction(-xj), Fraction(1)])
            denom *= Fraction(xi - xj)
        scale = Fraction(yi) / denom
        for k, c in enumerate(basis):
            coeffs[k] += scale * c
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs
