import random
from fractions import Fraction

import pytest

from seminil import linalg
from seminil.linalg import QQ, BadPrime, PrimeField


def rand_matrix(rng, r, c, b=5):
    return [[Fraction(rng.randint(-b, b)) for _ in range(c)] for _ in range(r)]


def test_prime_field_ops():
    F = PrimeField(7)
    assert F.of(Fraction(1, 2)) == 4  # inverse of 2 mod 7
    assert F.mul(3, 5) == 1
    assert F.inv(3) == 5
    with pytest.raises(BadPrime):
        PrimeField(2).of(Fraction(1, 2))
    with pytest.raises(ValueError):
        PrimeField(6)


def test_rref_idempotent_and_rank():
    rng = random.Random(0)
    for _ in range(25):
        m = rand_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        red, piv = linalg.rref(QQ, m)
        again, piv2 = linalg.rref(QQ, red)
        assert red == again and piv == piv2
        assert len(piv) == linalg.rank(QQ, m)


def test_nullspace_annihilates():
    rng = random.Random(1)
    for _ in range(25):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        m = rand_matrix(rng, r, c)
        basis = linalg.nullspace(QQ, m, c)
        assert len(basis) == c - linalg.rank(QQ, m)
        for v in basis:
            assert all(x == 0 for x in linalg.mat_apply(QQ, m, v))


def test_solve_consistent_and_inconsistent():
    a = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    assert linalg.solve(QQ, a, [Fraction(3), Fraction(6)]) is not None
    assert linalg.solve(QQ, a, [Fraction(3), Fraction(7)]) is None


def test_reduce_and_coords():
    basis, piv = linalg.rref(QQ, [[Fraction(1), Fraction(2), Fraction(0)]])
    inside = [Fraction(2), Fraction(4), Fraction(0)]
    outside = [Fraction(0), Fraction(0), Fraction(1)]
    assert linalg.coords_against(QQ, basis, piv, inside) == [Fraction(2)]
    assert linalg.coords_against(QQ, basis, piv, outside) is None


def test_integerize():
    v = [Fraction(1, 2), Fraction(2, 3)]
    w = linalg.integerize(v)
    assert all(x.denominator == 1 for x in w)
    assert w[0] * v[1] == w[1] * v[0]


def test_interpolation_recovers_polynomial():
    # q^2 + q + 1 through four points, evaluated back at 1
    pts = [(2, 7), (3, 13), (5, 31), (7, 57)]
    coeffs = linalg.lagrange_interpolate(pts)
    assert coeffs == [Fraction(1), Fraction(1), Fraction(1)]
    assert linalg.poly_eval(coeffs, 1) == 3


def test_determinant_and_charpoly():
    m = [[Fraction(2), Fraction(1)], [Fraction(0), Fraction(3)]]
    assert linalg.determinant(QQ, m) == 6
    # char poly of diag(2,3): (t-2)(t-3) = t^2 - 5t + 6
    assert linalg.charpoly(m) == [Fraction(6), Fraction(-5), Fraction(1)]


def test_poly_gcd_and_divmod():
    # (t-1)^2 (t-2) against its derivative: gcd (t-1)
    f = [Fraction(-2), Fraction(5), Fraction(-4), Fraction(1)]
    df = linalg.poly_deriv(QQ, f)
    g = linalg.poly_gcd(QQ, f, df)
    assert g == [Fraction(-1), Fraction(1)]
    q, r = linalg.poly_divmod(QQ, f, g)
    assert r == []
    # q = (t-1)(t-2) = t^2 - 3t + 2
    assert q == [Fraction(2), Fraction(-3), Fraction(1)]


def test_matrix_poly_eval():
    m = [[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]]
    # evaluate t^2 + 1 at a square-zero matrix: the identity
    out = linalg.matrix_poly_eval(QQ, [Fraction(1), Fraction(0), Fraction(1)], m)
    assert out == linalg.identity(QQ, 2)


def test_mod_p_rank_matches_generic():
    rng = random.Random(2)
    F = PrimeField(101)
    for _ in range(20):
        m = rand_matrix(rng, 4, 4, 3)
        mp = [[F.of(x) for x in row] for row in m]
        assert linalg.rank(QQ, m) == linalg.rank(F, mp)
