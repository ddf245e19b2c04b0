from fractions import Fraction

import pytest

from seminil.components import enumerate_components, one_vertex_labels
from seminil.convolution import (
    ConvFunction,
    DegreeMismatch,
    NonPolynomialCount,
    atom,
    brute_force_count_f2,
    consensus_value,
    distinguished_functions,
    evaluate,
    evaluate_word,
    flag_fiber_count,
    flag_fiber_euler,
    generic_value,
    good_prime,
    one_vertex_basis,
    tilde_function,
    unit_power,
    word_degree,
)
from seminil.quiver import DimVector
from seminil.rep import Rep, reduce_mod_p, zero_rep
from seminil.sampler import sample_jordan


def J2():
    return [[0, 1], [0, 0]]


def test_atom_degrees_and_errors(jordan, a2):
    f = atom(jordan, "0", 2)
    assert f.alpha == DimVector.of(jordan, [2])
    with pytest.raises(ValueError):
        atom(a2, "0", 2)  # loop-free vertex only carries the unit generator
    with pytest.raises(ValueError):
        atom(jordan, "0", 0)


def test_convolve_concatenates_left_on_top(jordan):
    f = atom(jordan, "0", 1).convolve(atom(jordan, "0", 2))
    assert list(f.terms) == [(("0", 1), ("0", 2))]
    assert f.alpha == DimVector.of(jordan, [3])


def test_word_degree_additive(jordan):
    w1, w2 = (("0", 1),), (("0", 2),)
    d = word_degree(jordan, w1 + w2)
    assert d == word_degree(jordan, w1) + word_degree(jordan, w2)


def test_degree_mismatch_is_hard_error(jordan):
    x = zero_rep(jordan, [3])
    with pytest.raises(DegreeMismatch):
        evaluate_word((("0", 2),), x)


def test_unconstrained_line_fiber(jordan):
    # x = 0, y = 0 in two dimensions: the fiber is a projective line
    x = zero_rep(jordan, [2])
    assert flag_fiber_euler(x, [("0", 1), ("0", 1)]) == 2
    assert flag_fiber_count(reduce_mod_p(x, 3), [("0", 1), ("0", 1)]) == 4


def test_point_fiber(jordan):
    x = zero_rep(jordan, [3])
    assert flag_fiber_euler(x, [("0", 3)]) == 1


def test_full_flag_count_is_factorial(jordan):
    x = zero_rep(jordan, [3])
    assert flag_fiber_euler(x, [("0", 1), ("0", 1), ("0", 1)]) == 6


def test_characteristic_word_values(jordan):
    # the size-2 generator: 1 where the loop vanishes, 0 elsewhere
    x = Rep(jordan, [2], {"a_bar": [[1, 2], [3, 4]]})
    assert evaluate_word((("0", 2),), x) == 1
    y = Rep(jordan, [2], {"a": J2(), "a_bar": [[5, 1], [0, 5]]})
    assert evaluate_word((("0", 2),), y) == 0


def test_unique_stable_line_j2(jordan):
    x = Rep(jordan, [2], {"a": J2()})
    assert evaluate_word((("0", 1), ("0", 1)), x) == 1


def test_split_spectrum_two_lines(jordan):
    x = Rep(jordan, [2], {"a_bar": [[1, 0], [0, 2]]})
    assert evaluate_word((("0", 1), ("0", 1)), x) == 2


def test_brute_force_matches_echelon_counts(jordan, g2, a2):
    cases = [
        (jordan, zero_rep(jordan, [2]), [("0", 1), ("0", 1)]),
        (jordan, Rep(jordan, [2], {"a": J2(), "a_bar": [[3, 1], [0, 3]]}), [("0", 1), ("0", 1)]),
        (jordan, zero_rep(jordan, [3]), [("0", 1), ("0", 2)]),
        (g2, Rep(g2, [2], {"a_bar": [[1, 1], [0, 1]], "b_bar": [[1, 0], [1, 1]]}), [("0", 1), ("0", 1)]),
        (a2, Rep(a2, [1, 1], {"a": [[1]]}), [("1", 1), ("0", 1)]),
        (a2, Rep(a2, [1, 2], {"a": [[1], [0]]}), [("1", 1), ("0", 1), ("1", 1)]),
    ]
    for quiver, x, steps in cases:
        x2 = reduce_mod_p(x, 2)
        assert flag_fiber_count(x2, steps) == brute_force_count_f2(x2, steps)


def test_good_prime_spectral_collision(jordan):
    # eigenvalues 3 and -7 collide mod 2 and mod 5
    x = Rep(jordan, [2], {"a_bar": [[3, 1], [0, -7]]})
    assert not good_prime(x, 2)
    assert not good_prime(x, 5)
    assert good_prime(x, 11)


def test_good_prime_joint_coincidence(g2):
    # split spectra, no common eigenline over Q, but both diagonal mod 3
    x = Rep(g2, [2], {"a_bar": [[1, 0], [3, 2]], "b_bar": [[5, 4], [0, 7]]})
    assert not good_prime(x, 3)
    assert good_prime(x, 11)


def test_good_prime_nilpotent_shape(jordan):
    x = Rep(jordan, [2], {"a": [[0, 5], [0, 0]]})
    assert not good_prime(x, 5)
    assert good_prime(x, 3)


def test_oracle_reports_irrational_counts(jordan):
    # an irrational loop spectrum makes stable-line counts oscillate with the
    # field; the oracle must surface the failed fit, never average it away
    x = Rep(jordan, [2], {"a_bar": [[0, 3], [1, 0]]})
    with pytest.raises(NonPolynomialCount):
        flag_fiber_euler(x, [("0", 1), ("0", 1)], primes=(2, 3, 5, 7, 11))


def test_jordan_basis_alpha2(jordan, cfg):
    res = one_vertex_basis(jordan, "0", 2, cfg)
    assert res.order == [(2,), (1, 1)]
    assert res.matrix[((2,), (1, 1))] == 2
    assert res.matrix[((2,), (2,))] == 1
    assert res.matrix[((1, 1), (2,))] == 0
    assert res.matrix[((1, 1), (1, 1))] == 1
    # the corrected function subtracts twice the top characteristic word
    f = res.basis[(1, 1)]
    assert f.terms[(("0", 2),)] == Fraction(-2)
    assert f.terms[(("0", 1), ("0", 1))] == Fraction(1)
    # the maximal tuple keeps its bare characteristic word
    assert res.basis[(2,)] == tilde_function(jordan, "0", (2,))


def test_basis_rho_identity_small(jordan, g2, cfg):
    for quiver, n in [(jordan, 2), (g2, 2)]:
        res = one_vertex_basis(quiver, "0", n, cfg)
        labels = {l.parts: l for l in one_vertex_labels(quiver, "0", n)}
        for w, f in res.basis.items():
            for wp, lab in labels.items():
                expected = Fraction(int(w == wp))
                assert generic_value(f, lab, cfg) == expected


def test_basis_triangularity_g2_alpha3(g2, cfg):
    res = one_vertex_basis(g2, "0", 3, cfg)
    from seminil.components import dominated_by

    for (row, col), val in res.matrix.items():
        if val != 0:
            assert dominated_by(col, row)
        if row == col:
            assert val == 1


def test_unit_power_value_on_point(a2, cfg):
    f = unit_power(a2, "1", 2)
    x = zero_rep(a2, [0, 2])
    assert evaluate(f, x) == 1


def test_distinguished_identity_a2(a2, cfg):
    for alpha in ([1, 1], [1, 2]):
        res = distinguished_functions(a2, alpha, cfg)
        keys = [e.label.key() for e in res.catalog.entries]
        assert len(keys) == 2
        for r in keys:
            for c in keys:
                assert res.matrix[(r, c)] == Fraction(int(r == c))


def test_distinguished_loop_free_unit(a2, cfg):
    res = distinguished_functions(a2, [1, 0], cfg)
    (entry,) = res.catalog.entries
    f = res.functions[entry.label.key()]
    assert f == atom(a2, "0", 1)


def test_distinguished_one_vertex_delegates(g2, cfg):
    res = distinguished_functions(g2, [2], cfg)
    basis = one_vertex_basis(g2, "0", 2, cfg)
    for e in res.catalog.entries:
        assert res.functions[e.label.key()] == basis.basis[e.label.parts]


def test_conv_function_arithmetic(jordan):
    f = atom(jordan, "0", 1).convolve(atom(jordan, "0", 1))
    g = tilde_function(jordan, "0", (2,))
    h = f - g.scale(2)
    assert h.terms[(("0", 2),)] == -2
    assert (h + g.scale(2)).terms == f.terms
    with pytest.raises(DegreeMismatch):
        f + atom(jordan, "0", 1)


def test_distinguished_identity_loop_pendant(loop_pendant, cfg):
    # general recursion with a loopy inner generator (one-loop basis factors)
    for alpha in ([1, 1], [2, 1], [2, 2]):
        res = distinguished_functions(loop_pendant, alpha, cfg)
        keys = [e.label.key() for e in res.catalog.entries]
        for r in keys:
            for c in keys:
                assert res.matrix[(r, c)] == Fraction(int(r == c)), (alpha, r, c)
