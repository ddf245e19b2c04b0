import random
from fractions import Fraction

import pytest

from seminil import flags, linalg
from seminil.linalg import QQ
from seminil.quiver import DimVector
from seminil.rep import GradedSubspace, Rep, reduce_mod_p, zero_rep

from helpers import act, invert, rand_graded_unipotent, rand_rep


def J(n):
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(n - 1):
        m[k][k + 1] = Fraction(1)
    return m


def test_stable_closure_trivial(jordan):
    x = Rep(jordan, [2], {"a": J(2)})
    zero = GradedSubspace.zero(QQ, x.alpha)
    assert flags.stable_closure(x, zero).is_zero()
    u = GradedSubspace(QQ, x.alpha, {"0": [[0, 1]]})
    assert flags.stable_closure(zero_rep(jordan, [2]), u) == u


def test_stable_closure_kernel_line(jordan):
    x = Rep(jordan, [2], {"a": J(2)})
    u = GradedSubspace(QQ, x.alpha, {"0": [[1, 0]]})
    assert flags.stable_closure(x, u) == u


def test_canonical_chain_zero_rep(g2):
    res = flags.canonical_chain(zero_rep(g2, [3]))
    assert res.seminilpotent
    assert [s.counts for s in res.steps] == [(3,)]


def test_canonical_chain_jordan_generic(jordan):
    x = Rep(jordan, [2], {"a": J(2), "a_bar": [[3, 5], [0, 3]]})
    res = flags.canonical_chain(x)
    assert res.seminilpotent
    assert flags.concentrated_steps(res.steps) == (1, 1)
    assert res.flag[1] == GradedSubspace(QQ, x.alpha, {"0": [[1, 0]]})


def test_canonical_chain_non_nilpotent_stops(jordan):
    x = Rep(jordan, [2], {"a": linalg.identity(QQ, 2)})
    res = flags.canonical_chain(x)
    assert not res.seminilpotent
    assert not res.descending[-1].is_zero()


def test_seminilpotency_examples(jordan, a2):
    assert flags.is_seminilpotent(zero_rep(jordan, [3]))
    assert not flags.is_seminilpotent(Rep(jordan, [2], {"a": linalg.identity(QQ, 2)}))
    assert flags.is_seminilpotent(Rep(a2, [1, 1], {"a": [[1]]}))


def test_returned_flag_satisfies_definition(jordan, g2):
    rng = random.Random(0)
    for quiver, alpha in [(jordan, [3]), (g2, [2])]:
        for _ in range(10):
            x = rand_rep(quiver, alpha, rng)
            res = flags.canonical_chain(x)
            if res.seminilpotent:
                assert flags.flag_satisfies_definition(x, res.flag)


def random_definition_rep(quiver, alpha, rng):
    """Random point built from a random flag it strictly lowers/preserves.

    Declared arrows map the k-th coordinate-flag chunk below the previous
    level, opposite arrows stay within the level; a unipotent base change
    hides the flag.
    """
    alpha = DimVector.of(quiver, alpha)
    r = rng.randint(1, 4)
    levels = {}
    for v in quiver.vertices:
        mid = sorted(rng.choices(range(alpha[v] + 1), k=r - 1))
        levels[v] = [0] + mid + [alpha[v]]
    mats = {}
    for d in quiver.doubled:
        m = [[Fraction(0)] * alpha[d.src] for _ in range(alpha[d.tgt])]
        for k in range(1, r + 1):
            lo_src, hi_src = levels[d.src][k - 1], levels[d.src][k]
            hi_tgt = levels[d.tgt][k - 1] if d.sign == 1 else levels[d.tgt][k]
            for cc in range(lo_src, hi_src):
                for rr in range(hi_tgt):
                    m[rr][cc] = Fraction(rng.randint(-3, 3))
        mats[d.aid] = m
    g = rand_graded_unipotent(quiver, alpha, rng)
    ginv = {v: invert(mm) for v, mm in g.items()}
    return act(quiver, g, ginv, Rep(quiver, alpha, mats))


def test_definition_implies_chain_terminates(jordan, g2, a2):
    rng = random.Random(1)
    for quiver, alpha in [(jordan, [3]), (g2, [3]), (a2, [2, 2])]:
        for _ in range(15):
            x = random_definition_rep(quiver, alpha, rng)
            assert flags.is_seminilpotent(x)


def test_defects_examples(jordan, g2):
    # single flag step: empty tuple
    assert flags.intertwiner_defects(zero_rep(jordan, [2])) == ()
    # both induced actions zero on 1-dimensional quotients: defect 1
    x = Rep(jordan, [2], {"a": J(2), "a_bar": [[0, 1], [0, 0]]})
    assert flags.intertwiner_defects(x) == (1,)
    # disjoint integer spectra on consecutive quotients: defect 0
    y = [[1, 0, 0], [0, 2, 0], [0, 0, 3]]
    x1 = [[0, 1, 0], [0, 0, 1], [0, 0, 0]]
    x2 = linalg.mat_scale(QQ, Fraction(-1), [[Fraction(e) for e in r] for r in x1])
    w = Rep(g2, [3], {"a": x1, "a_bar": y, "b": x2, "b_bar": y})
    assert flags.intertwiner_defects(w) == (0, 0)


def test_defects_reject_multi_vertex(a2):
    with pytest.raises(ValueError):
        flags.intertwiner_defects(Rep(a2, [1, 1], {"a": [[1]]}))


def test_ideal_subspace_examples(a2, jordan):
    x = Rep(a2, [1, 1], {"a": [[1]]})
    assert flags.ideal_subspace(x, set()).is_full()
    assert flags.ideal_subspace(zero_rep(jordan, [2]), {"0"}).is_zero()
    assert flags.ideal_subspace(x, {"1"}).is_full()
    j0 = flags.ideal_subspace(x, {"0"})
    assert j0.dim_at("0") == 0 and j0.dim_at("1") == 1


def test_ideal_codim_examples(a2, jordan):
    assert flags.ideal_codim(zero_rep(jordan, [3]), "0") == 3
    x = Rep(a2, [1, 1], {"a": [[1]]})
    assert flags.ideal_codim(x, "0") == 1
    assert flags.ideal_codim(x, "1") == 0


def test_flag_variety_dim():
    mk = lambda *steps: [{"0": s} for s in steps]
    assert flags.flag_variety_dim(mk(1, 1)) == 1
    assert flags.flag_variety_dim(mk(3)) == 0
    assert flags.flag_variety_dim(mk(1, 2)) == 2
    assert flags.flag_variety_dim(mk(1, 1, 1)) == 3
    # graded: steps at different vertices do not interact
    assert flags.flag_variety_dim([{"0": 1, "1": 0}, {"0": 0, "1": 1}]) == 0


def test_invariants_under_group_action(jordan):
    rng = random.Random(2)
    x = Rep(jordan, [3], {"a": J(3), "a_bar": [[4, 1, 2], [0, 4, 5], [0, 0, 4]]})
    base = flags.canonical_chain(x)
    base_eps = flags.ideal_codim(x, "0")
    base_delta = flags.intertwiner_defects(x)
    alpha = x.alpha
    for _ in range(5):
        g = rand_graded_unipotent(jordan, alpha, rng)
        ginv = {v: invert(m) for v, m in g.items()}
        moved = Rep(
            jordan,
            alpha,
            {
                d.aid: linalg.mat_mul(QQ, linalg.mat_mul(QQ, g[d.tgt], list(map(list, x.mat(d.aid)))), ginv[d.src])
                for d in jordan.doubled
            },
        )
        res = flags.canonical_chain(moved)
        assert [s.counts for s in res.steps] == [s.counts for s in base.steps]
        assert flags.ideal_codim(moved, "0") == base_eps
        assert flags.intertwiner_defects(moved) == base_delta


def test_eps_agrees_mod_p(a2):
    rng = random.Random(3)
    for _ in range(5):
        x = random_definition_rep(a2, [2, 2], rng)
        for p in (101, 103):
            xp = reduce_mod_p(x, p)
            for v in a2.vertices:
                assert flags.ideal_codim(x, v) == flags.ideal_codim(xp, v)


def test_chain_length_bounded(g2):
    rng = random.Random(4)
    for _ in range(10):
        x = rand_rep(g2, [3], rng)
        res = flags.canonical_chain(x)
        assert len(res.descending) <= x.alpha.total + 1
        for k in range(1, len(res.descending)):
            assert res.descending[k - 1].contains(res.descending[k])


def test_kernel_type_matches_canonical_on_samples(g2, cfg):
    from seminil.sampler import sample_multiloop

    for parts in [(2,), (1, 1), (1, 2), (2, 1), (1, 1, 1)]:
        x = sample_multiloop(g2, "0", parts, cfg)
        assert flags.kernel_type(x) == parts


def test_nilpotent_kernel_jumps():
    m = [[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]]
    assert flags.nilpotent_kernel_jumps(QQ, m) == (1, 1)
    z = [[Fraction(0)] * 3 for _ in range(3)]
    assert flags.nilpotent_kernel_jumps(QQ, z) == (3,)
    with pytest.raises(ValueError):
        flags.nilpotent_kernel_jumps(QQ, linalg.identity(QQ, 2))


def test_flag_serializes_as_rational_strings(jordan):
    x = Rep(jordan, [2], {"a": J(2), "a_bar": [[3, 5], [0, 3]]})
    res = flags.canonical_chain(x)
    doc = [w.to_json() for w in res.flag]
    assert doc[0] == {"0": []}
    assert doc[1] == {"0": [["1", "0"]]}
    assert doc[2] == {"0": [["1", "0"], ["0", "1"]]}
