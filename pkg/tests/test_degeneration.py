import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import close_projectively, twisted_point_at
from toricmoduli.degeneration import (
    Family,
    FamilyError,
    LaurentSeries,
    gv_limit,
    level,
    limit_tree,
    oracle_check,
    random_family,
    raw_levels,
    reparametrize,
    twist_family,
    validate_family,
)
from toricmoduli.trees import StableRootedTree, affine_point, e0, hyperplane_point, trees_isomorphic

S = LaurentSeries.of
ZERO = LaurentSeries({})
D1 = Family(1, 3, ((S((0, 1)),), (S((1, 1)),)))


def test_series_arithmetic():
    a = S((0, 1), (1, 1))
    b = S((1, -1), (2, 3))
    assert (a + b).terms == {0: 1, 2: 3}
    assert (a * b).terms == {1: -1, 2: 2, 3: 3}
    assert (a - a) == ZERO and ZERO.order is None
    assert a.shift(2).order == 2
    assert S((2, 1)).rescale(3).coefficient(2) == 9


@pytest.mark.parametrize("coords, want", [
    ((S((0, 1), (1, 1)), S((2, 1))), 0),
    ((S((1, 1)), S((3, 1))), 1),
    ((S((2, 1)), S((2, 1))), 2),
    ((ZERO, S((3, 5))), 3),
])
def test_level(coords, want):
    f = Family(2, 3, (coords, (S((0, 1)), ZERO)))
    assert level(f, 1) == want


def test_limit_examples():
    assert limit_tree(D1) == StableRootedTree(1, 3, ({1: (1,)}, {2: (1,)}))
    flat = Family(2, 4, ((S((0, 1)), S((0, 2))), (S((0, 3)), ZERO), (S((0, -1)), S((1, 7)))))
    t = limit_tree(flat)
    assert len(t.components) == 1
    assert t.components[0].marked == {1: (1, 2), 2: (3, 0), 3: (-1, 0)}
    f = Family(2, 4, ((S((0, 1)), S((0, 1))), (S((1, 1)), S((1, 2))), (S((1, 1)), S((2, 1)))))
    assert raw_levels(f) == [0, 1]
    t = limit_tree(f)
    assert [c.J for c in t.components] == [frozenset({1}), frozenset({2, 3})]
    assert t.components[1].marked == {2: (1, 2), 3: (1, 0)}


def test_gv_limit_examples():
    assert gv_limit(D1, 0).points == (affine_point((1,)), e0(1))
    assert gv_limit(D1, 1).points == (hyperplane_point((1,)), affine_point((1,)))
    assert all(p == e0(1) for p in gv_limit(D1, -1).points)


def test_oracle_examples():
    assert oracle_check(D1)
    single = Family(1, 4, ((S((2, 1)),), (S((2, 3)),), (S((2, -1), (3, 1)),)))
    assert oracle_check(single)


def test_validation():
    assert validate_family(D1) == []
    assert validate_family(Family(1, 3, ((ZERO,), (S((1, 1)),))))
    assert validate_family(Family(1, 3, ((S((-1, 1)),), (S((1, 1)),))))
    assert validate_family(Family(1, 3, ((S((1, 1)),), (S((1, 1)),))))
    assert validate_family(Family(1, 4, ((S((1, 1)),), (S((2, 1)),))))
    with pytest.raises(FamilyError):
        limit_tree(Family(1, 3, ((ZERO,), (S((1, 1)),))))


def test_random_corpus_small():
    rng = random.Random(11)
    for d in (1, 2, 3):
        for n in (3, 4, 5, 6):
            for _ in range(20):
                assert oracle_check(random_family(rng, d, n))


# properties ------------------------------------------------------------------

coef = st.fractions(min_value=-9, max_value=9, max_denominator=9).filter(lambda x: x != 0)


@st.composite
def series(draw, max_exp=4):
    exps = draw(st.sets(st.integers(0, max_exp), min_size=0, max_size=3))
    return LaurentSeries({e: draw(coef) for e in exps})


@st.composite
def families(draw, max_d=3, max_n=6):
    d = draw(st.integers(1, max_d))
    n = draw(st.integers(3, max_n))
    pts = []
    for _ in range(n - 1):
        p = tuple(draw(series()) for _ in range(d))
        if not any(p):
            p = (LaurentSeries({draw(st.integers(0, 4)): draw(coef)}),) + p[1:]
        pts.append(p)
    f = Family(d, n, tuple(pts))
    if validate_family(f):
        # separate identical points by distinct high-order terms
        f = Family(d, n, tuple(tuple(s + LaurentSeries({6 + i: 1}) if k == 0 else s
                                     for k, s in enumerate(p)) for i, p in enumerate(pts)))
    return f


@given(families())
def test_oracle_on_random_families(f):
    assert validate_family(f) == []
    assert oracle_check(f)


@given(families(max_d=2, max_n=4), st.integers(-1, 7))
def test_gv_limit_matches_numerical_evaluation(f, twist):
    t = Fraction(1, 10 ** 9)
    lim = gv_limit(f, twist)
    for p, q in zip(f.points, lim.points):
        vals = twisted_point_at([s.terms for s in p], twist, t)
        assert close_projectively(vals, q.coords, Fraction(1, 10 ** 3))


@given(families(), st.fractions(min_value=-5, max_value=5, max_denominator=5).filter(lambda x: x != 0))
def test_reparametrization_invariance(f, c):
    assert trees_isomorphic(limit_tree(reparametrize(f, c)), limit_tree(f))


@given(families(), st.integers(0, 5))
def test_twist_invariance(f, k):
    g = twist_family(f, k)
    assert limit_tree(g) == limit_tree(f)
    assert raw_levels(g) == [lv + k for lv in raw_levels(f)]
    assert oracle_check(g)
