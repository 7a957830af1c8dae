import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import nested_set_cones
from toricmoduli.exactlinalg import Sublattice, check_quotient, is_zero, matvec
from toricmoduli.fan import FanError, downgrade_rays, fans_equal, is_complete, is_smooth, projective_space_fan
from toricmoduli.moduli_fans import (
    WeightError,
    WeightVector,
    base_map,
    build_lm_fan,
    collision_set,
    delta_cone,
    expected_cone_count,
    fiber_basis,
    lm_centers,
    lm_rays,
    lm_weights,
    order_violation,
    plm_quotient,
    plm_rays,
    random_admissible_order,
    stage1_fan,
    subtorus_lattice,
    verify_fibration,
    verify_stage1,
)

T23_RAYS = {(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1), (1, 1, 0), (-1, -1, 0)}
HEXAGON = {(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1)}


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_lm_collision_sets(n):
    want = {I for I in (frozenset(s) for s in _subsets(n)) if n in I and 2 <= len(I) <= n - 1}
    assert collision_set(lm_weights(n)) == want
    assert collision_set(lm_weights(n, Fraction(1, 2 * n))) == want


@pytest.mark.parametrize("n", [3, 4, 5])
def test_all_ones_collision_sets(n):
    want = {frozenset(s) for s in _subsets(n) if 2 <= len(s) <= n - 1}
    assert collision_set(WeightVector((1,) * n)) == want


def test_weight_errors():
    with pytest.raises(WeightError):
        WeightVector((Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)))
    with pytest.raises(WeightError):
        WeightVector((0, 1, 1))


def _subsets(n):
    from itertools import combinations
    for size in range(1, n + 1):
        yield from combinations(range(1, n + 1), size)


def test_ray_examples():
    assert set(lm_rays(2, 3)) == T23_RAYS
    assert len(lm_rays(2, 4)) == 12
    for n in range(3, 8):
        assert len(lm_rays(1, n)) == 2 ** (n - 1) - 2


def test_delta_cone_examples():
    c = delta_cone(2, 3, {1, 3})
    assert set(c.rays) == {(1, 0, 0), (0, 1, 0)} and c.barycenter == (1, 1, 0)
    c = delta_cone(2, 3, {2, 3})
    assert set(c.rays) == {(0, 0, 1), (-1, -1, -1)} and c.barycenter == (-1, -1, 0)
    with pytest.raises(FanError):
        delta_cone(2, 3, {1, 2})


def test_build_examples():
    f = build_lm_fan(2, 3)
    assert set(f.rays) == T23_RAYS and len(f.max_cones) == 8
    g = build_lm_fan(1, 4)
    assert (len(g.rays), len(g.max_cones)) == (6, 6)
    assert stage1_fan(2, 3) == f


def test_build_rejects_bad_input():
    with pytest.raises(FanError):
        build_lm_fan(0, 3)
    with pytest.raises(FanError):
        build_lm_fan(2, 4, [{1, 4}])


def test_inadmissible_order_is_rejected_and_really_differs():
    # |I| = 3 before its superset {1,2,3,5}: a different fan at d = 1, n = 5
    order = sorted(lm_centers(5), key=lambda I: (len(I), sorted(I)))
    assert order_violation(order) is not None
    with pytest.raises(FanError):
        build_lm_fan(1, 5, order)
    other = build_lm_fan(1, 5, order, allow_any_order=True)
    assert not fans_equal(other, build_lm_fan(1, 5))


@pytest.mark.parametrize("d, n", [(d, n) for d in (1, 2, 3) for n in (3, 4, 5)])
def test_fan_matches_nested_set_oracle(d, n):
    f = build_lm_fan(d, n)
    assert f.rays == lm_rays(d, n)
    assert is_smooth(f) and is_complete(f)
    assert len(f.max_cones) == expected_cone_count(d, n) == d ** (n - 1) * factorial(n - 1)
    assert f.cone_sets() == nested_set_cones(d, n)


def test_subtorus_examples():
    s = subtorus_lattice(2, 3)
    assert s.same_lattice(Sublattice(3, ((1, 0, 1),)))
    assert subtorus_lattice(1, 5).rank == 0
    assert subtorus_lattice(3, 3).rank == 2


def test_plm_rays_examples():
    assert set(plm_rays(2, 3)) == HEXAGON
    assert set(plm_rays(1, 3)) == {(1,), (-1,)}


@pytest.mark.parametrize("d, n", [(d, n) for d in (2, 3) for n in (3, 4, 5)])
def test_downgrade_gives_plm_rays(d, n):
    q = plm_quotient(d, n)
    check_quotient(q)
    assert downgrade_rays(build_lm_fan(d, n), subtorus_lattice(d, n), q) == plm_rays(d, n)


def test_base_map_example():
    assert base_map(2, 3) == ((1, -1, 0), (0, 0, 1))
    assert fiber_basis(2, 3) == ((1, 1, 0),)


@pytest.mark.parametrize("d, n", [(2, 3), (2, 4), (3, 3), (3, 4), (2, 5)])
def test_fiber_basis_is_killed(d, n):
    m = base_map(d, n)
    for v in fiber_basis(d, n):
        assert is_zero(matvec(m, v))


@pytest.mark.parametrize("d, n, fiber_rays, cones", [(2, 3, 2, 8), (2, 4, 6, 48), (3, 3, 2, 18)])
def test_fibration_examples(d, n, fiber_rays, cones):
    rep = verify_fibration(d, n)
    assert rep.ok
    assert len(rep.certificate.fiber.rays) == fiber_rays
    assert rep.source_cones == cones


@pytest.mark.parametrize("d, n", [(2, 4), (3, 4), (2, 5)])
def test_stage1_bundle(d, n):
    rep = verify_stage1(d, n)
    assert rep.ok and rep.certificate.fiber == projective_space_fan(n - 2)


# properties ------------------------------------------------------------------


@settings(max_examples=15)
@given(st.sampled_from([(1, 4), (2, 4), (1, 5), (3, 4), (2, 5)]), st.integers(0, 10 ** 6))
def test_admissible_orders_agree(dn, seed):
    d, n = dn
    order = random_admissible_order(n, random.Random(seed))
    assert order_violation(order) is None
    assert fans_equal(build_lm_fan(d, n, order), build_lm_fan(d, n))


@given(st.integers(3, 7), st.fractions(min_value=Fraction(1, 100), max_value=Fraction(1)))
def test_lm_weights_only_need_small_eps(n, eps):
    # any eps with (n-1) eps <= 1 gives the same collision sets
    if (n - 1) * eps > 1:
        return
    assert collision_set(lm_weights(n, eps)) == collision_set(lm_weights(n))
