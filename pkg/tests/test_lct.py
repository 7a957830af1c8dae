from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import generic_lct, lct_by_subsets
from toricmoduli.lct import (
    ArrangementError,
    CentralArrangement,
    DivisorClassT3,
    flats,
    lct,
    log_fano_certificate,
    pullback_and_anticanonical,
    tdn3_arrangement,
    tdn3_closed_form,
    tdn3_min_ratio,
)

BRAID = CentralArrangement(3, ((1, -1, 0), (1, 0, -1), (0, 1, -1)))


def boolean(m):
    return CentralArrangement(m, tuple(tuple(int(i == j) for j in range(m)) for i in range(m)))


def test_boolean_flats():
    fl = flats(boolean(3))
    assert len(fl) == 7
    assert all(f.s == f.codim for f in fl)
    assert lct(boolean(4)) == 1


def test_braid():
    fl = flats(BRAID)
    assert sorted((f.codim, f.s) for f in fl) == [(1, 1), (1, 1), (1, 1), (2, 3)]
    assert lct(BRAID) == Fraction(2, 3)


def test_single_hyperplane():
    a = CentralArrangement(2, ((1, 1),))
    assert len(flats(a)) == 1 and lct(a) == 1


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_lines_through_origin(k):
    a = CentralArrangement(2, tuple((1, j) for j in range(k - 1)) + ((0, 1),))
    assert lct(a) == min(Fraction(1), Fraction(2, k))


def test_validation():
    with pytest.raises(ArrangementError):
        CentralArrangement(2, ((1, 2), (2, 4)))
    with pytest.raises(ArrangementError):
        CentralArrangement(2, ((0, 0),))
    with pytest.raises(ArrangementError):
        tdn3_arrangement(1)


def test_tdn3_arrangement_shape():
    a2, a3 = tdn3_arrangement(2), tdn3_arrangement(3)
    assert (len(a2.forms), a2.m) == (6, 4)
    assert (len(a3.forms), a3.m) == (9, 6)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_tdn3_flat_count(d):
    # the arrangement is a product over j of three lines in a plane (5 flats each)
    assert len(flats(tdn3_arrangement(d))) == 5 ** d - 1


def test_tdn3_minimizer_d2():
    a = tdn3_arrangement(2)
    # W = {x11 = x21 = 0}: forms A1 (0), B1 (2), C1 (4)
    (w,) = [f for f in flats(a) if f.forms == frozenset({0, 2, 4})]
    assert (w.codim, w.s) == (2, 3)
    assert tdn3_min_ratio(2) == Fraction(2, 3)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_tdn3_paths_agree(d):
    want = Fraction(2, 3)
    assert tdn3_min_ratio(d, "flats") == tdn3_closed_form(d) == tdn3_min_ratio(d) == want


def test_tdn3_brute_force_d2_against_subset_oracle():
    a = tdn3_arrangement(2)
    # the subset oracle sees every flat, including the separated ones
    assert lct_by_subsets(a.forms) == lct(a)


@pytest.mark.parametrize("d, coeff", [(2, Fraction(1, 3)), (3, Fraction(2))])
def test_anticanonical_examples(d, coeff):
    _, _, mkd = pullback_and_anticanonical(d)
    assert mkd == DivisorClassT3(0, coeff, coeff, coeff)


@pytest.mark.parametrize("d, witnesses", [(2, ["2/3", "1/3"]), (3, ["2/3", "2"])])
def test_certificate(d, witnesses):
    c = log_fano_certificate(d)
    assert c["pass"]
    assert c["witnesses"] == [Fraction(w) for w in witnesses]
    assert c["lct_D"] == 1


# properties ------------------------------------------------------------------


@st.composite
def arrangements(draw, max_m=3, max_k=5):
    m = draw(st.integers(1, max_m))
    vec = st.lists(st.integers(-3, 3), min_size=m, max_size=m).filter(any)
    raw = draw(st.lists(vec, min_size=1, max_size=max_k))
    forms, seen = [], set()
    for f in raw:
        lead = next(x for x in f if x)
        key = tuple(Fraction(x, lead) for x in f)
        if key not in seen:
            seen.add(key)
            forms.append(tuple(f))
    return CentralArrangement(m, tuple(forms))


@given(arrangements())
def test_lct_matches_subset_oracle(a):
    assert lct(a) == lct_by_subsets(a.forms)
    assert 0 < lct(a) <= 1


@given(arrangements(), st.data())
def test_lct_invariant_under_unimodular_change(a, data):
    m = a.m
    g = [[int(i == j) for j in range(m)] for i in range(m)]
    for _ in range(data.draw(st.integers(0, 5))):
        i, j = data.draw(st.integers(0, m - 1)), data.draw(st.integers(0, m - 1))
        if i != j:
            c = data.draw(st.integers(-2, 2))
            g[i] = [x + c * y for x, y in zip(g[i], g[j])]
    moved = CentralArrangement(m, tuple(tuple(sum(f[k] * g[k][j] for k in range(m)) for j in range(m))
                                        for f in a.forms))
    assert lct(moved) == lct(a)
    assert sorted((f.codim, f.s) for f in flats(moved)) == sorted((f.codim, f.s) for f in flats(a))


@given(st.integers(2, 4), st.integers(2, 7))
def test_generic_arrangement(m, k):
    # Vandermonde rows (1, t, t^2, ...) at distinct t are in general position
    a = CentralArrangement(m, tuple(tuple(t ** j for j in range(m)) for t in range(1, k + 1)))
    assert lct(a) == generic_lct(m, k)


@given(st.integers(2, 40))
def test_anticanonical_formula(d):
    mk, D, mkd = pullback_and_anticanonical(d)
    assert mkd.H == 0
    assert mkd.E12 == mkd.E13 == mkd.E23 == Fraction((2 * d - 3) * (d - 1), 3) > 0
    assert mk - D == mkd
