from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from oracles import dirichlet_class_number, naive_class_count, reduced_in_orbit
from siegelgen.binquad import (
    BQF,
    aut_order,
    class_reps,
    decompositions,
    gl2_reps,
    naive_decompositions,
    reduce,
    reduced,
    reduced_forms_upto,
)
from siegelgen.exact import is_fundamental


@st.composite
def psd_forms(draw, max_det4=40):
    a = draw(st.integers(0, 12))
    c = draw(st.integers(0, 12))
    lim = int((4 * a * c) ** 0.5)
    b = draw(st.integers(-lim, lim))
    t = BQF(a, b, c)
    if not t.is_psd() or t.det4 > max_det4:
        t = BQF(a, 0, 0) if draw(st.booleans()) else BQF(1, 1, 1)
    return t


@settings(max_examples=300)
@given(psd_forms())
def test_reduction_witness(t):
    r, u = reduce(t)
    assert r.is_reduced() or r.a == 0
    assert t.transform(u) == r
    assert abs(u[0][0] * u[1][1] - u[0][1] * u[1][0]) == 1


@settings(max_examples=150)
@given(psd_forms())
def test_reduction_matches_orbit_search(t):
    if not t.is_definite():
        return
    assert reduced_in_orbit(t) == {reduced(t)}


@pytest.mark.parametrize("D", [d for d in range(-3, -101, -1) if d % 4 in (0, 1)])
def test_class_counts_naive(D):
    assert len(class_reps(D)) == naive_class_count(D)


@pytest.mark.parametrize("D", [d for d in range(-7, -101, -1) if is_fundamental(d)])
def test_class_number_formula(D):
    assert len(class_reps(D)) == dirichlet_class_number(D)


def test_small_class_data():
    assert class_reps(-3) == [BQF(1, 1, 1)]
    assert aut_order(BQF(1, 1, 1)) == 6 and aut_order(BQF(1, 0, 1)) == 4 and aut_order(BQF(1, 1, 6)) == 2
    assert len(class_reps(-23)) == 3


@given(st.integers(3, 200))
def test_gl2_reps_are_reduced_and_distinct(d):
    reps = gl2_reps(d)
    assert len(set(reps)) == len(reps)
    assert all(r.is_reduced() and r.det4 == d for r in reps)


def test_forms_upto_sorted():
    forms = reduced_forms_upto(60, singular=3)
    assert forms[:3] == [BQF(0, 0, 0), BQF(0, 0, 1), BQF(0, 0, 2)]
    keys = [(t.det4, t.a, t.b) for t in forms[3:]]
    assert keys == sorted(keys)


@settings(max_examples=60, deadline=None)
@given(psd_forms(max_det4=20))
def test_aggregated_decompositions_match_naive(t):
    assert decompositions(t) == naive_decompositions(t)
