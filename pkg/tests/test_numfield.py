from fractions import Fraction

import mpmath
import sympy
from hypothesis import assume, given, settings, strategies as st

from siegelgen.exact import RatPoly
from siegelgen.numfield import NumberField, count_real_roots, nf_real_embeddings, real_roots
from siegelgen.reals import BoundedReal, Interval, intersect_intervals

x = sympy.Symbol("x")
CUBIC = RatPoly([-1, -3, 0, 1])  # x^3 - 3x - 1, totally real
K = NumberField(CUBIC)
coords = st.lists(st.fractions(max_denominator=20, min_value=-20, max_value=20), min_size=3, max_size=3)


def _sym(e):
    return sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(e.poly().coeffs))


def _reduce(expr):
    return sympy.rem(sympy.expand(expr), x**3 - 3 * x - 1, x)


@given(coords, coords)
def test_field_arithmetic_matches_sympy(a, b):
    ea, eb = K(RatPoly(a)), K(RatPoly(b))
    assert sympy.expand(_sym(ea * eb) - _reduce(_sym(ea) * _sym(eb))) == 0
    assert sympy.expand(_sym(ea + eb) - _reduce(_sym(ea) + _sym(eb))) == 0


@given(coords)
def test_inverse(a):
    e = K(RatPoly(a))
    assume(not e.is_zero())
    assert e * e.inverse() == K.one()


@given(coords)
def test_embeddings_are_ring_maps(a):
    e = K(RatPoly(a))
    bits = 128
    roots = sorted(complex(r).real for r in sympy.Poly(x**3 - 3 * x - 1).nroots(n=40))
    embs = nf_real_embeddings(e, bits)
    assert len(embs) == 3
    for r, v in zip(roots, embs):
        direct = sum(float(c) * r**i for i, c in enumerate(e.poly().coeffs))
        assert abs(float(v.value) - direct) <= 1e-9 * (1 + abs(direct))
    sq = nf_real_embeddings(e * e, bits)
    with mpmath.workprec(200):
        for v, s in zip(embs, sq):
            assert abs(v.value**2 - s.value) <= 2 * abs(v.value) * v.error + s.error + v.error**2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=2, max_size=6))
def test_real_root_count_matches_sympy(cs):
    assume(cs[-1] != 0)
    p = RatPoly(cs)
    sp = sympy.Poly(list(reversed(cs)), x)
    assume(sympy.gcd(sp, sp.diff(x)).degree() == 0)
    assert count_real_roots(p) == len(sympy.real_roots(sp))
    for lo, hi in real_roots(p, 60):
        assert lo <= hi and hi - lo <= Fraction(1, 2**50) * (1 + abs(lo))


def test_bounded_real_and_intervals():
    a = BoundedReal(mpmath.mpf(2), mpmath.mpf("0.5"), 128)
    assert a.interval().contains(2.4)
    ok, iv = intersect_intervals([Interval(0, 3), Interval(1, 5), Interval(2, 9)])
    assert ok and (iv.lo, iv.hi) == (2, 3)
    assert intersect_intervals([Interval(0, 1), Interval(2, 3)]) == (False, None)
