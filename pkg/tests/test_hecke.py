from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from siegelgen.binquad import BQF
from siegelgen.exact import RatPoly
from siegelgen.hecke import (
    SpinorEulerFactor,
    T0,
    eigen_residual,
    eigenforms,
    hecke_matrix,
    hecke_Tm_coeff,
    hecke_Tp_coeff,
    lambda_andrianov,
    lambda_table,
    lambda_via_action,
    smith_form,
    split_charpoly,
    t2_matrix,
)
from siegelgen.siegel import lift_by_label, product_basis


def naive_cusp_form(weight, prec):
    """The normalized cusp form of weight 18 or 22 as Delta * E_{weight-12}, built from scratch."""
    delta = [0] * prec
    poly = [1] + [0] * (prec - 1)
    for n in range(1, prec):
        for _ in range(24):
            poly = [poly[i] - (poly[i - n] if i >= n else 0) for i in range(prec)]
    delta[1:] = poly[: prec - 1]
    w = weight - 12
    c = -Fraction(2 * w) / Fraction(str(sympy.bernoulli(w)))
    e = [Fraction(1)] + [c * sympy.divisor_sigma(n, w - 1) for n in range(1, prec)]
    return [sum(delta[i] * e[n - i] for i in range(n + 1)) for n in range(prec)]


def sk_hecke_eigenvalues(k, p, nu_max):
    """T(p^nu) eigenvalues of the lift of the weight 2k-2 newform, from the standard Euler factor."""
    ap = naive_cusp_form(2 * k - 2, p + 1)[p]
    X = sympy.Symbol("X")
    Q = (1 - p ** (k - 1) * X) * (1 - p ** (k - 2) * X) * (1 - ap * X + p ** (2 * k - 3) * X**2)
    series = sympy.series((1 - p ** (2 * k - 4) * X**2) / Q, X, 0, nu_max + 1).removeO()
    return [Fraction(str(series.coeff(X, nu))) for nu in range(nu_max + 1)]


SK_CASES = [(k, p, nu) for k in (10, 12) for p in (2, 3, 5) for nu in range(1, 4) if p**nu <= 8]


@pytest.mark.parametrize("k,p,nu", SK_CASES)
def test_saito_kurokawa_eigenvalues(k, p, nu):
    src = lift_by_label("10|^1" if k == 10 else "12|_1")
    expected = sk_hecke_eigenvalues(k, p, nu)[nu]
    assert lambda_andrianov(src.coefficient, p**nu, weight=k) == expected
    assert hecke_Tm_coeff(src, p**nu, T0) == expected * src(T0)


def test_tp_agrees_with_similitude_operator():
    src = lift_by_label("4|_0") * lift_by_label("6|_0")
    for p in (2, 3):
        for t in (BQF(1, 1, 1), BQF(1, 0, 1), BQF(1, 1, 2), BQF(0, 0, 1)):
            assert hecke_Tp_coeff(src, p, t) == hecke_Tm_coeff(src, p, t)


@settings(max_examples=200)
@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30))
def test_smith_form(a, b, c, d):
    det = a * d - b * c
    if det == 0:
        return
    d1, d2, v = smith_form(((a, b), (c, d)))
    assert d1 > 0 and d2 % d1 == 0 and d1 * d2 == abs(det)
    assert abs(v[0][0] * v[1][1] - v[0][1] * v[1][0]) == 1
    assert d1 == sympy.gcd_list([a, b, c, d])


EIGEN_CASES = [(k, p) for k in range(20, 32, 2) for p in (2, 3, 5, 7, 11, 13)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(EIGEN_CASES))
def test_lambda_via_action_matches_andrianov(case):
    k, p = case
    for f in eigenforms(k):
        assert lambda_via_action(f, p) == lambda_andrianov(f, p)


@pytest.mark.parametrize("k", [20, 22, 24, 26])
def test_t2_t3_commute(k):
    b = product_basis(k)
    a2, a3 = hecke_matrix(k, 2, b), hecke_matrix(k, 3, b)
    n = len(a2)
    mul = lambda x, y: [[sum(x[i][l] * y[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
    assert mul(a2, a3) == mul(a3, a2)


@pytest.mark.parametrize("k", range(10, 32, 2))
def test_charpoly_split(k):
    s = split_charpoly(k)
    assert s.full == s.eisenstein * s.klingen * s.maass * s.sprime


def test_known_sprime_factors():
    assert split_charpoly(20).sprime == RatPoly([840960, 1])
    assert not split_charpoly(24).sprime_irreducible
    assert split_charpoly(28).sprime_irreducible and split_charpoly(28).sprime.degree == 3
    with pytest.raises(ValueError):
        split_charpoly(21)


def test_eigenvectors_are_exact():
    for k in (20, 24, 28):
        mat = t2_matrix(k)
        for f in eigenforms(k):
            assert all(x.is_zero() for x in eigen_residual(f, mat))


@given(st.integers(-10**6, 10**6), st.integers(-10**9, 10**9), st.sampled_from([2, 3, 5]))
def test_spinor_series_inverts_q(lp, lp2, p):
    e = SpinorEulerFactor(p, lp, lp2, 20)
    q, s = e.q_coefficients(), e.spinor_powers(8)
    for nu in range(1, 9):
        assert sum(q[i] * s[nu - i] for i in range(min(nu, 4) + 1)) == 0
    h = e.prime_powers(8)
    assert h[1] == lp and h[2] == lp2


def test_lambda_table_is_multiplicative():
    f = eigenforms(20)[0]
    tab = lambda_table(f, 8, 60)
    assert tab[6] == tab[2] * tab[3] and tab[20] == tab[4] * tab[5]
    assert tab[2] == -840960 and tab[3] == 346935960
    assert tab[4] == lambda_andrianov(f, 4)
