from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from siegelgen.elliptic import (
    delta,
    dim_M,
    dim_S,
    eisenstein,
    QSeries,
    elliptic_hecke_matrix,
    hecke_image,
    victor_miller_basis,
    vm_coordinates,
)
from siegelgen.exact import RatPoly, charpoly
from siegelgen.jacobi import (
    dev_D0,
    dev_D2,
    jacobi_eisenstein,
    label_names,
    linear_combination,
    multiply_elliptic,
    spezialschar_labels,
)
from siegelgen.series import mul_trunc, pow_trunc

PREC = 30


def naive_delta(prec):
    """q * prod (1 - q^n)^24 by repeated schoolbook multiplication."""
    poly = [1] + [0] * (prec - 1)
    for n in range(1, prec):
        for _ in range(24):
            poly = [poly[i] - (poly[i - n] if i >= n else 0) for i in range(prec)]
    return [0] + poly[: prec - 1]


def test_delta_product():
    assert [int(c) for c in delta(PREC).coeffs] == naive_delta(PREC)


@pytest.mark.parametrize("k", [4, 6, 8, 10, 12, 14])
def test_eisenstein_divisor_sums(k):
    e = eisenstein(k, PREC)
    const = -Fraction(2 * k) / Fraction(str(sympy.bernoulli(k)))
    assert e[0] == 1
    assert all(e[n] == const * sympy.divisor_sigma(n, k - 1) for n in range(1, PREC))


def test_dimensions():
    dm = {0: 1, 2: 0, 4: 1, 12: 2, 14: 1, 24: 3, 26: 2}
    assert {k: dim_M(k) for k in dm} == dm
    assert dim_S(12) == 1 and dim_S(22) == 1 and dim_S(24) == 2 and dim_S(14) == 0


@pytest.mark.parametrize("k", [12, 24, 36])
def test_victor_miller_shape(k):
    d = dim_M(k)
    for i, f in enumerate(victor_miller_basis(k, PREC)):
        assert [f[j] for j in range(d)] == [int(i == j) for j in range(d)]
        assert all(c.denominator == 1 for c in f.coeffs)


@given(st.integers(1, 8), st.integers(0, 8))
def test_products_stay_in_the_space(i, j):
    g = pow_trunc([int(c) for c in eisenstein(6, PREC).coeffs], i, PREC)
    h = mul_trunc(g, pow_trunc([int(c) for c in eisenstein(4, PREC).coeffs], j, PREC), PREC)
    k = 6 * i + 4 * j
    vm_coordinates(QSeries(k, h), k)


def test_series_mul_matches_naive():
    a, b = list(range(1, 12)), [(-1) ** i * i * i for i in range(11)]
    naive = [sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(11)]
    assert mul_trunc(a, b, 11) == naive


def test_ramanujan_tau_from_hecke():
    d = delta(40)
    for p in (2, 3, 5, 7):
        assert hecke_image(d, p, 12)[1] == d[p]
    assert elliptic_hecke_matrix(12, 2) == [[-24]]


@pytest.mark.parametrize("k", [24, 28, 36])
def test_hecke_matrices_commute(k):
    a, b = elliptic_hecke_matrix(k, 2), elliptic_hecke_matrix(k, 3)
    n = len(a)
    ab = [[sum(a[i][l] * b[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
    ba = [[sum(b[i][l] * a[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
    assert ab == ba


def test_weight_24_hecke_polynomial():
    # roots 540 +- 12 sqrt(144169)
    assert charpoly(elliptic_hecke_matrix(24, 2)) == RatPoly([540 * 540 - 144 * 144169, -1080, 1])


def test_jacobi_eisenstein_restricts_to_eisenstein():
    for k in (4, 6):
        assert dev_D0(jacobi_eisenstein(k, 4 * PREC), PREC) == eisenstein(k, PREC)
    e4 = jacobi_eisenstein(4, 40)
    assert [e4.c(d) for d in (0, 3, 4, 7, 8)] == [1, 56, 126, 576, 756]


@pytest.mark.parametrize("k", [10, 12, 16, 20, 24])
def test_label_developments(k):
    dmax = 4 * 12
    labels = spezialschar_labels(k, dmax)
    assert list(labels) == label_names(k)
    prec = 12
    vm0 = victor_miller_basis(k, prec)
    vm2 = victor_miller_basis(k + 2, prec)
    for name, phi in labels.items():
        d0, d2 = dev_D0(phi, prec), dev_D2(phi, prec)
        i = int(name.rsplit("_", 1)[-1]) if "|_" in name else int(name.rsplit("^", 1)[-1])
        if "|_" in name:
            assert d0 == vm0[i]
            assert not any(d2.coeffs)
        else:
            assert not any(d0.coeffs)
            assert d2 == vm2[i]


def test_weight_10_cusp_form_from_products():
    dmax = 40
    e4, e6 = jacobi_eisenstein(4, dmax), jacobi_eisenstein(6, dmax)
    a = multiply_elliptic(eisenstein(6, dmax + 1), e4)
    b = multiply_elliptic(eisenstein(4, dmax + 1), e6)
    phi = linear_combination([1, -1], [a, b])
    target = spezialschar_labels(10, dmax)["10|^1"]
    ratio = phi.c(3) / target.c(3)
    assert all(phi.c(d) == ratio * target.c(d) for d in range(dmax + 1))
