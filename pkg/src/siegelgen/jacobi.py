"""Index-1 Jacobi forms of even weight, stored as tables keyed by D = 4n - r^2."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .elliptic import QSeries, dim_M, dim_S, integer_scaled, victor_miller_basis
from .errors import ExtendPrecisionError, PrecisionError
from .exact import bernoulli, divisors, fundamental_discriminant, kronecker, moebius, sigma, solve_rational
from .series import mul_trunc


class JacobiIndex1Form:
    """Coefficients c(D) = num[D] / den for 0 <= D <= dmax; zero for D = 1, 2 mod 4."""

    __slots__ = ("weight", "num", "den")

    def __init__(self, weight: int, num: Sequence[int], den: int = 1):
        if den <= 0:
            raise ValueError("denominator must be positive")
        num = list(num)
        for d, v in enumerate(num):
            if v and d % 4 in (1, 2):
                raise ValueError(f"nonzero coefficient at impossible discriminant {d}")
        g = den
        for v in num:
            if g == 1:
                break
            g = math.gcd(g, v)
        self.weight = weight
        self.num = [v // g for v in num] if g > 1 else num
        self.den = den // g

    @property
    def dmax(self) -> int:
        return len(self.num) - 1

    def c(self, D: int) -> Fraction:
        if D < 0:
            return Fraction(0)
        if D > self.dmax:
            raise ExtendPrecisionError(D, self.dmax)
        return Fraction(self.num[D], self.den)

    def truncate(self, dmax: int) -> "JacobiIndex1Form":
        if dmax > self.dmax:
            raise ExtendPrecisionError(dmax, self.dmax)
        return JacobiIndex1Form(self.weight, self.num[: dmax + 1], self.den)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __eq__(self, other):
        if not isinstance(other, JacobiIndex1Form):
            return NotImplemented
        n = min(self.dmax, other.dmax) + 1
        return self.weight == other.weight and all(
            a * other.den == b * self.den for a, b in zip(self.num[:n], other.num[:n])
        )

    def __repr__(self):
        head = ", ".join(f"c({d})={self.c(d)}" for d in range(min(self.dmax + 1, 9)) if d % 4 in (0, 3))
        return f"JacobiIndex1Form(k={self.weight}, {head}, ..., dmax={self.dmax})"


def linear_combination(coeffs: Sequence, forms: Sequence[JacobiIndex1Form]) -> JacobiIndex1Form:
    if not forms:
        raise ValueError("empty combination")
    k = forms[0].weight
    n = min(f.dmax for f in forms) + 1
    scaled = [Fraction(c) / f.den for c, f in zip(coeffs, forms)]
    den = 1
    for s in scaled:
        den = den * s.denominator // math.gcd(den, s.denominator)
    out = [0] * n
    for s, f in zip(scaled, forms):
        m = int(s * den)
        if m:
            src = f.num
            for i in range(n):
                if src[i]:
                    out[i] += m * src[i]
    return JacobiIndex1Form(k, out, den)


# ---------------------------------------------------------------------------
# Cohen numbers


def _bernoulli_poly_value(r: int, x: Fraction) -> Fraction:
    return sum((math.comb(r, j) * bernoulli(j) * x ** (r - j) for j in range(r + 1)), Fraction(0))


@lru_cache(maxsize=4096)
def _l_value(r: int, d0: int) -> Fraction:
    """L(1 - r, chi_{d0}) for a fundamental discriminant d0 (d0 = 1 means zeta)."""
    f = abs(d0)
    if f == 1:
        return -bernoulli(r) / r
    b = sum(
        (kronecker(d0, a) * _bernoulli_poly_value(r, Fraction(a, f)) for a in range(1, f + 1) if math.gcd(a, f) == 1),
        Fraction(0),
    )
    return -(f ** (r - 1)) * b / r


def cohen_H(r: int, N: int) -> Fraction:
    """Cohen's generalized class number H(r, N)."""
    if r < 1:
        raise ValueError("r must be positive")
    if N == 0:
        return -bernoulli(2 * r) / (2 * r)
    if N < 0:
        return Fraction(0)
    disc = (-1) ** r * N
    if disc % 4 not in (0, 1):
        return Fraction(0)
    d0, f = fundamental_discriminant(disc)
    s = 0
    for d in divisors(f):
        mu = moebius(d)
        if mu:
            s += mu * kronecker(d0, d) * d ** (r - 1) * sigma(f // d, 2 * r - 1)
    return _l_value(r, d0) * s


def _theta(n: int) -> list[int]:
    out = [0] * n
    m = 0
    while m * m < n:
        out[m * m] += 1 if m == 0 else 2
        m += 1
    return out


def _odd_sigma_series(n: int) -> list[int]:
    out = [0] * n
    for d in range(1, n, 2):
        for m in range(d, n, 2 * d):
            out[m] += d
    return out


@lru_cache(maxsize=8)
def cohen_table(r: int, nmax: int) -> tuple[Fraction, ...]:
    """H(r, N) for 0 <= N <= nmax.

    For r in {3, 5, 7} the generating function is the unique normalized form in
    the Kohnen plus space of weight r + 1/2, built from theta and the odd-divisor
    series; other r fall back to the closed formula.
    """
    if r not in (3, 5, 7):
        return tuple(cohen_H(r, N) for N in range(nmax + 1))
    n = nmax + 1
    theta = _theta(n)
    F = _odd_sigma_series(n)
    # monomials theta^(2r+1-4j) F^j of weight r + 1/2
    gens = []
    for j in range((2 * r + 1) // 4 + 1):
        g = [1] + [0] * (n - 1)
        for _ in range(2 * r + 1 - 4 * j):
            g = mul_trunc(g, theta, n)
        for _ in range(j):
            g = mul_trunc(g, F, n)
        gens.append(g)
    m = len(gens)
    bad = [N for N in range(1, n) if ((-1) ** r * N) % 4 in (2, 3)][: m - 1]
    rows = [[g[0] for g in gens]] + [[g[N] for g in gens] for N in bad]
    rhs = [[cohen_H(r, 0)]] + [[0] for _ in bad]
    x = [row[0] for row in solve_rational(rows, rhs)]
    den, xs = integer_scaled(x)
    out = [0] * n
    for c, g in zip(xs, gens):
        if c:
            for i in range(n):
                out[i] += c * g[i]
    for N in range(n):
        if ((-1) ** r * N) % 4 in (2, 3) and out[N]:
            raise AssertionError("plus-space condition failed")
    return tuple(Fraction(v, den) for v in out)


# ---------------------------------------------------------------------------
# Jacobi Eisenstein series and the structure theorem


@lru_cache(maxsize=32)
def jacobi_eisenstein(k: int, dmax: int) -> JacobiIndex1Form:
    """E_{k,1} with c(0) = 1 and c(D) = H(k-1, D) / H(k-1, 0)."""
    if k < 4 or k % 2:
        raise ValueError("Jacobi Eisenstein series need even weight >= 4")
    table = cohen_table(k - 1, dmax)
    h0 = table[0]
    vals = [table[D] / h0 if D % 4 in (0, 3) else Fraction(0) for D in range(dmax + 1)]
    den, ints = integer_scaled(vals)
    return JacobiIndex1Form(k, ints, den)


def multiply_elliptic(f: QSeries, phi: JacobiIndex1Form) -> JacobiIndex1Form:
    """The Jacobi form f(tau) * phi(tau, z), computed on the (n, r in {0, 1}) grid."""
    dmax = phi.dmax
    n0 = dmax // 4 + 1  # D = 4n for n < n0
    n1 = (dmax + 1) // 4 + 1  # D = 4n - 1 for n < n1 (n = 0 gives D = -1)
    need = max(n0, n1)
    if f.prec < need:
        raise PrecisionError(f"elliptic factor known to q^{f.prec - 1}, need q^{need - 1}")
    fden, fints = integer_scaled(f.coeffs[:need])
    u = [phi.num[4 * n] for n in range(n0)]
    v = [0] + [phi.num[4 * n - 1] for n in range(1, n1)]
    u2 = mul_trunc(fints, u, n0)
    v2 = mul_trunc(fints, v, n1)
    out = [0] * (dmax + 1)
    for n in range(n0):
        out[4 * n] = u2[n]
    for n in range(1, n1):
        out[4 * n - 1] = v2[n]
    return JacobiIndex1Form(f.weight + phi.weight, out, fden * phi.den)


@lru_cache(maxsize=64)
def jacobi_space(k: int, dmax: int) -> tuple[JacobiIndex1Form, ...]:
    """Basis E_{4,1} M_{k-4} + E_{6,1} M_{k-6} of J_{k,1}."""
    if k % 2:
        raise ValueError("odd weight is not supported")
    if k < 4:
        return ()
    prec = dmax // 4 + 2
    out = []
    for w in (4, 6):
        if k - w < 0 or dim_M(k - w) == 0:
            continue
        e = jacobi_eisenstein(w, dmax)
        for f in victor_miller_basis(k - w, prec):
            out.append(multiply_elliptic(f, e))
    return tuple(out)


def _r_terms(n: int):
    r = 0
    while r * r <= 4 * n:
        yield r, (1 if r == 0 else 2)
        r += 1


def dev_D0(phi: JacobiIndex1Form, prec: int) -> QSeries:
    """Restriction to z = 0: n-th coefficient sum_r c(4n - r^2)."""
    if 4 * (prec - 1) > phi.dmax:
        raise PrecisionError("Jacobi table too short for the requested precision")
    out = []
    for n in range(prec):
        s = sum(mult * phi.num[4 * n - r * r] for r, mult in _r_terms(n))
        out.append(Fraction(s, phi.den))
    return QSeries(phi.weight, out)


def dev_D2(phi: JacobiIndex1Form, prec: int) -> QSeries:
    """Second Taylor development: n-th coefficient sum_r (k r^2 - 2n) c(4n - r^2)."""
    if 4 * (prec - 1) > phi.dmax:
        raise PrecisionError("Jacobi table too short for the requested precision")
    k = phi.weight
    out = []
    for n in range(prec):
        s = sum(mult * (k * r * r - 2 * n) * phi.num[4 * n - r * r] for r, mult in _r_terms(n))
        out.append(Fraction(s, phi.den))
    return QSeries(k + 2, out)


def label_names(k: int) -> list[str]:
    return [f"{k}|_{i}" for i in range(dim_M(k))] + [f"{k}|^{i}" for i in range(1, dim_S(k + 2) + 1)]


@lru_cache(maxsize=64)
def _label_coefficients(k: int) -> tuple[tuple[Fraction, ...], ...]:
    """Rows expressing each label in the jacobi_space basis (depth independent)."""
    dm, ds = dim_M(k), dim_S(k + 2)
    dmax = 4 * max(dm, ds + 1) + 4
    basis = jacobi_space(k, dmax)
    prec = max(dm, ds + 1)
    rows = []
    for phi in basis:
        d0 = dev_D0(phi, prec)
        d2 = dev_D2(phi, prec)
        rows.append([d0[i] for i in range(dm)] + [d2[i] for i in range(1, ds + 1)])
    n = len(rows)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    # X rows satisfy X * rows = I; solve rows^T X^T = I
    cols = [list(r) for r in zip(*rows)]
    xt = solve_rational(cols, ident)
    return tuple(tuple(xt[j][i] for j in range(n)) for i in range(n))


@lru_cache(maxsize=64)
def spezialschar_labels(k: int, dmax: int) -> dict[str, JacobiIndex1Form]:
    """Jacobi forms k|_i and k|^i with developments (f_{k,i}, 0) and (0, f_{k+2,i})."""
    if k < 4:
        return {}
    basis = jacobi_space(k, dmax)
    coeffs = _label_coefficients(k)
    return {name: linear_combination(row, basis) for name, row in zip(label_names(k), coeffs)}
