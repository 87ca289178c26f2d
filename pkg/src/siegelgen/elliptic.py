"""q-expansions of level-one elliptic modular forms."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import PrecisionError
from .exact import bernoulli
from .series import mul_trunc


def _lcm_den(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        d = v.denominator
        if d != 1:
            out = out * d // math.gcd(out, d)
    return out


class QSeries:
    """Power series sum c_n q^n known exactly for 0 <= n < prec."""

    __slots__ = ("weight", "prec", "coeffs")

    def __init__(self, weight: int, coeffs: Sequence, prec: int | None = None):
        prec = len(coeffs) if prec is None else prec
        if prec < 0 or len(coeffs) < prec:
            raise ValueError("precision exceeds supplied coefficients")
        self.weight = weight
        self.prec = prec
        self.coeffs = tuple(Fraction(c) for c in coeffs[:prec])

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n >= self.prec:
            raise PrecisionError(f"q^{n} requested, series known to q^{self.prec - 1}")
        return self.coeffs[n]

    def __len__(self):
        return self.prec

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        n = min(self.prec, other.prec)
        return self.coeffs[:n] == other.coeffs[:n]

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        head = " + ".join(f"{c}*q^{i}" for i, c in enumerate(self.coeffs[:6]) if c)
        return f"QSeries(weight={self.weight}, {head or '0'} + O(q^{self.prec}))"

    def truncate(self, prec: int) -> "QSeries":
        return QSeries(self.weight, self.coeffs, min(prec, self.prec))

    def _combine(self, other, sign):
        if not isinstance(other, QSeries):
            return NotImplemented
        n = min(self.prec, other.prec)
        return QSeries(self.weight, [a + sign * b for a, b in zip(self.coeffs[:n], other.coeffs[:n])])

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return QSeries(self.weight, [-c for c in self.coeffs])

    def scale(self, c) -> "QSeries":
        c = Fraction(c)
        return QSeries(self.weight, [c * a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        n = min(self.prec, other.prec)
        da, ia = integer_scaled(self.coeffs[:n])
        db, ib = integer_scaled(other.coeffs[:n])
        prod = mul_trunc(ia, ib, n)
        den = da * db
        return QSeries(self.weight + other.weight, [Fraction(x, den) for x in prod])

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QSeries":
        out = one(self.prec)
        for _ in range(e):
            out = out * self
        return out

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def int_coeffs(self) -> list[int]:
        den, ints = integer_scaled(self.coeffs)
        if den != 1:
            raise ValueError("series has non-integral coefficients")
        return ints


def integer_scaled(coeffs: Sequence[Fraction]) -> tuple[int, list[int]]:
    """(d, ints) with coeffs = ints / d."""
    d = _lcm_den(coeffs)
    if d == 1:
        return 1, [int(c) for c in coeffs]
    return d, [int(c * d) for c in coeffs]


def one(prec: int) -> QSeries:
    return QSeries(0, [1] + [0] * (prec - 1), prec)


@lru_cache(maxsize=64)
def _sigma_table(e: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for d in range(1, n):
        pe = d**e
        for m in range(d, n, d):
            out[m] += pe
    return tuple(out)


def eisenstein(k: int, prec: int) -> QSeries:
    """E_k normalized with constant term 1."""
    if k < 4 or k % 2:
        raise ValueError("Eisenstein series need even weight >= 4")
    factor = Fraction(-2 * k) / bernoulli(k)
    sig = _sigma_table(k - 1, prec)
    return QSeries(k, [Fraction(1)] + [factor * s for s in sig[1:]], prec)


@lru_cache(maxsize=16)
def _delta_ints(prec: int) -> tuple[int, ...]:
    e4 = eisenstein(4, prec).int_coeffs()
    e6 = eisenstein(6, prec).int_coeffs()
    cube = mul_trunc(mul_trunc(e4, e4, prec), e4, prec)
    sq = mul_trunc(e6, e6, prec)
    return tuple((a - b) // 1728 for a, b in zip(cube, sq))


def delta(prec: int) -> QSeries:
    if prec < 1:
        raise ValueError("precision must be positive")
    return QSeries(12, _delta_ints(prec), prec)


def dim_M(k: int) -> int:
    if k < 0 or k % 2:
        return 0
    if k % 12 == 2:
        return k // 12
    return k // 12 + 1


def dim_S(k: int) -> int:
    if k < 12 or k % 2:
        return 0
    return dim_M(k) - 1


def _eisen_product(k: int, prec: int) -> list[int]:
    """E_4^a E_6^b of weight k in {0, 4, 6, 8, 10, 14}, integral."""
    a, b = {0: (0, 0), 4: (1, 0), 6: (0, 1), 8: (2, 0), 10: (1, 1), 14: (2, 1)}[k]
    out = [1] + [0] * (prec - 1)
    e4 = eisenstein(4, prec).int_coeffs()
    e6 = eisenstein(6, prec).int_coeffs()
    for _ in range(a):
        out = mul_trunc(out, e4, prec)
    for _ in range(b):
        out = mul_trunc(out, e6, prec)
    return out


@lru_cache(maxsize=64)
def _vm_ints(k: int, prec: int) -> tuple[tuple[int, ...], ...]:
    d = dim_M(k)
    if d == 0:
        return ()
    r = k - 12 * (d - 1)
    if r not in (0, 4, 6, 8, 10, 14):
        raise AssertionError(k)
    # g_j = Delta^j * E6^(2(d-1-j)) * E_r has q-expansion q^j + ...
    e6sq = mul_trunc(eisenstein(6, prec).int_coeffs(), eisenstein(6, prec).int_coeffs(), prec)
    dl = list(_delta_ints(prec))
    base = _eisen_product(r, prec)
    rows = []
    for j in range(d):
        g = base
        for _ in range(d - 1 - j):
            g = mul_trunc(g, e6sq, prec)
        for _ in range(j):
            g = mul_trunc(g, dl, prec)
        rows.append(g)
    # back-substitute: clear q^j (j > i) in row i using integral unit pivots
    for j in range(d - 1, -1, -1):
        for i in range(j):
            c = rows[i][j]
            if c:
                rows[i] = [x - c * y for x, y in zip(rows[i], rows[j])]
    return tuple(tuple(r_) for r_ in rows)


def victor_miller_basis(k: int, prec: int) -> list[QSeries]:
    """Basis f_{k,0}, ..., f_{k,d-1} of M_k with f_{k,i} = q^i + O(q^d)."""
    if k == 0:
        return [one(prec)]
    d = dim_M(k)
    if d and prec < d:
        raise PrecisionError(f"precision {prec} below dimension {d}")
    return [QSeries(k, row, prec) for row in _vm_ints(k, prec)]


def vm_coordinates(f: QSeries, k: int) -> list[Fraction]:
    """Coordinates of f in the Victor-Miller basis; raises if f is not in M_k."""
    d = dim_M(k)
    basis = victor_miller_basis(k, f.prec)
    coords = [f[i] for i in range(d)]
    resid = f
    for c, b in zip(coords, basis):
        resid = resid - b.scale(c)
    if any(resid.coeffs):
        raise ValueError("series does not lie in M_k to the available precision")
    return coords


def hecke_image(f: QSeries, p: int, k: int) -> QSeries:
    """T_p f with b(n) = a(pn) + p^(k-1) a(n/p)."""
    n = (f.prec - 1) // p + 1
    pk = p ** (k - 1)
    return QSeries(k, [f[p * m] + (pk * f[m // p] if m % p == 0 else 0) for m in range(n)])


def elliptic_hecke_matrix(k: int, p: int, cuspidal: bool = True) -> list[list[Fraction]]:
    """Row i holds the Victor-Miller coordinates of T_p f_{k,i}."""
    d = dim_M(k)
    start = 1 if cuspidal else 0
    if cuspidal and dim_S(k) < 1:
        return []
    prec = p * d + 1
    basis = victor_miller_basis(k, prec)[start:]
    rows = []
    for f in basis:
        g = hecke_image(f, p, k)
        rows.append([g[j] for j in range(start, d)])
    return rows
