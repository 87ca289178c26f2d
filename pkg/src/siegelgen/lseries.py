"""Central values of twisted spinor L-series: kernels, truncations, error bounds."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import mpmath
import numpy as np
from scipy import integrate, special

from .binquad import BQF, aut_order, class_reps
from .errors import PrecisionError
from .exact import factorint, fundamental_discriminant, kronecker
from .reals import MIN_BITS, BoundedReal, Interval, intersect_intervals

SAFETY = 2

# Correction factors for kappa * eta_tilde, keyed by eigenform label.
KAPPA = {
    "20": 180,
    "22": 90,
    "24a": 70,
    "24b": 45,
    "26a": 400,
    "26b": 220,
    "28": 90,
    "30": 150,
    "32": 120,
    "34": 2300,
    "36": 85,
    "38": 400,
}


# Rational eigenforms of weights 24 and 26 told apart by their T(2) eigenvalue.
LABEL_BY_LAMBDA2 = {
    (24, -5560320): "24a",
    (24, -6465024): "24b",
    (26, -18063360): "26a",
    (26, -5276160): "26b",
}


def eigenform_label(f) -> str:
    if f.is_rational:
        lam2 = -f.polynomial.coeffs[0]
        hit = LABEL_BY_LAMBDA2.get((f.weight, lam2))
        if hit:
            return hit
    return str(f.weight)


def kappa_for(f, table: dict[str, int] | None = None) -> int | None:
    return (KAPPA if table is None else table).get(eigenform_label(f))


def read_kappa_table(text: str) -> dict[str, int]:
    """Two whitespace-separated columns per line: label and correction factor; '#' starts a comment."""
    out = {}
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"kappa table line {n}: expected two columns")
        out[parts[0]] = int(parts[1])
    return out


def _mpf(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, BoundedReal):
        return x.value
    return mpmath.mpf(x)


def _round_err(v, bits: int):
    # relative: kernel values span hundreds of orders of magnitude
    return mpmath.ldexp(abs(v), -(bits - 4))


# ---------------------------------------------------------------------------
# K-Bessel


def bessel_K_quadrature(nu, x, bits: int = MIN_BITS) -> BoundedReal:
    """K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt."""
    with mpmath.workprec(bits + 32):
        nu, x = _mpf(nu), _mpf(x)
        if x <= 0:
            raise ValueError("K-Bessel argument must be positive")
        # the integrand peaks near sinh t = nu / x and is negligible once x cosh t - nu t exceeds the cutoff
        cut = (bits + 40) * mpmath.log(2)
        peak = mpmath.asinh(nu / x)
        top = peak + 1
        while x * mpmath.cosh(top) - nu * top - (x * mpmath.cosh(peak) - nu * peak) < cut:
            top += 1
        nodes = [0] + ([peak] if peak > 0 else []) + [top]
        f = lambda t: mpmath.exp(nu * t - x * mpmath.cosh(t)) / 2 + mpmath.exp(-nu * t - x * mpmath.cosh(t)) / 2
        val, err = mpmath.quad(f, nodes, error=True, maxdegree=10)
        return BoundedReal(+val, SAFETY * err + _round_err(val, bits), bits)


def bessel_K_recurrence(nu, x, bits: int = MIN_BITS) -> BoundedReal:
    """Upward recurrence K_{n+1} = K_{n-1} + (2n/x) K_n from the two lowest orders."""
    twice = 2 * Fraction(nu)
    if twice.denominator != 1 or twice < 0:
        raise ValueError("order must be a nonnegative integer or half-integer")
    with mpmath.workprec(bits + 32):
        x = _mpf(x)
        if x <= 0:
            raise ValueError("K-Bessel argument must be positive")
        if twice % 2:
            base = mpmath.sqrt(mpmath.pi / (2 * x)) * mpmath.exp(-x)
            k0, k1, start = base, base * (1 + 1 / x), mpmath.mpf(1) / 2
        else:
            k0, k1, start = mpmath.besselk(0, x), mpmath.besselk(1, x), mpmath.mpf(0)
        order = start
        target = _mpf(nu)
        if target == order:
            val = k0
        else:
            while order + 1 < target:
                k0, k1 = k1, k0 + 2 * (order + 1) / x * k1
                order += 1
            val = k1
        return BoundedReal(+val, _round_err(val, bits), bits)


def _k_int_order(nu: int, x):
    """K_nu(x) for integer nu at the ambient precision (integrand helper)."""
    k0, k1 = mpmath.besselk(0, x), mpmath.besselk(1, x)
    if nu == 0:
        return k0
    for n in range(1, nu):
        k0, k1 = k1, k0 + 2 * n / x * k1
    return k1


def bessel_K(nu, x, bits: int = MIN_BITS, check: bool = True) -> BoundedReal:
    """K_nu(x) by recurrence, cross-checked against quadrature at reduced precision."""
    out = bessel_K_recurrence(nu, x, bits)
    if check:
        low = max(53, bits // 2)
        q = bessel_K_quadrature(nu, x, low)
        with mpmath.workprec(bits + 32):
            if abs(q.value - out.value) > mpmath.ldexp(abs(out.value), -(low - 16)) + q.error:
                raise PrecisionError(f"K-Bessel paths disagree at nu={nu}, x={x}")
    return out


# ---------------------------------------------------------------------------
# kernels


def _prefactor(k: int, D: int, s):
    c0 = 2 * mpmath.pi / abs(D)
    return 2 * c0 ** (2 - k + 2 * s) / (mpmath.gamma(s) * mpmath.gamma(s - k + 2))


def _kernel_integral(n, k: int, D: int, e1, e2, bits: int):
    """int_n^inf K_{k-2}(4 pi sqrt(y)/|D|) ((y/n)^e1 + (y/n)^e2) dy, with y = t^2."""
    c = 4 * mpmath.pi / abs(D)
    n = mpmath.mpf(n)
    t0 = mpmath.sqrt(n)

    def f(t):
        y = t * t
        return mpmath.besselk(k - 2, c * t) * ((y / n) ** e1 + (y / n) ** e2) * 2 * t

    step = max(mpmath.mpf(1), 8 / c)
    nodes = [t0 + step * (4**i - 1) for i in range(8)] + [mpmath.inf]
    return mpmath.quad(f, nodes, error=True)


def g_kernel_closed(n: int, k: int, D: int, bits: int = MIN_BITS) -> BoundedReal:
    """g_D(n) at the centre s = k - 1 through a single K_{k-1} value."""
    with mpmath.workprec(bits + 32):
        c = 4 * mpmath.pi / abs(D)
        c0 = c / 2
        rn = mpmath.sqrt(n)
        kk = bessel_K(k - 1, c * rn, bits, check=False)
        val = 2 * c0**k * mpmath.mpf(n) ** (-mpmath.mpf(k) / 2) / mpmath.gamma(k - 1) * 4 * rn * kk.value / c
        return BoundedReal(+val, _round_err(val, bits), bits)


def g_kernel_quadrature(n: int, k: int, D: int, s, bits: int = MIN_BITS) -> BoundedReal:
    with mpmath.workprec(bits + 32):
        s = _mpf(s)
        e1 = mpmath.mpf(3 * k) / 2 - 2 - s
        e2 = s - mpmath.mpf(k) / 2
        val, err = _kernel_integral(n, k, D, e1, e2, bits)
        pre = _prefactor(k, D, s) * mpmath.mpf(n) ** (-mpmath.mpf(k) / 2)
        v = pre * val
        return BoundedReal(+v, SAFETY * abs(pre) * err + _round_err(v, bits), bits)


def g_kernel(n: int, k: int, D: int, s=None, bits: int = MIN_BITS) -> BoundedReal:
    """Kohnen's kernel g_D(n); s defaults to the centre k - 1."""
    if n < 1:
        raise ValueError("n must be positive")
    if s is None or Fraction(s) == k - 1:
        return g_kernel_closed(n, k, D, bits)
    return g_kernel_quadrature(n, k, D, s, bits)


def g_tilde(n: int, k: int, D: int, s=None, bits: int = MIN_BITS, with_norm: bool = True) -> BoundedReal:
    """Majorant kernel with floor/ceil exponents; with_norm keeps the n^(-k/2) factor of g."""
    s = Fraction(k - 1) if s is None else Fraction(s)
    lo, hi = math.floor(s), math.ceil(s)
    with mpmath.workprec(bits + 32):
        e1 = mpmath.mpf(3 * k) / 2 - 2 - lo
        e2 = hi - mpmath.mpf(k) / 2
        norm = mpmath.mpf(n) ** (-mpmath.mpf(k) / 2) if with_norm else mpmath.mpf(1)
        if lo == hi == k - 1:
            # exponents coincide and the integral has the closed form of g
            base = g_kernel_closed(n, k, D, bits)
            v = base.value * mpmath.mpf(n) ** (mpmath.mpf(k) / 2) * norm
            return BoundedReal(+v, _round_err(v, bits), bits)
        val, err = _kernel_integral(n, k, D, e1, e2, bits)
        pre = _prefactor(k, D, _mpf(s)) * norm
        v = pre * val
        return BoundedReal(+v, SAFETY * abs(pre) * err + _round_err(v, bits), bits)


# ---------------------------------------------------------------------------
# truncated series and bounds


def smooth_support(N: int, P: int) -> list[int]:
    return [n for n in range(1, N + 1) if all(q < P for q in factorint(n))]


def z_truncated(
    lam: Mapping[int, object], k: int, D: int, P: int, N: int, s=None, bits: int = MIN_BITS
) -> BoundedReal:
    """sum over P-smooth n <= N of g_D(n) lambda(n) chi_D(n)."""
    total = mpmath.mpf(0)
    err = mpmath.mpf(0)
    with mpmath.workprec(bits + 32):
        for n in smooth_support(N, P):
            chi = kronecker(D, n)
            if not chi:
                continue
            if n not in lam:
                raise KeyError(f"lambda({n}) missing")
            g = g_kernel(n, k, D, s, bits)
            lv = lam[n]
            l_val = _mpf(lv)
            l_err = lv.error if isinstance(lv, BoundedReal) else 0
            total += chi * g.value * l_val
            err += g.error * abs(l_val) + abs(g.value) * l_err
        return BoundedReal(+total, err + _round_err(total, bits), bits)


def _log_integral(logf, start: float, scale: float) -> tuple[mpmath.mpf, mpmath.mpf]:
    """int_start^inf exp(logf(t)) dt for a positive integrand with exponential decay.

    A bound needs only a few digits, so this runs in double precision: the integrand is
    shifted by its maximum on a coarse grid and the shift is reapplied in mpmath.
    """
    grid = start + scale * np.arange(1, 2000)
    logs = np.array([logf(t) for t in grid])
    ref = float(np.max(logs))
    last = int(np.max(np.nonzero(logs > ref - 80)[0])) + 1
    upper = float(start + scale * (last + 1))
    pts = [float(start + scale * i) for i in range(4, last, 4)]
    val, abserr = integrate.quad(lambda t: math.exp(logf(t) - ref), start, upper, points=pts or None, limit=1000)
    # the dropped tail is below exp(-80) relative per unit scale and decays geometrically
    tail = val * 1e-30
    with mpmath.workprec(64):
        w = mpmath.exp(ref)
        return w * val, w * (abserr + tail + val * 1e-13)


def _log_kbessel(nu: int, x: float) -> float:
    return math.log(special.kve(nu, x)) - x


def eta_integrals(k: int, D: int, N: int, s=None, bits: int = MIN_BITS) -> BoundedReal:
    """The indicator-gated integral part of the error bound, rounded up (substitution y = t^2)."""
    sigma = Fraction(k - 1) if s is None else Fraction(s)
    c = 4 * math.pi / abs(D)
    t0 = math.sqrt(N + 1)
    nu = k - 2
    terms = []
    mult1 = int(sigma > Fraction(2 * k - 5, 2)) + int(sigma < Fraction(2 * k + 1, 2))
    if mult1:

        def lf(t):
            y = t * t
            return _log_kbessel(nu, c * t) + (k + 1) / 2 * math.log(y) + math.log(y - N) + math.log(2 * t)

        terms.append((mult1, lf))
    if sigma <= Fraction(2 * k - 5, 2):
        fl = math.floor(sigma)

        def lf(t):
            y = t * t
            return (
                _log_kbessel(nu, c * t) + fl * math.log((y - 1) / y) + (-k + 2.5) * math.log(y - 1)
                + (1.5 * k - 2) * math.log(y) + math.log(y - N) + math.log(2 * t)
            )

        terms.append((1, lf))
    if sigma >= Fraction(2 * k + 1, 2):
        ce = math.ceil(sigma)

        def lf(t):
            y = t * t
            return (
                _log_kbessel(nu, c * t) + ce * math.log(y / (y - 1)) + (k + 1) * math.log(y - 1)
                + (-k + 1) / 2 * math.log(y) + math.log(y - N) + math.log(2 * t)
            )

        terms.append((1, lf))
    with mpmath.workprec(bits + 32):
        total = mpmath.mpf(0)
        for mult, lf in terms:
            v, e = _log_integral(lf, t0, 1 / c)
            total += mult * (v + SAFETY * e)
        v = _prefactor(k, D, _mpf(sigma)) * total
        return BoundedReal(+v, _round_err(v, bits), bits)


def _primes_between(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p < hi."""
    if hi <= 2:
        return []
    sieve = bytearray([1]) * hi
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(hi - 1) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [p for p in range(max(lo, 2), hi) if sieve[p]]


def eta_prime_tail(
    lam_abs: Mapping[int, object], k: int, D: int, N: int, P: int, s=None, bits: int = MIN_BITS, with_norm: bool = True
) -> BoundedReal:
    """sum over primes P <= p < N and nu <= N/p of 4 p^(k-3/2) |lambda(nu)| g~(nu p)."""
    total = mpmath.mpf(0)
    with mpmath.workprec(bits + 32):
        for p in _primes_between(P, N):
            for nu in range(1, N // p + 1):
                g = g_tilde(nu * p, k, D, s, bits, with_norm)
                lv = lam_abs[nu]
                l_up = abs(_mpf(lv)) + (lv.error if isinstance(lv, BoundedReal) else 0)
                total += 4 * mpmath.mpf(p) ** (k - mpmath.mpf(3) / 2) * l_up * (g.value + g.error)
        return BoundedReal(+total, _round_err(total, bits), bits)


def eta_bound(
    lam_abs: Mapping[int, object], k: int, D: int, N: int, P: int, s=None, bits: int = MIN_BITS, with_norm: bool = True
) -> BoundedReal:
    """Upper bound for |Z_{f,D}(s) - Z~_{f,D}(s, P, N)|; nonnegative by construction."""
    tail = eta_prime_tail(lam_abs, k, D, N, P, s, bits, with_norm)
    integ = eta_integrals(k, D, N, s, bits)
    with mpmath.workprec(bits + 32):
        v = tail.value + integ.value + tail.error + integ.error
        return BoundedReal(+v, _round_err(v, bits), bits)


def eta_tilde(z1: BoundedReal, z2: BoundedReal, kappa=1) -> BoundedReal:
    """kappa * |Z~(P, N) - Z~(P', N')|."""
    with mpmath.workprec(max(z1.bits, z2.bits) + 32):
        v = kappa * abs(z1.value - z2.value)
        return BoundedReal(+v, kappa * (z1.error + z2.error), min(z1.bits, z2.bits))


# ---------------------------------------------------------------------------
# class sums


def class_sum(coefficient, D: int):
    """sum over SL2 classes [t] of discriminant D of a(t) / |Aut(t)|."""
    total = 0
    for t in class_reps(D):
        total = total + coefficient(t) * Fraction(1, aut_order(t))
    return total


def b_factor(coefficient, D: int):
    s = class_sum(coefficient, D)
    return s * s


def fundamental_discriminants(lo: int, hi: int = 0) -> list[int]:
    """Negative fundamental discriminants D with lo < D < hi, descending."""
    return [D for D in range(hi - 1, lo, -1) if D % 4 in (0, 1) and fundamental_discriminant(D) == (D, 1)]


def discriminant_scale(k: int, D: int):
    """|D|^(k-1): the factor relating Z~ / B to a D-independent constant."""
    return mpmath.mpf(abs(D)) ** (k - 1)


def _embed_rational_or_real(x, bits: int) -> BoundedReal:
    if isinstance(x, BoundedReal):
        return x
    with mpmath.workprec(bits + 32):
        v = _mpf(Fraction(x))
        return BoundedReal(v, _round_err(v, bits), bits)


@dataclass
class CPrimeRow:
    """One discriminant of a Boecherer run. Ratios are already multiplied by |D|^(k-1)."""

    weight: int
    D: int
    skipped: bool
    c_prime: BoundedReal | None = None
    eta_over_B: BoundedReal | None = None
    eta_tilde_over_B: BoundedReal | None = None
    kappa: int = 1
    reason: str = ""

    def interval(self, kind: str = "eta") -> Interval | None:
        if self.skipped:
            return None
        beta = self.eta_over_B if kind == "eta" else self.eta_tilde_over_B
        if beta is None:
            raise ValueError(f"bound {kind} not computed")
        r = (self.kappa if kind == "eta_tilde" else 1) * (beta.value + beta.error)
        return Interval(self.c_prime.value - r - self.c_prime.error, self.c_prime.value + r + self.c_prime.error)


def c_prime_interval(
    z: BoundedReal,
    B,
    weight: int,
    D: int,
    eta: BoundedReal | None = None,
    etat: BoundedReal | None = None,
    kappa: int = 1,
) -> CPrimeRow:
    """c' = |D|^(k-1) Z~ / B with its interval data; B = 0 yields a skipped row."""
    B = _embed_rational_or_real(B, z.bits)
    if B.value == 0:
        return CPrimeRow(weight, D, True, reason="class sum vanishes")
    with mpmath.workprec(z.bits + 32):
        sc = discriminant_scale(weight, D) / B.value
        rel_b = B.error / abs(B.value)
        v = z.value * sc
        c = BoundedReal(+v, abs(sc) * z.error + abs(v) * rel_b, z.bits)

        def ratio(x):
            if x is None:
                return None
            r = x.value * abs(sc)
            return BoundedReal(+r, x.error * abs(sc) + r * rel_b, x.bits)

        return CPrimeRow(weight, D, False, c, ratio(eta), ratio(etat), kappa)


def intersect_rows(rows: Iterable[CPrimeRow], kind: str = "eta") -> tuple[bool, Interval | None]:
    ivs = [r.interval(kind) for r in rows if not r.skipped]
    return intersect_intervals(ivs)


@dataclass
class BoechererRun:
    weight: int
    embedding: int
    P: int
    N: int
    P2: int
    N2: int
    rows: list[CPrimeRow]

    def intersection(self, kind: str = "eta") -> tuple[bool, Interval | None]:
        return intersect_rows(self.rows, kind)

    def row(self, D: int) -> CPrimeRow:
        return next(r for r in self.rows if r.D == D)


def boecherer_run(
    f,
    P: int = 100,
    N: int = 200,
    P2: int = 50,
    N2: int = 100,
    discriminants: Iterable[int] | None = None,
    kappa: int | None = None,
    bits: int = MIN_BITS,
) -> BoechererRun:
    """c', eta / B and eta~ / B for an eigenform handle over the given fundamental discriminants."""
    from .hecke import T0, lambda_table

    f = f.normalized_at_T0()
    k = f.weight
    if discriminants is None:
        discriminants = fundamental_discriminants(-40)
    if kappa is None:
        kappa = 1
    exact = lambda_table(f, P, max(N, N2), spinor=True)
    lam = {n: f.embed(v if hasattr(v, "field") else f.field(v), bits) for n, v in exact.items()}
    lam_small = {nu: lam[nu] for nu in range(1, max(N, N2) // max(min(P, P2), 1) + 1) if nu in lam}
    rows = []
    for D in discriminants:
        class_total = 0
        for t in class_reps(D):
            class_total = class_total + f.coefficient(t) * Fraction(1, aut_order(t))
        B = f.embed(class_total * class_total, bits)
        z = z_truncated(lam, k, D, P, N, bits=bits)
        if B.value == 0:
            rows.append(CPrimeRow(k, D, True, reason="class sum vanishes"))
            continue
        eta = eta_bound(lam_small, k, D, N, P, bits=bits)
        z2 = z_truncated(lam, k, D, P2, N2, bits=bits)
        rows.append(c_prime_interval(z, B, k, D, eta, eta_tilde(z, z2), kappa))
    return BoechererRun(k, f.embedding, P, N, P2, N2, rows)


def _fmt(x: BoundedReal | None, digits: int) -> str:
    if x is None:
        return ""
    return mpmath.nstr(x.value, min(digits, x.digits()))


def table5_csv(rows: Iterable[CPrimeRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["weight", "D", "c_prime", "eta_over_B", "eta_tilde_over_B"])
    for r in rows:
        if r.skipped:
            w.writerow([r.weight, r.D, "skipped", "", ""])
            continue
        w.writerow([r.weight, r.D, _fmt(r.c_prime, 16), _fmt(r.eta_over_B, 5), _fmt(r.eta_tilde_over_B, 5)])
    return buf.getvalue()


def log_ratio(a: CPrimeRow, b: CPrimeRow):
    with mpmath.workprec(a.c_prime.bits + 32):
        return abs(mpmath.log(a.c_prime.value / b.c_prime.value))


def table6_csv(rows: Iterable[CPrimeRow], ref_D: int = -3) -> str:
    rows = list(rows)
    ref = next(r for r in rows if r.D == ref_D and not r.skipped)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["weight", "D", "abs_log_ratio"])
    for r in rows:
        if not r.skipped:
            w.writerow([r.weight, r.D, mpmath.nstr(log_ratio(r, ref), 6)])
    return buf.getvalue()
