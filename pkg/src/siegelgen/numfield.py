"""Number fields Q[x]/(m) and their real embeddings."""
from __future__ import annotations

import warnings
from fractions import Fraction
from typing import Iterable

import mpmath

from .exact import RatPoly
from .reals import BoundedReal


class NumberField:
    def __init__(self, modulus: RatPoly):
        if modulus.degree < 1:
            raise ValueError("defining polynomial must have positive degree")
        self.modulus = modulus.monic()

    @property
    def degree(self) -> int:
        return self.modulus.degree

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.modulus == other.modulus

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        return f"NumberField({self.modulus})"

    def __call__(self, value) -> "NFElem":
        if isinstance(value, NFElem):
            return value
        if isinstance(value, RatPoly):
            return NFElem(self, (value % self.modulus).coeffs)
        return NFElem(self, [value])

    def gen(self) -> "NFElem":
        return self(RatPoly.x())

    def zero(self) -> "NFElem":
        return NFElem(self, [])

    def one(self) -> "NFElem":
        return NFElem(self, [1])


class NFElem:
    """Element of Q[x]/(m); ``coords`` has length deg(m)."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Iterable):
        cs = [Fraction(c) for c in coords]
        n = field.degree
        if len(cs) > n:
            raise ValueError("too many coordinates")
        self.field = field
        self.coords = tuple(cs + [Fraction(0)] * (n - len(cs)))

    def poly(self) -> RatPoly:
        return RatPoly(self.coords)

    def _coerce(self, other) -> "NFElem":
        if isinstance(other, NFElem):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field(other)

    def __add__(self, other):
        o = self._coerce(other)
        return NFElem(self.field, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return NFElem(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElem(self.field, [a * other for a in self.coords])
        o = self._coerce(other)
        return self.field(self.poly() * o.poly())

    __rmul__ = __mul__

    def inverse(self) -> "NFElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid on (m, a)
        r0, r1 = self.field.modulus, self.poly()
        s0, s1 = RatPoly(), RatPoly([1])
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r0.degree != 0:
            raise ZeroDivisionError("element is a zero divisor; modulus not irreducible")
        return self.field(s0 * (1 / r0.lc()))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElem(self.field, [a / other for a in self.coords])
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coords[0]

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        return hash((self.field, self.coords))

    def __repr__(self):
        if self.field.degree == 1:
            return str(self.coords[0])
        return f"[{self.poly()}]"


# ---------------------------------------------------------------------------
# real root isolation


def _primitive(p: RatPoly) -> list[int]:
    return p.content_primitive()[1]


def _sign_at(ints: list[int], num: int, exp: int) -> int:
    """Sign of the integer polynomial at num / 2**exp."""
    n = len(ints) - 1
    acc = 0
    for i in range(n, -1, -1):
        acc = acc * num + (ints[i] << (exp * (n - i)))
    return (acc > 0) - (acc < 0)


def _sturm_chain(p: RatPoly) -> list[list[int]]:
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        r = chain[-2] % chain[-1]
        if r.is_zero():
            break
        # positive rescaling keeps the Sturm sign pattern
        c, prim = (-r).content_primitive()
        chain.append(RatPoly(prim) * (1 if c > 0 else -1))
    return [_primitive_signed(q) for q in chain]


def _primitive_signed(q: RatPoly) -> list[int]:
    c, prim = q.content_primitive()
    return prim if c > 0 else [-v for v in prim]


def _sign_changes(chain: list[list[int]], num: int, exp: int) -> int:
    signs = [s for s in (_sign_at(q, num, exp) for q in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def real_roots(p: RatPoly, bits: int) -> list[tuple[Fraction, Fraction]]:
    """Disjoint enclosures [lo, hi] of width <= 2**-bits, one per real root of squarefree p."""
    if p.degree < 1:
        return []
    if p.gcd(p.derivative()).degree > 0:
        raise ValueError("polynomial must be squarefree")
    chain = _sturm_chain(p)
    ints = chain[0]
    bound = 1 + max(abs(Fraction(c) / p.lc()) for c in p.coeffs[:-1]) if p.degree else 1
    e0 = max(1, int(bound).bit_length() + 1)
    # work on dyadic grid num/2**exp; start with [-2**e0, 2**e0]
    exp = 0
    stack = [(-(1 << e0), 1 << e0, exp)]
    isolated = []
    while stack:
        lo, hi, ex = stack.pop()
        cnt = _sign_changes(chain, lo, ex) - _sign_changes(chain, hi, ex)
        if cnt == 0:
            continue
        if cnt == 1:
            isolated.append((lo, hi, ex))
            continue
        lo2, hi2, ex2 = lo * 2, hi * 2, ex + 1
        mid = (lo2 + hi2) // 2
        stack.append((lo2, mid, ex2))
        stack.append((mid, hi2, ex2))
    out = []
    for lo, hi, ex in isolated:
        shi = _sign_at(ints, hi, ex)
        if shi == 0:
            out.append((Fraction(hi, 1 << ex), Fraction(hi, 1 << ex)))
            continue
        # exactly one simple root in (lo, hi]: sign(mid) == sign(hi) puts it left of mid
        while (hi - lo) << bits > (1 << ex):
            lo, hi, ex = lo * 2, hi * 2, ex + 1
            mid = (lo + hi) // 2
            sm = _sign_at(ints, mid, ex)
            if sm == 0:
                lo = hi = mid
                break
            if sm == shi:
                hi = mid
            else:
                lo = mid
        out.append((Fraction(lo, 1 << ex), Fraction(hi, 1 << ex)))
    out.sort()
    return out


def count_real_roots(p: RatPoly) -> int:
    chain = _sturm_chain(p)
    # signs at -inf / +inf from leading coefficients and degrees
    def at_inf(sign):
        s = []
        for q in chain:
            deg = len(q) - 1
            v = q[-1] * (sign**deg)
            s.append(1 if v > 0 else -1)
        return sum(1 for a, b in zip(s, s[1:]) if a != b)

    return at_inf(-1) - at_inf(1)


def nf_real_embeddings(e: NFElem, bits: int) -> list[BoundedReal]:
    """Images of ``e`` under the real embeddings of its field, ordered by root."""
    m = e.field.modulus
    nreal = count_real_roots(m)
    if nreal < m.degree:
        warnings.warn(
            f"defining polynomial has {m.degree - nreal} non-real roots; those embeddings are omitted",
            stacklevel=2,
        )
    roots = real_roots(m, bits + 8)
    out = []
    poly = e.poly()
    deriv = poly.derivative()
    with mpmath.workprec(bits + 32):
        for lo, hi in roots:
            mid = (lo + hi) / 2
            val = mpmath.mpf(poly(mid).numerator) / poly(mid).denominator
            r = max(abs(lo), abs(hi))
            lip = sum(abs(c) * r**i for i, c in enumerate(deriv.coeffs))
            err = mpmath.mpf((lip * (hi - lo) / 2).numerator) / (lip * (hi - lo) / 2).denominator
            err += mpmath.ldexp(abs(val) + 1, -(bits + 24))
            out.append(BoundedReal(val, err, bits))
    return out


def real_root_values(m: RatPoly, bits: int) -> list[mpmath.mpf]:
    with mpmath.workprec(bits + 32):
        return [mpmath.mpf((lo + hi).numerator) / (2 * (lo + hi).denominator) for lo, hi in real_roots(m, bits + 8)]
