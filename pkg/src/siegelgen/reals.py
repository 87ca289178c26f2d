"""Arbitrary-precision reals with an explicit error radius, and closed intervals."""
from __future__ import annotations

from dataclasses import dataclass

import mpmath

MIN_BITS = 128


@dataclass(frozen=True)
class BoundedReal:
    """``value`` with |true - value| <= ``error``, computed at ``bits`` of precision."""

    value: mpmath.mpf
    error: mpmath.mpf
    bits: int

    def interval(self) -> "Interval":
        return Interval(self.value - self.error, self.value + self.error)

    def __float__(self):
        return float(self.value)

    def digits(self) -> int:
        """Decimal digits that may be published: precision minus 20 bits."""
        return max(1, int((self.bits - 20) * 0.30103))

    def __str__(self):
        return mpmath.nstr(self.value, min(self.digits(), 20))


@dataclass(frozen=True)
class Interval:
    lo: mpmath.mpf
    hi: mpmath.mpf

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval with lo > hi")

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    @property
    def radius(self):
        return (self.hi - self.lo) / 2

    @property
    def mid(self):
        return (self.hi + self.lo) / 2


def intersect_intervals(intervals: list[Interval]) -> tuple[bool, Interval | None]:
    if not intervals:
        raise ValueError("need at least one interval")
    lo = max(iv.lo for iv in intervals)
    hi = min(iv.hi for iv in intervals)
    if lo <= hi:
        return True, Interval(lo, hi)
    return False, None
