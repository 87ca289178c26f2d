"""Positive semidefinite binary quadratic forms a x^2 + b xy + c y^2.

A form stands for the half-integral matrix T = [[a, b/2], [b/2, c]].  The
integer 4 det T = 4ac - b^2 is used as the discriminant key throughout.
"""
from __future__ import annotations

import math
from collections import Counter
from typing import NamedTuple

import numpy as np

Matrix2 = tuple[tuple[int, int], tuple[int, int]]
IDENTITY: Matrix2 = ((1, 0), (0, 1))


class BQF(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def det4(self) -> int:
        return 4 * self.a * self.c - self.b * self.b

    @property
    def content(self) -> int:
        return math.gcd(math.gcd(self.a, self.b), self.c)

    def is_psd(self) -> bool:
        return self.a >= 0 and self.c >= 0 and self.det4 >= 0

    def is_definite(self) -> bool:
        return self.a > 0 and self.det4 > 0

    def is_reduced(self) -> bool:
        return 0 <= self.b <= self.a <= self.c

    def transform(self, u: Matrix2) -> "BQF":
        """The form of U^t T U, i.e. (x, y) -> U (x, y)."""
        (p, q), (r, s) = u
        a, b, c = self
        return BQF(
            a * p * p + b * p * r + c * r * r,
            2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
            a * q * q + b * q * s + c * s * s,
        )

    def __add__(self, other):
        return BQF(self.a + other[0], self.b + other[1], self.c + other[2])

    def __sub__(self, other):
        return BQF(self.a - other[0], self.b - other[1], self.c - other[2])

    def scale(self, n: int) -> "BQF":
        return BQF(n * self.a, n * self.b, n * self.c)


def _mul(u: Matrix2, v: Matrix2) -> Matrix2:
    return (
        (u[0][0] * v[0][0] + u[0][1] * v[1][0], u[0][0] * v[0][1] + u[0][1] * v[1][1]),
        (u[1][0] * v[0][0] + u[1][1] * v[1][0], u[1][0] * v[0][1] + u[1][1] * v[1][1]),
    )


def reduce(t) -> tuple[BQF, Matrix2]:
    """GL2(Z)-reduced form with witness U: reduce(t) = (t.transform(U), U)."""
    t = BQF(*t)
    if not t.is_psd():
        raise ValueError(f"form {tuple(t)} is not positive semidefinite")
    u = IDENTITY
    a, b, c = t
    while True:
        if a == 0:
            # rank <= 1 and b = 0 forced by b^2 <= 4ac
            break
        if c < a:
            a, b, c = c, -b, a
            u = _mul(u, ((0, -1), (1, 0)))
            continue
        # translate b into (-a, a]
        n = -((b + a - 1) // (2 * a)) if b > a or b <= -a else 0
        if n:
            a, b, c = a, b + 2 * a * n, a * n * n + b * n + c
            u = _mul(u, ((1, n), (0, 1)))
            continue
        if c < a:
            continue
        break
    if a == 0:
        out = BQF(0, 0, c)
    else:
        if b < 0:
            b = -b
            u = _mul(u, ((1, 0), (0, -1)))
        out = BQF(a, b, c)
    assert t.transform(u) == out, (t, u, out)
    return out, u


def reduced(t) -> BQF:
    return reduce(t)[0]


def class_reps(D: int) -> list[BQF]:
    """SL2(Z)-reduced positive definite forms with b^2 - 4ac = D."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("discriminant must be negative and 0 or 1 mod 4")
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            out.append(BQF(a, b, c))
        a += 1
    return out


def aut_order(t) -> int:
    """Order of the SL2(Z) stabilizer of a positive definite form."""
    t = BQF(*t)
    if not t.is_definite():
        raise ValueError("automorphism order is only defined for definite forms")
    a, b, c = reduced(t)
    if a == b == c:
        return 6
    if b == 0 and a == c:
        return 4
    return 2


def sl2_multiplicity(t: BQF) -> int:
    """Number of SL2 classes inside the GL2 class of a reduced definite form."""
    a, b, c = t
    return 1 if (b == 0 or b == a or a == c) else 2


def gl2_reps(det4: int) -> list[BQF]:
    """All GL2-reduced definite forms (any content) with 4ac - b^2 = det4."""
    out = []
    a = 1
    while 3 * a * a <= det4:
        for b in range(0, a + 1):
            num = det4 + b * b
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c >= a:
                out.append(BQF(a, b, c))
        a += 1
    return out


def reduced_forms_upto(xmax: int, singular: int = 0) -> list[BQF]:
    """Reduced forms with 0 < 4 det <= xmax, sorted by (4 det, a, b), preceded by [0,0,n] for n < singular."""
    out = [BQF(0, 0, n) for n in range(singular)]
    definite = []
    for d in range(3, xmax + 1):
        if d % 4 in (0, 3):
            definite.extend(gl2_reps(d))
    definite.sort(key=lambda t: (t.det4, t.a, t.b))
    return out + definite


# ---------------------------------------------------------------------------
# decompositions t = t1 + t2 into PSD parts

VKey = tuple[int, int, int, int]


def _decomposition_arrays(t: BQF):
    """Arrays (a1, b1, c1) over all PSD t1 with t - t1 PSD."""
    a, b, c = t
    a1s, b1s, c1s = [], [], []
    c1 = np.arange(c + 1, dtype=np.int64)
    for a1 in range(a + 1):
        s1 = np.floor(np.sqrt(4.0 * a1 * c1)).astype(np.int64)
        s2 = np.floor(np.sqrt(4.0 * (a - a1) * (c - c1))).astype(np.int64)
        # exact integer square roots (float sqrt may be off by one)
        s1 -= (s1 * s1 > 4 * a1 * c1)
        s1 += ((s1 + 1) ** 2 <= 4 * a1 * c1)
        p2 = 4 * (a - a1) * (c - c1)
        s2 -= (s2 * s2 > p2)
        s2 += ((s2 + 1) ** 2 <= p2)
        lo = np.maximum(-s1, b - s2)
        hi = np.minimum(s1, b + s2)
        cnt = np.maximum(hi - lo + 1, 0)
        total = int(cnt.sum())
        if not total:
            continue
        cc = np.repeat(c1, cnt)
        start = np.repeat(lo, cnt)
        offs = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        a1s.append(np.full(total, a1, dtype=np.int64))
        b1s.append(start + offs)
        c1s.append(cc)
    if not a1s:
        return (np.zeros(0, dtype=np.int64),) * 3
    return np.concatenate(a1s), np.concatenate(b1s), np.concatenate(c1s)


def decomposition_keys(t) -> tuple[np.ndarray, ...]:
    """Per-decomposition arrays (content1, det4_1, content2, det4_2)."""
    t = BQF(*t)
    a1, b1, c1 = _decomposition_arrays(t)
    a2, b2, c2 = t.a - a1, t.b - b1, t.c - c1
    e1 = np.gcd(np.gcd(a1, np.abs(b1)), c1)
    e2 = np.gcd(np.gcd(a2, np.abs(b2)), c2)
    d1 = 4 * a1 * c1 - b1 * b1
    d2 = 4 * a2 * c2 - b2 * b2
    return e1, d1, e2, d2


def decomposition_table(t) -> tuple[np.ndarray, ...]:
    """Distinct buckets (content1, det4_1, content2, det4_2) with their counts, as arrays."""
    t = BQF(*t)
    e1, d1, e2, d2 = decomposition_keys(t)
    if not len(e1):
        return (np.zeros(0, dtype=np.int64),) * 5
    eb = max(t.a, abs(t.b), t.c) + 1
    db = t.det4 + 1
    key = ((e1 * db + d1) * eb + e2) * db + d2
    keys, counts = np.unique(key, return_counts=True)
    d2u = keys % db
    rest = keys // db
    e2u = rest % eb
    rest //= eb
    return rest // db, rest % db, e2u, d2u, counts


def decompositions(t) -> Counter:
    """VTable: counts of decompositions bucketed by (content1, det4_1, content2, det4_2)."""
    cols = decomposition_table(t)
    return Counter({tuple(int(x) for x in row[:4]): int(row[4]) for row in zip(*cols)})


def naive_decompositions(t) -> Counter:
    """Triple-loop reference enumeration (test oracle)."""
    t = BQF(*t)
    out = Counter()
    bound = 2 * max(t.a, t.c) + abs(t.b)
    for a1 in range(t.a + 1):
        for c1 in range(t.c + 1):
            for b1 in range(-bound, bound + 1):
                t1 = BQF(a1, b1, c1)
                t2 = t - t1
                if t1.is_psd() and t2.is_psd():
                    out[(t1.content, t1.det4, t2.content, t2.det4)] += 1
    return out
