"""Linear algebra over prime fields, used as the fast path for exact results.

Two flavours live here: pure-Python routines on lists of ints (any prime size,
used for multimodular reconstruction with 62-bit primes) and numpy int64
routines for primes below 2**21, where a dot product of length up to 2**21
cannot overflow.
"""
from __future__ import annotations

from functools import lru_cache

import gmpy2
import numpy as np

# numpy kernels need p < 2**21 so that sums of products stay below 2**63
SMALL_PRIME_BOUND = 1 << 21


@lru_cache(maxsize=None)
def primes_below(bound: int, count: int) -> tuple[int, ...]:
    """The ``count`` largest primes strictly below ``bound``."""
    out = []
    p = bound
    while len(out) < count:
        p -= 1
        while not gmpy2.is_prime(p):
            p -= 1
        out.append(p)
    return tuple(out)


def large_primes(count: int) -> tuple[int, ...]:
    return primes_below(1 << 62, count)


def small_primes(count: int) -> tuple[int, ...]:
    return primes_below(SMALL_PRIME_BOUND, count)


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    inv = pow(m1, -1, m2)
    t = ((r2 - r1) * inv) % m2
    return r1 + m1 * t, m1 * m2


def symmetric(r: int, m: int) -> int:
    r %= m
    return r - m if r > m // 2 else r


def rational_reconstruct(r: int, m: int) -> tuple[int, int] | None:
    """Find n/d with n = r*d mod m and |n|, d <= sqrt(m/2); None if absent."""
    r %= m
    bound = gmpy2.isqrt(m // 2)
    r0, r1 = m, r
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        s1, r1 = -s1, -r1
    return int(r1), int(s1)


# ---------------------------------------------------------------------------
# list-of-ints routines (arbitrary p)


def hessenberg_charpoly(mat: list[list[int]], p: int) -> list[int]:
    """Characteristic polynomial of ``mat`` over F_p, coefficients low->high, monic."""
    n = len(mat)
    h = [[x % p for x in row] for row in mat]
    # reduce to upper Hessenberg form by similarity transforms
    for m in range(1, n - 1):
        piv = None
        for i in range(m, n):
            if h[i][m - 1]:
                piv = i
                break
        if piv is None:
            continue
        if piv != m:
            h[piv], h[m] = h[m], h[piv]
            for row in h:
                row[piv], row[m] = row[m], row[piv]
        inv = pow(h[m][m - 1], -1, p)
        for i in range(m + 1, n):
            u = h[i][m - 1] * inv % p
            if not u:
                continue
            hi, hm = h[i], h[m]
            for j in range(n):
                hi[j] = (hi[j] - u * hm[j]) % p
            for row in h:
                row[m] = (row[m] + u * row[i]) % p
    # recurrence on leading principal submatrices
    polys = [[1]]
    for m in range(1, n + 1):
        # p_m = (x - h[m-1][m-1]) p_{m-1} - sum_{i} h[i-1][m-1] * prod(sub) * p_{i-1}
        prev = polys[-1]
        cur = [0] + prev
        a = h[m - 1][m - 1]
        for j, c in enumerate(prev):
            cur[j] = (cur[j] - a * c) % p
        t = 1
        for i in range(m - 1, 0, -1):
            t = t * h[i][i - 1] % p
            if not t:
                break
            coef = t * h[i - 1][m - 1] % p
            if coef:
                for j, c in enumerate(polys[i - 1]):
                    cur[j] = (cur[j] - coef * c) % p
        polys.append(cur)
    return polys[n]


def solve_left_mod(a: list[list[int]], b: list[list[int]], p: int) -> list[list[int]] | None:
    """Return X with A X = B over F_p, or None if A is singular mod p."""
    n = len(a)
    m = len(b[0]) if b else 0
    aug = [[x % p for x in a[i]] + [y % p for y in b[i]] for i in range(n)]
    for c in range(n):
        piv = None
        for r in range(c, n):
            if aug[r][c]:
                piv = r
                break
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        row = aug[c]
        inv = pow(row[c], -1, p)
        for j in range(c, n + m):
            row[j] = row[j] * inv % p
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                tgt = aug[r]
                for j in range(c, n + m):
                    tgt[j] = (tgt[j] - f * row[j]) % p
    return [row[n:] for row in aug]


# ---------------------------------------------------------------------------
# numpy routines (p < 2**21)


def as_modp_array(rows, p: int) -> np.ndarray:
    return np.array([[int(x) % p for x in row] for row in rows], dtype=np.int64).reshape(len(rows), -1)


def rank_mod(a: np.ndarray, p: int) -> int:
    return len(pivot_columns(a, p))


def pivot_columns(a: np.ndarray, p: int) -> list[int]:
    """Columns of the reduced row echelon form of ``a`` over F_p, left to right."""
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return pivots


class IncrementalRank:
    """Row space over F_p grown one vector at a time.

    ``add`` reports whether the vector increased the rank.  Vectors are kept
    in echelon form keyed by pivot column.
    """

    def __init__(self, ncols: int, p: int):
        self.p = p
        self.ncols = ncols
        self.basis: dict[int, np.ndarray] = {}

    @property
    def rank(self) -> int:
        return len(self.basis)

    def reduce(self, v) -> np.ndarray:
        p = self.p
        v = np.array(v, dtype=np.int64) % p
        for c in sorted(self.basis):
            if v[c]:
                v = (v - v[c] * self.basis[c]) % p
        return v

    def add(self, v) -> bool:
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = (v * pow(int(v[c]), -1, self.p)) % self.p
        # keep the stored rows fully reduced on the new pivot column
        for k, row in self.basis.items():
            if row[c]:
                self.basis[k] = (row - row[c] * v) % self.p
        self.basis[c] = v
        return True
