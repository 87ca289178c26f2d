"""Exact arithmetic substrate: rationals, polynomials over Q, matrices, number fields."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import gmpy2

from . import modp

# Fraction already keeps gcd(num, den) = 1 and den > 0.
Rational = Fraction


# ---------------------------------------------------------------------------
# number-theoretic primitives


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # Akiyama-Tanigawa gives B_1 = +1/2; flipped below
    out = []
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return tuple(out)


def bernoulli(n: int) -> Fraction:
    """n-th Bernoulli number with B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 1:
        return Fraction(-1, 2)
    if n > 2 and n % 2:
        return Fraction(0)
    size = max(64, 1 << (n.bit_length()))
    return _bernoulli_table(size)[n]


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n)."""
    return int(gmpy2.kronecker(d, n))


def divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def sigma(n: int, k: int) -> int:
    return sum(d**k for d in divisors(n))


def factorint(n: int) -> dict[int, int]:
    """Prime factorization of a nonzero integer (trial division + Pollard rho)."""
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if gmpy2.is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend([d, m // d])
    return dict(sorted(out.items()))


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1


def moebius(n: int) -> int:
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def fundamental_discriminant(d: int) -> tuple[int, int]:
    """Write a discriminant d (d = 0,1 mod 4, d != 0) as d0 * f**2 with d0 fundamental."""
    if d % 4 not in (0, 1) or d == 0:
        raise ValueError(f"{d} is not a nonzero discriminant")
    sign = -1 if d < 0 else 1
    core, f = 1, 1
    for p, e in factorint(d).items():
        core *= p ** (e % 2)
        f *= p ** (e // 2)
    d0 = sign * core
    if d0 % 4 != 1:
        d0 *= 4
        f //= 2
    return d0, f


def is_fundamental(d: int) -> bool:
    if d % 4 not in (0, 1) or d in (0, 1):
        return False
    return fundamental_discriminant(d)[1] == 1


# ---------------------------------------------------------------------------
# polynomials over Q


class RatPoly:
    """Univariate polynomial over Q, coefficients stored low to high."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "RatPoly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "RatPoly":
        out = cls([1])
        for r in roots:
            out = out * cls([-Fraction(r), 1])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatPoly):
            other = RatPoly([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RatPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(terms).replace("+ -", "- ")

    def __neg__(self):
        return RatPoly([-c for c in self.coeffs])

    def __add__(self, other):
        if not isinstance(other, RatPoly):
            other = RatPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, RatPoly):
            other = RatPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return RatPoly([other]) - self

    def __mul__(self, other):
        if not isinstance(other, RatPoly):
            c = Fraction(other)
            return RatPoly([c * a for a in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = RatPoly([1])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv = 1 / other.lc()
        quo = [Fraction(0)] * max(0, len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] * inv
            if c:
                quo[i - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return RatPoly(quo), RatPoly(rem[:dq])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "RatPoly") -> "RatPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self) -> "RatPoly":
        return self * (1 / self.lc()) if self.coeffs else self

    def derivative(self) -> "RatPoly":
        return RatPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_linear(self, scale, shift=0) -> "RatPoly":
        """p(scale*x + shift)."""
        lin = RatPoly([shift, scale])
        out = RatPoly()
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def gcd(self, other: "RatPoly") -> "RatPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def content_primitive(self) -> tuple[Fraction, list[int]]:
        """Return (c, prim) with self = c * prim, prim integral, primitive, positive lc."""
        if not self.coeffs:
            return Fraction(0), []
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), [v // g for v in ints]


# ---------------------------------------------------------------------------
# matrices over Q


def _clear_denominators(mat: Sequence[Sequence]) -> tuple[list[list[int]], int]:
    den = 1
    for row in mat:
        for x in row:
            d = Fraction(x).denominator
            den = den * d // math.gcd(den, d)
    return [[int(Fraction(x) * den) for x in row] for row in mat], den


def charpoly_berkowitz(mat: Sequence[Sequence]) -> RatPoly:
    """Division-free characteristic polynomial (Berkowitz); the exact oracle path."""
    a, den = _clear_denominators(mat)
    n = len(a)
    if n == 0:
        return RatPoly([1])
    # vector of coefficients high -> low of det(x I - A)
    v = [1, -a[0][0]]
    for r in range(1, n):
        # A_r = leading (r+1)x(r+1) block; split into [[M, C],[R, a_rr]]
        rvec = a[r][:r]
        cvec = [a[i][r] for i in range(r)]
        sub = [row[:r] for row in a[:r]]
        # Toeplitz column: 1, -a_rr, -R C, -R M C, -R M^2 C, ...
        col = [1, -a[r][r]]
        w = cvec
        for _ in range(r):
            col.append(-sum(x * y for x, y in zip(rvec, w)))
            w = [sum(sub[i][j] * w[j] for j in range(r)) for i in range(r)]
        # multiply lower-triangular Toeplitz (size (r+2)x(r+1)) by v
        newv = []
        for i in range(r + 2):
            s = 0
            for j in range(min(i + 1, len(v))):
                s += col[i - j] * v[j]
            newv.append(s)
        v = newv
    # v: high->low for A = den * M ; charpoly_M(x) = den^{-n} charpoly_A(den x)
    coeffs = [Fraction(c, den ** (i)) for i, c in enumerate(v)]
    return RatPoly(coeffs[::-1])


def _poly_bound_bits(a: list[list[int]]) -> int:
    """Bits bounding every charpoly coefficient of the integer matrix ``a``."""
    n = len(a)
    bits = n  # binomial factor 2**n
    for row in a:
        norm2 = sum(x * x for x in row)
        bits += max(1, (gmpy2.isqrt(norm2) + 1).bit_length())
    return bits + 1


def charpoly_from_residues(residue_fn, n: int, bound_bits: int) -> list[int]:
    """CRT-combine monic integer charpolys from ``residue_fn(p) -> coeffs mod p``."""
    primes = modp.large_primes(bound_bits // 60 + 4)
    acc, mod = None, 1
    for p in primes:
        res = residue_fn(p)
        if res is None:
            continue
        if acc is None:
            acc, mod = list(res), p
        else:
            acc = [modp.crt_pair(r1, mod, r2, p)[0] for r1, r2 in zip(acc, res)]
            mod *= p
        if mod.bit_length() > bound_bits + 1:
            return [modp.symmetric(c, mod) for c in acc]
    raise ArithmeticError("not enough good primes for multimodular reconstruction")


def charpoly(mat: Sequence[Sequence], bound_bits: int | None = None) -> RatPoly:
    """Monic characteristic polynomial, multimodular with a Hadamard-type bound.

    ``bound_bits`` may override the coefficient bound when a sharper a-priori
    bound (for the cleared integer matrix) is known.
    """
    a, den = _clear_denominators(mat)
    n = len(a)
    if n == 0:
        return RatPoly([1])
    bits = bound_bits if bound_bits is not None else _poly_bound_bits(a)
    coeffs = charpoly_from_residues(lambda p: modp.hessenberg_charpoly(a, p), n, bits)
    # charpoly_M(x) = den^{-n} charpoly_A(den x)
    return RatPoly([Fraction(c * den**i, den**n) for i, c in enumerate(coeffs)])


def mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def solve_rational(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    """Solve A X = B exactly (A square, invertible) by fraction-free elimination."""
    ai, da = _clear_denominators(a)
    bi, db = _clear_denominators(b)
    n = len(ai)
    m = len(bi[0]) if bi else 0
    aug = [ai[i] + bi[i] for i in range(n)]
    prev = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if aug[r][k]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[k], aug[piv] = aug[piv], aug[k]
        pk = aug[k]
        for i in range(k + 1, n):
            ri = aug[i]
            f = ri[k]
            for j in range(k + 1, n + m):
                ri[j] = (pk[k] * ri[j] - f * pk[j]) // prev
            ri[k] = 0
        prev = pk[k]
    x = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n - 1, -1, -1):
        for j in range(m):
            s = Fraction(aug[i][n + j])
            for t in range(i + 1, n):
                s -= aug[i][t] * x[t][j]
            x[i][j] = s / aug[i][i]
    scale = Fraction(da, db)
    return [[v * scale for v in row] for row in x]


def rank_rational(mat: Sequence[Sequence]) -> int:
    """Exact rank by Bareiss elimination (fraction-free)."""
    a, _ = _clear_denominators(mat)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    r, prev = 0, 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        for i in range(r + 1, rows):
            ri = a[i]
            f = ri[c]
            for j in range(c + 1, cols):
                ri[j] = (pr[c] * ri[j] - f * pr[j]) // prev
            ri[c] = 0
        prev = pr[c]
        r += 1
        if r == rows:
            break
    return r


def nullspace_rational(mat: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of {v : M v = 0} via reduced row echelon form over Q."""
    a = [[Fraction(x) for x in row] for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * cols
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fcol]
        basis.append(v)
    return basis
