"""Factorization of univariate polynomials over Q (Zassenhaus).

Factor modulo a good prime (distinct-degree + Cantor-Zassenhaus), Hensel lift
the modular factors past a Mignotte-type bound, recombine by subset trial
division.  Integer polynomials are lists of ints, low degree first.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import gmpy2

from .exact import RatPoly

# ---------------------------------------------------------------------------
# arithmetic in F_p[x]


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _mod(a, p):
    return _trim([x % p for x in a])


def _mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _mod(out, p)


def _sub(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _add(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _divmod(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        if c:
            q[i - db] = c
            for j, y in enumerate(b):
                a[i - db + j] = (a[i - db + j] - c * y) % p
    return _trim(q), _trim(a[:db])


def _monic(a, p):
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def _gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _divmod(a, b, p)[1]
    return _monic(a, p) if a else a


def _xgcd(a, b, p):
    """(g, s, t) with s a + t b = g monic."""
    r0, r1 = _trim(list(a)), _trim(list(b))
    s0, s1, t0, t1 = [1], [], [], [1]
    while r1:
        q, r = _divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _sub(s0, _mul(q, s1, p), p)
        t0, t1 = t1, _sub(t0, _mul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return [x * inv % p for x in r0], [x * inv % p for x in s0], [x * inv % p for x in t0]


def _powmod(base, e, mod, p):
    out = [1]
    base = _divmod(base, mod, p)[1]
    while e:
        if e & 1:
            out = _divmod(_mul(out, base, p), mod, p)[1]
        base = _divmod(_mul(base, base, p), mod, p)[1]
        e >>= 1
    return out


def _deriv(a, p):
    return _trim([(i * x) % p for i, x in enumerate(a)][1:])


def _distinct_degree(f, p):
    out = []
    h = [0, 1]
    d = 0
    f = list(f)
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = _powmod(h, p, f, p)
        g = _gcd(f, _sub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, d))
            f = _divmod(f, g, p)[0]
            h = _divmod(h, f, p)[1]
    if len(f) > 1:
        out.append((_monic(f, p), len(f) - 1))
    return out


def _equal_degree(f, d, p, rng):
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        a = _trim(a)
        if len(a) < 2:
            continue
        b = _sub(_powmod(a, (p**d - 1) // 2, f, p), [1], p)
        g = _gcd(f, b, p)
        if 1 < len(g) < len(f):
            return _equal_degree(g, d, p, rng) + _equal_degree(_divmod(f, g, p)[0], d, p, rng)


def factor_mod_p(f: list[int], p: int, seed: int = 0) -> list[list[int]]:
    """Monic irreducible factors of a squarefree f over F_p (p odd)."""
    rng = random.Random(seed)
    f = _monic(_mod(f, p), p)
    out = []
    for g, d in _distinct_degree(f, p):
        out.extend(_equal_degree(g, d, p, rng))
    return out


# ---------------------------------------------------------------------------
# Hensel lifting over Z


def _zmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _zsub(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _hensel_pair(f, g, h, p, k):
    """Lift f = g*h mod p (g monic) to a factorization modulo p**k."""
    _, s, t = _xgcd(g, h, p)
    mod = p
    for _ in range(1, k):
        e = _zsub(f, _zmul(g, h))
        e = [x // mod for x in e]
        e = _mod(e, p)
        q, dg = _divmod(_mul(t, e, p), g, p)
        dh = _add(_mul(s, e, p), _mul(q, h, p), p)
        g = _zsub(g, [0]) if not dg else [x + mod * (dg[i] if i < len(dg) else 0) for i, x in enumerate(g)]
        h = [x + mod * (dh[i] if i < len(dh) else 0) for i, x in enumerate(h)] + [mod * y for y in dh[len(h):]]
        mod *= p
        g = [x % mod for x in g]
        h = [x % mod for x in h]
    return g, h


def _hensel_multi(f, factors, p, k):
    """Lift monic modular factors of f (lc(f) absorbed in the last cofactor)."""
    if len(factors) == 1:
        mod = p**k
        inv = pow(f[-1], -1, mod)
        return [[x * inv % mod for x in f]]
    half = len(factors) // 2
    left, right = factors[:half], factors[half:]
    g = [1]
    for u in left:
        g = _mul(g, u, p)
    h = [f[-1] % p]
    for u in right:
        h = _mul(h, u, p)
    g_l, h_l = _hensel_pair(f, g, h, p, k)
    return _hensel_multi(g_l, left, p, k) + _hensel_multi(h_l, right, p, k)


def _symmetric_poly(a, mod):
    return [x - mod if x > mod // 2 else x for x in (y % mod for y in a)]


def _zdivexact(a, b):
    """Exact division in Z[x]; None if not exact."""
    a = list(a)
    db = len(b) - 1
    lc = b[-1]
    q = [0] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        if a[i] % lc:
            return None
        c = a[i] // lc
        q[i - db] = c
        if c:
            for j, y in enumerate(b):
                a[i - db + j] -= c * y
    if any(a[:db]):
        return None
    return q


def _primitive_int(a):
    g = 0
    for x in a:
        g = math.gcd(g, x)
    a = [x // g for x in a]
    return [-x for x in a] if a[-1] < 0 else a


def _squarefree_mod_p(f, p):
    fp = _mod(f, p)
    if len(fp) != len(f):
        return False
    return len(_gcd(fp, _deriv(fp, p), p)) == 1


def factor_squarefree_integer(f: list[int]) -> list[list[int]]:
    """Irreducible factors over Z of a primitive squarefree f with positive lc."""
    n = len(f) - 1
    if n <= 1:
        return [f]
    # choose among a few good primes the one with fewest modular factors
    best = None
    p = 2
    tried = 0
    while tried < 6 or best is None:
        p = int(gmpy2.next_prime(p))
        if p == 2 or f[-1] % p == 0 or not _squarefree_mod_p(f, p):
            continue
        facs = factor_mod_p(f, p)
        tried += 1
        if best is None or len(facs) < len(best[1]):
            best = (p, facs)
        if len(facs) == 1:
            return [f]
    p, facs = best
    norm = gmpy2.isqrt(sum(x * x for x in f)) + 1
    bound = 2 * abs(f[-1]) * (1 << n) * int(norm)
    k = 1
    while p**k <= bound:
        k += 1
    mod = p**k
    lifted = _hensel_multi(f, facs, p, k)
    out = []
    remaining = list(range(len(lifted)))
    cur = list(f)
    s = 1
    while 2 * s <= len(remaining):
        found = False
        for subset in combinations(remaining, s):
            g = [cur[-1] % mod]
            for i in subset:
                g = [x % mod for x in _zmul(g, lifted[i])]
            g = _primitive_int(_symmetric_poly(g, mod))
            q = _zdivexact(cur, g)
            if q is not None:
                out.append(g)
                cur = q
                remaining = [i for i in remaining if i not in subset]
                found = True
                break
        if not found:
            s += 1
    out.append(_primitive_int(cur))
    return out


# ---------------------------------------------------------------------------
# public API


@dataclass
class Factorization:
    unit: Fraction
    factors: list[tuple[RatPoly, int]] = field(default_factory=list)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def expand(self) -> RatPoly:
        out = RatPoly([self.unit])
        for g, e in self.factors:
            out = out * g**e
        return out


def squarefree_decomposition(p: RatPoly) -> list[tuple[RatPoly, int]]:
    """Yun's algorithm over Q: p = lc * prod a_i**i with a_i monic squarefree coprime."""
    f = p.monic()
    out = []
    d = f.derivative()
    a0 = f.gcd(d)
    b = f.exact_div(a0)
    c = d.exact_div(a0) if not d.is_zero() else RatPoly()
    dd = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = b.gcd(dd)
        b = b.exact_div(a)
        c = dd.exact_div(a)
        dd = c - b.derivative()
        if a.degree > 0:
            out.append((a, i))
        i += 1
    return out


def factor_over_Q(p: RatPoly) -> Factorization:
    """Factor p into a rational unit times monic irreducibles with multiplicities."""
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    result = Factorization(p.lc())
    if p.degree == 0:
        return result
    for part, mult in squarefree_decomposition(p):
        _, prim = part.content_primitive()
        for g in factor_squarefree_integer(prim):
            result.factors.append((RatPoly(g).monic(), mult))
    result.factors.sort(key=lambda fe: (fe[0].degree, [str(c) for c in fe[0].coeffs]))
    return result


def is_irreducible(p: RatPoly) -> bool:
    f = factor_over_Q(p)
    return len(f.factors) == 1 and f.factors[0][1] == 1
