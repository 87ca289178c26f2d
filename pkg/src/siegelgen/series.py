"""Truncated products of integer sequences.

Long products use Kronecker substitution: both sequences are packed into one
big integer with fixed-width signed slots and multiplied once by GMP.
"""
from __future__ import annotations

import gmpy2

_NAIVE_CUTOFF = 48


def _naive(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def _pack(a: list[int], width: int) -> gmpy2.mpz:
    nbytes = width // 8
    pos = b"".join(int(x).to_bytes(nbytes, "little") if x > 0 else bytes(nbytes) for x in a)
    neg = b"".join(int(-x).to_bytes(nbytes, "little") if x < 0 else bytes(nbytes) for x in a)
    return gmpy2.mpz(int.from_bytes(pos, "little")) - gmpy2.mpz(int.from_bytes(neg, "little"))


def mul_trunc(a: list[int], b: list[int], n: int) -> list[int]:
    """First ``n`` coefficients of the product of two integer power series."""
    a = a[:n]
    b = b[:n]
    if not a or not b:
        return [0] * n
    if min(len(a), len(b)) <= _NAIVE_CUTOFF:
        return _naive(a, b, n)
    ma = max(abs(int(x)) for x in a)
    mb = max(abs(int(x)) for x in b)
    if not ma or not mb:
        return [0] * n
    bound = ma * mb * min(len(a), len(b))
    width = bound.bit_length() + 2
    width = (width + 7) // 8 * 8
    prod = _pack(a, width) * _pack(b, width)
    nbytes = width // 8
    # shift every slot by half its range so digits become nonnegative
    offset = int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * n, "little")
    # slots beyond n are discarded; masking keeps the low slots exact
    raw = int(gmpy2.f_mod_2exp(prod + offset, width * n))
    data = raw.to_bytes(nbytes * n, "little")
    half = 1 << (width - 1)
    out = []
    for i in range(n):
        chunk = data[i * nbytes : (i + 1) * nbytes]
        out.append(int.from_bytes(chunk, "little") - half)
    return out


def pow_trunc(a: list[int], e: int, n: int) -> list[int]:
    out = [1] + [0] * (n - 1)
    base = a[:n]
    while e:
        if e & 1:
            out = mul_trunc(out, base, n)
        e >>= 1
        if e:
            base = mul_trunc(base, base, n)
    return out
