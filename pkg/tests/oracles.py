"""Independent reference computations shared by the module tests and the acceptance suite."""
from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction

from sympy.functions.combinatorial.numbers import kronecker_symbol

from siegelgen.binquad import BQF


def gl2_matrices(bound: int):
    r = range(-bound, bound + 1)
    for p, q, s, t in itertools.product(r, r, r, r):
        if p * t - q * s in (1, -1):
            yield ((p, q), (s, t))


GL2_BOX = tuple(gl2_matrices(4))


def reduced_in_orbit(t: BQF) -> set[BQF]:
    """All GL2-reduced forms hit by brute force over a box of unimodular matrices."""
    return {u for u in (t.transform(m) for m in GL2_BOX) if u.is_reduced()}


def naive_class_count(D: int) -> int:
    """Proper classes of discriminant D via the textbook reduced-form triple loop."""
    n = 0
    for a in range(1, -D + 1):
        for b in range(-a + 1, a + 1):
            for c in range(a, -D + 1):
                if b * b - 4 * a * c == D and not (a == c and b < 0):
                    n += 1
    return n


def dirichlet_class_number(D: int) -> Fraction:
    """Class number of a fundamental D < -4 from the character sum."""
    return Fraction(-sum(kronecker_symbol(D, n) * n for n in range(1, -D)), -D)


def naive_product_coefficient(f, g, t: BQF):
    """sum over t1 + t2 = t of f(t1) g(t2), without bucketing."""
    total = 0
    bound = 2 * max(t.a, t.c) + abs(t.b)
    for a1 in range(t.a + 1):
        for c1 in range(t.c + 1):
            for b1 in range(-bound, bound + 1):
                t1 = BQF(a1, b1, c1)
                t2 = t - t1
                if t1.is_psd() and t2.is_psd():
                    total += f(t1) * g(t2)
    return total
