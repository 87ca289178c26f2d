from fractions import Fraction

import sympy
from sympy.functions.combinatorial.numbers import kronecker_symbol
from hypothesis import given, settings, strategies as st

from siegelgen.exact import (
    RatPoly,
    bernoulli,
    charpoly,
    charpoly_berkowitz,
    divisors,
    factorint,
    fundamental_discriminant,
    is_fundamental,
    kronecker,
    moebius,
    nullspace_rational,
    rank_rational,
    sigma,
    solve_rational,
)
from siegelgen.modp import IncrementalRank, rank_mod, as_modp_array, rational_reconstruct
from siegelgen.polyfactor import factor_over_Q, is_irreducible

small_ints = st.integers(-30, 30)


def _sym(mat):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x for x in r] for r in mat])


def test_bernoulli_matches_sympy():
    assert bernoulli(1) == Fraction(-1, 2)
    for n in [0] + list(range(2, 60)):
        assert bernoulli(n) == Fraction(str(sympy.bernoulli(n)))


@given(st.integers(1, 5000))
def test_arithmetic_functions(n):
    assert divisors(n) == sympy.divisors(n)
    assert factorint(n) == sympy.factorint(n)
    assert moebius(n) == sympy.mobius(n)
    assert sigma(n, 3) == sympy.divisor_sigma(n, 3)


@given(st.integers(-400, 400).filter(lambda d: d % 4 in (0, 1) and d != 0), st.integers(1, 300))
def test_kronecker_matches_sympy(d, n):
    assert kronecker(d, n) == kronecker_symbol(d, n)


@given(st.integers(-2000, -3).filter(lambda d: d % 4 in (0, 1)))
def test_fundamental_part(d):
    d0, f = fundamental_discriminant(d)
    assert d0 * f * f == d and is_fundamental(d0)


@settings(max_examples=40)
@given(st.lists(st.lists(small_ints, min_size=4, max_size=4), min_size=4, max_size=4))
def test_charpoly_paths_agree(mat):
    expected = [Fraction(int(c)) for c in reversed(_sym(mat).charpoly().all_coeffs())]
    assert charpoly(mat).coeffs == RatPoly(expected).coeffs
    assert charpoly_berkowitz(mat) == charpoly(mat)


@settings(max_examples=40)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=5, max_size=5), min_size=3, max_size=6))
def test_rank_and_nullspace(mat):
    r = rank_rational(mat)
    assert r == _sym(mat).rank()
    null = nullspace_rational(mat)
    assert len(null) == 5 - r
    for v in null:
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in mat)
    assert rank_mod(as_modp_array(mat, 1_000_003), 1_000_003) == r


@settings(max_examples=30)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3))
def test_solve_rational_roundtrip(mat):
    if _sym(mat).det() == 0:
        return
    b = [[1, 2], [0, -1], [3, 5]]
    x = solve_rational(mat, b)
    for i in range(3):
        for j in range(2):
            assert sum(Fraction(mat[i][l]) * x[l][j] for l in range(3)) == b[i][j]


@given(st.integers(-10**9, 10**9), st.integers(1, 10**9))
def test_rational_reconstruction(n, d):
    q = Fraction(n, d)
    m = 2**61 - 1
    r = q.numerator * pow(q.denominator, -1, m) % m
    assert rational_reconstruct(r, m) == (q.numerator, q.denominator)


def test_incremental_rank_is_monotone():
    p = 1_000_003
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1], [1, 3, 4], [5, 0, 1]]
    inc = IncrementalRank(3, p)
    seen = []
    for r in rows:
        inc.add(r)
        seen.append(inc.rank)
    assert seen == [1, 1, 2, 2, 3]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=2, max_size=4), min_size=1, max_size=3))
def test_factor_over_q_matches_sympy(parts):
    parts = [p for p in parts if any(p[1:])]
    if not parts:
        return
    x = sympy.Symbol("x")
    poly = RatPoly([1])
    sp = sympy.Integer(1)
    for p in parts:
        poly = poly * RatPoly(p)
        sp *= sum(c * x**i for i, c in enumerate(p))
    ours = factor_over_Q(poly)
    assert ours.expand() == poly
    theirs = sympy.factor_list(sympy.Poly(sp, x))[1]
    assert sorted((g.degree, m) for g, m in ours.factors) == sorted((f.degree(), m) for f, m in theirs)


def test_irreducibility_examples():
    assert is_irreducible(RatPoly([-2, 0, 1]))
    assert not is_irreducible(RatPoly([-4, 0, 1]))
    assert is_irreducible(RatPoly([-1, -1, 0, 0, 0, 1]))
    assert not is_irreducible(RatPoly([0, 0, 1]))
