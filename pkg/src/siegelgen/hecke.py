"""Hecke operators on degree-2 Siegel forms and eigenform extraction."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .binquad import BQF
from .elliptic import elliptic_hecke_matrix
from .errors import InvariantViolation
from .exact import RatPoly, charpoly, divisors, factorint, kronecker, moebius, solve_rational
from .numfield import NFElem, NumberField, count_real_roots, nf_real_embeddings
from .polyfactor import factor_over_Q
from .reals import BoundedReal
from .siegel import ProductBasis, SiegelCoeffSource, product_basis

T0 = BQF(1, 1, 1)

Coeff = Callable[[BQF], object]


def _is_prime(p: int) -> bool:
    return p > 1 and factorint(p) == {p: 1}


# ---------------------------------------------------------------------------
# coefficient actions


def hecke_Tp_coeff(F: SiegelCoeffSource | Coeff, p: int, t, weight: int | None = None):
    """Coefficient at t of F | T(p)."""
    a, k = _coeff_and_weight(F, weight)
    n, r, m = t
    out = a(BQF(p * n, p * r, p * m))
    inner = 0
    for j in range(p):
        q = n + r * j + m * j * j
        if q % p == 0:
            inner = inner + a(BQF(q // p, r + 2 * j * m, p * m))
    if m % p == 0:
        inner = inner + a(BQF(p * n, r, m // p))
    out = out + p ** (k - 2) * inner
    if n % p == 0 and r % p == 0 and m % p == 0:
        out = out + p ** (2 * k - 3) * a(BQF(n // p, r // p, m // p))
    return out


def _coeff_and_weight(F, weight):
    if isinstance(F, SiegelCoeffSource):
        return F.coefficient, F.weight
    if weight is None:
        raise ValueError("weight required for a bare coefficient function")
    return F, weight


def smith_form(mat) -> tuple[int, int, tuple[tuple[int, int], tuple[int, int]]]:
    """(d1, d2, V) with mat = U diag(d1, d2) V for some U, V in GL2(Z), d1 | d2."""
    a = [list(mat[0]), list(mat[1])]
    r = [[1, 0], [0, 1]]  # accumulated column operations: a_orig * r = (row ops) * a

    def colop(i, j, q):  # col_i -= q col_j
        for row in a:
            row[i] -= q * row[j]
        for row in r:
            row[i] -= q * row[j]

    def colswap():
        for row in a:
            row[0], row[1] = row[1], row[0]
        for row in r:
            row[0], row[1] = row[1], row[0]

    while True:
        entries = [(abs(a[i][j]), i, j) for i in range(2) for j in range(2) if a[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        if i == 1:
            a[0], a[1] = a[1], a[0]
        if j == 1:
            colswap()
        piv = a[0][0]
        if a[1][0]:
            q = a[1][0] // piv
            a[1] = [x - q * y for x, y in zip(a[1], a[0])]
        if a[0][1]:
            colop(1, 0, a[0][1] // piv)
        if a[1][0] or a[0][1]:
            continue
        if a[1][1] % piv:
            a[0] = [x + y for x, y in zip(a[0], a[1])]
            continue
        break
    d1, d2 = abs(a[0][0]), abs(a[1][1])
    # V = r^{-1}
    det = r[0][0] * r[1][1] - r[0][1] * r[1][0]
    v = ((r[1][1] * det, -r[0][1] * det), (-r[1][0] * det, r[0][0] * det))
    return d1, d2, v


@lru_cache(maxsize=64)
def similitude_terms(m: int) -> tuple[tuple[tuple[tuple[int, int], tuple[int, int]], int, int, tuple], ...]:
    """Left GL2(Z)-coset representatives D with m D^{-1} integral, with Smith data."""
    out = []
    for a in divisors(m):
        for d in divisors(m):
            for b in range(d):
                if (m * b) % (a * d):
                    continue
                dm = ((a, b), (0, d))
                d1, d2, v = smith_form(dm)
                out.append((dm, d1, d2, v))
    return tuple(out)


def hecke_Tm_coeff(F: SiegelCoeffSource | Coeff, m: int, t, weight: int | None = None):
    """Coefficient at t of F | T(m), T(m) the full similitude-m Hecke operator."""
    a, k = _coeff_and_weight(F, weight)
    t = BQF(*t)
    total = 0
    for dm, d1, d2, v in similitude_terms(m):
        # congruence condition on V T V^t
        tp = t.transform(((v[0][0], v[1][0]), (v[0][1], v[1][1])))
        if (d1 * tp.a) % m or (d2 * tp.b) % m or (d2 * tp.c) % m:
            continue
        s = t.transform(((dm[0][0], dm[1][0]), (dm[0][1], dm[1][1])))
        s = BQF(s.a // m, s.b // m, s.c // m)
        det = d1 * d2
        w = Fraction(m ** (2 * k - 3) * d1 * d1 * d2, det**k)
        total = total + w * a(s)
    return total


def hecke_Tp2_coeff(F: SiegelCoeffSource | Coeff, p: int, t, weight: int | None = None):
    return hecke_Tm_coeff(F, p * p, t, weight)


# ---------------------------------------------------------------------------
# T(2) on a product basis


def _pivot_matrix(basis: ProductBasis) -> list[list[Fraction]]:
    return [[s.coefficient(t) for s in basis.sources] for t in basis.pivots]


def hecke_matrix(k: int, p: int, basis: ProductBasis | None = None) -> list[list[Fraction]]:
    """Row j holds the basis coordinates of T(p) B_j."""
    if basis is None:
        basis = product_basis(k)
    a = _pivot_matrix(basis)
    c = [[hecke_Tp_coeff(s, p, t) for s in basis.sources] for t in basis.pivots]
    x = solve_rational(a, c)
    n = len(basis.sources)
    return [[x[l][j] for l in range(n)] for j in range(n)]


def t2_matrix(k: int, basis: ProductBasis | None = None) -> list[list[Fraction]]:
    return hecke_matrix(k, 2, basis)


@dataclass
class CharpolySplit:
    weight: int
    full: RatPoly
    eisenstein: RatPoly
    klingen: RatPoly
    maass: RatPoly
    sprime: RatPoly
    sprime_factors: list[tuple[RatPoly, int]]

    @property
    def sprime_irreducible(self) -> bool:
        return len(self.sprime_factors) == 1 and self.sprime_factors[0][1] == 1

    def as_dict(self) -> dict:
        return {
            "eisenstein": self.eisenstein,
            "klingen": self.klingen,
            "maass": self.maass,
            "sprime": self.sprime,
            "sprime_irreducible": self.sprime_irreducible,
        }


def _elliptic_charpoly(k: int) -> RatPoly:
    mat = elliptic_hecke_matrix(k, 2)
    return charpoly(mat) if mat else RatPoly([1])


def predicted_factors(k: int) -> tuple[RatPoly, RatPoly, RatPoly]:
    """T(2) factors of the Siegel Eisenstein, Klingen and cuspidal Maass parts."""
    x = RatPoly.x()
    eis = x - (1 + 2 ** (k - 2)) * (1 + 2 ** (k - 1))
    c = 1 + 2 ** (k - 2)
    f = _elliptic_charpoly(k)
    n = f.degree
    klingen = f.compose_linear(Fraction(1, c)) * Fraction(c) ** n
    g = _elliptic_charpoly(2 * k - 2)
    maass = g.compose_linear(1, -(2 ** (k - 1) + 2 ** (k - 2)))
    return eis, klingen, maass


@lru_cache(maxsize=64)
def _split_cached(k: int) -> CharpolySplit:
    mat = t2_matrix(k)
    full = charpoly(mat)
    eis, klingen, maass = predicted_factors(k)
    rest = full
    for name, fac in (("Eisenstein", eis), ("Klingen", klingen), ("Maass", maass)):
        q, r = rest.divmod(fac)
        if not r.is_zero():
            raise InvariantViolation(f"weight {k}: {name} factor does not divide the T(2) characteristic polynomial")
        rest = q
    factors = factor_over_Q(rest).factors if rest.degree > 0 else []
    return CharpolySplit(k, full, eis, klingen, maass, rest, factors)


def split_charpoly(k: int) -> CharpolySplit:
    if k < 10 or k % 2:
        raise ValueError("weight must be even and at least 10")
    return _split_cached(k)


# ---------------------------------------------------------------------------
# eigenforms


def _nullvector(rows: list[list[NFElem]]) -> list[NFElem]:
    """A nonzero vector v with rows * v = 0 (one-dimensional kernel expected)."""
    m = [list(r) for r in rows]
    nrows, ncols = len(m), len(m[0])
    pivcols = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivcols.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivcols]
    if not free:
        raise InvariantViolation("eigenvector equation has trivial kernel")
    field = rows[0][0].field
    fc = free[0]
    v = [field.zero() for _ in range(ncols)]
    v[fc] = field.one()
    for i, c in enumerate(pivcols):
        v[c] = -m[i][fc]
    return v


@dataclass
class EigenformHandle:
    weight: int
    polynomial: RatPoly
    coordinates: list[NFElem]
    basis: ProductBasis
    embedding: int = 0
    normalization: str = "first nonzero coordinate = 1"
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def field(self) -> NumberField:
        return self.coordinates[0].field

    @property
    def is_rational(self) -> bool:
        return self.polynomial.degree == 1

    def combine(self, values: Sequence[Fraction]) -> NFElem:
        out = self.field.zero()
        for c, v in zip(self.coordinates, values):
            if v and not c.is_zero():
                out = out + c * v
        return out

    def coefficient(self, t) -> NFElem:
        t = BQF(*t)
        hit = self._cache.get(t)
        if hit is None:
            hit = self.combine([s.coefficient(t) for s in self.basis.sources])
            self._cache[t] = hit
        return hit

    def scaled(self, c) -> "EigenformHandle":
        return EigenformHandle(
            self.weight, self.polynomial, [x * c for x in self.coordinates], self.basis, self.embedding, f"scaled by {c}"
        )

    def normalized_at_T0(self) -> "EigenformHandle":
        """Rescaled so that a([1,1,1]) = 1."""
        a = self.coefficient(T0)
        if a.is_zero():
            raise ZeroDivisionError("coefficient at [1,1,1] vanishes")
        out = self.scaled(a.inverse())
        out.normalization = "a([1,1,1]) = 1"
        return out

    def embed(self, e: NFElem, bits: int) -> BoundedReal:
        return nf_real_embeddings(e, bits)[self.embedding]


def _eigenvector(mat: list[list[Fraction]], poly: RatPoly) -> list[NFElem]:
    K = NumberField(poly)
    x = K.gen()
    n = len(mat)
    # v M = x v  <=>  (M^T - x I) v^T = 0
    rows = [[K(mat[j][i]) - (x if i == j else 0) for j in range(n)] for i in range(n)]
    v = _nullvector(rows)
    first = next(c for c in v if not c.is_zero())
    inv = first.inverse()
    return [c * inv for c in v]


@lru_cache(maxsize=32)
def _eigenforms_cached(k: int) -> tuple[EigenformHandle, ...]:
    split = split_charpoly(k)
    basis = product_basis(k)
    mat = t2_matrix(k, basis)
    out = []
    for poly, mult in split.sprime_factors:
        if mult != 1:
            raise InvariantViolation(f"weight {k}: repeated T(2) eigenvalues on S'")
        coords = _eigenvector(mat, poly)
        if count_real_roots(poly) != poly.degree:
            raise InvariantViolation(f"weight {k}: non-real T(2) eigenvalues")
        for e in range(poly.degree):
            out.append(EigenformHandle(k, poly, coords, basis, e))
    return tuple(out)


def eigenforms(k: int) -> list[EigenformHandle]:
    return list(_eigenforms_cached(k))


def eigen_residual(f: EigenformHandle, mat: list[list[Fraction]]) -> list[NFElem]:
    """v M - x v, zero exactly for an eigenvector."""
    x = f.field.gen()
    n = len(mat)
    return [
        sum((f.coordinates[j] * mat[j][i] for j in range(n)), f.field.zero()) - x * f.coordinates[i] for i in range(n)
    ]


# ---------------------------------------------------------------------------
# eigenvalues


def _basis_action(f: EigenformHandle, op: Callable[[SiegelCoeffSource], Fraction]) -> NFElem:
    return f.combine([op(s) for s in f.basis.sources])


def lambda_via_action(f: EigenformHandle, p: int, t=T0) -> NFElem:
    """Eigenvalue of T(p) read off as b(t) / a(t)."""
    a = f.coefficient(t)
    if a.is_zero():
        raise ZeroDivisionError(f"eigenform coefficient at {tuple(t)} vanishes")
    return _basis_action(f, lambda s: hecke_Tp_coeff(s, p, t)) / a


def lambda2_via_action(f: EigenformHandle, p: int, t=T0) -> NFElem:
    a = f.coefficient(t)
    if a.is_zero():
        raise ZeroDivisionError(f"eigenform coefficient at {tuple(t)} vanishes")
    return _basis_action(f, lambda s: hecke_Tp2_coeff(s, p, t)) / a


def _r3(a: int) -> int:
    return sum(kronecker(-3, d) for d in divisors(a))


def andrianov_u(m: int) -> int:
    """u(m) = sum_{a b^2 = m} mu(b) r(a), r(a) = sum_{d | a} (-3/d)."""
    total = 0
    b = 1
    while b * b <= m:
        if m % (b * b) == 0:
            total += moebius(b) * _r3(m // (b * b))
        b += 1
    return total


def lambda_andrianov(f: EigenformHandle | Coeff, n: int, weight: int | None = None):
    """lambda(n) = a(T0)^{-1} sum_{m d = n} u(m) m^{k-2} a(d T0)."""
    coeff = f.coefficient if isinstance(f, EigenformHandle) else f
    k = f.weight if isinstance(f, EigenformHandle) else weight
    a0 = coeff(T0)
    if (a0.is_zero() if hasattr(a0, "is_zero") else a0 == 0):
        raise ZeroDivisionError("coefficient at [1,1,1] vanishes")
    total = 0
    for d in divisors(n):
        m = n // d
        u = andrianov_u(m)
        if u:
            total = total + coeff(T0.scale(d)) * (u * m ** (k - 2))
    return total / a0


@dataclass
class SpinorEulerFactor:
    p: int
    lp: object
    lp2: object
    weight: int

    def q_coefficients(self) -> list:
        p, k = self.p, self.weight
        return [
            1,
            -self.lp,
            self.lp * self.lp - self.lp2 - p ** (2 * k - 4),
            -self.lp * p ** (2 * k - 3),
            p ** (4 * k - 6),
        ]

    def prime_powers(self, nu_max: int) -> list:
        """lambda(p^nu) for 0 <= nu <= nu_max from (1 - p^(2k-4) X^2) / Q_p(X)."""
        p, k = self.p, self.weight
        q = self.q_coefficients()
        s = [1]
        for nu in range(1, nu_max + 1):
            rhs = -p ** (2 * k - 4) if nu == 2 else 0
            val = rhs
            for i in range(1, min(nu, 4) + 1):
                val = val - q[i] * s[nu - i]
            s.append(val)
        return s

    def spinor_powers(self, nu_max: int) -> list:
        """Coefficients of X^nu in 1 / Q_p(X): the local spinor zeta coefficients."""
        q = self.q_coefficients()
        s = [1]
        for nu in range(1, nu_max + 1):
            val = 0
            for i in range(1, min(nu, 4) + 1):
                val = val - q[i] * s[nu - i]
            s.append(val)
        return s


def smooth_numbers(N: int, P: int) -> list[int]:
    """1 <= n <= N with every prime factor below P."""
    return [n for n in range(1, N + 1) if all(q < P for q in factorint(n))]


def lambda_table(
    f: EigenformHandle, P: int, N: int, method: str = "andrianov", spinor: bool = False
) -> dict[int, object]:
    """Exact lambda(n) for P-smooth n <= N, from lambda(p), lambda(p^2) and the Euler recursion.

    With ``spinor`` the table holds the coefficients of the spinor zeta function itself,
    i.e. the Hecke eigenvalues convolved with zeta(2s - 2k + 4).
    """
    prime_local = {}
    for p in range(2, min(P, N + 1)):
        if not _is_prime(p):
            continue
        if method == "andrianov":
            lp = lambda_andrianov(f, p)
            lp2 = lambda_andrianov(f, p * p) if p * p <= N else 0
        else:
            lp = lambda_via_action(f, p)
            lp2 = lambda2_via_action(f, p) if p * p <= N else 0
        nu_max = 0
        while p ** (nu_max + 1) <= N:
            nu_max += 1
        local = SpinorEulerFactor(p, lp, lp2, f.weight)
        prime_local[p] = local.spinor_powers(nu_max) if spinor else local.prime_powers(nu_max)
    out = {}
    for n in smooth_numbers(N, P):
        val = 1
        for q, e in factorint(n).items():
            val = val * prime_local[q][e]
        out[n] = val
    return out


def lambda_sequence(
    f: EigenformHandle, P: int, N: int, bits: int = 128, spinor: bool = False
) -> dict[int, BoundedReal]:
    table = lambda_table(f, P, N, spinor=spinor)
    out = {}
    for n, v in table.items():
        e = v if isinstance(v, NFElem) else f.field(v)
        out[n] = f.embed(e, bits)
    return out


# ---------------------------------------------------------------------------
# reports


def _format_factored(n: int) -> str:
    if n in (0, 1, -1):
        return str(n)
    sign = "-" if n < 0 else ""
    parts = []
    for p, e in sorted(factorint(abs(n)).items()):
        parts.append(f"{p}^{e}" if e > 1 else str(p))
    return sign + " * ".join(parts)


def format_factored(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return _format_factored(q.numerator)
    return f"{_format_factored(q.numerator)} / {_format_factored(q.denominator)}"


def largest_prime_factor(q: Fraction) -> int:
    q = Fraction(q)
    primes = list(factorint(abs(q.numerator))) + list(factorint(q.denominator)) if q else []
    return max(primes, default=1)


@dataclass
class CoordinateReport:
    weight: int
    labels: list[str]
    coordinates: list[Fraction]
    zero_pattern: list[int]
    factored: list[str]
    largest_prime: int
    eigenvalue: Fraction


def coordinates_report(k: int, normalize: Callable[[EigenformHandle], object] | None = None) -> list[CoordinateReport]:
    out = []
    for f in eigenforms(k):
        if not f.is_rational:
            raise ValueError("coordinate reports are only produced for rational eigenforms")
        g = f.scaled(normalize(f)) if normalize else f
        coords = [c.rational() for c in g.coordinates]
        zeros = [i + 1 for i, c in enumerate(coords) if c == 0]
        out.append(
            CoordinateReport(
                k,
                list(f.basis.labels),
                coords,
                zeros,
                [format_factored(c) for c in coords],
                max(largest_prime_factor(c) for c in coords if c),
                -f.polynomial.coeffs[0],
            )
        )
    return out
