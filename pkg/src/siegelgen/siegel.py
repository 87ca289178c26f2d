"""Fourier coefficients of degree-2 Siegel modular forms built from index-1 lifts."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .binquad import BQF, decomposition_table, reduced, reduced_forms_upto
from .elliptic import dim_M, dim_S
from .errors import ExtendPrecisionError
from .exact import bernoulli, divisors
from .jacobi import JacobiIndex1Form, label_names, spezialschar_labels
from .modp import IncrementalRank, small_primes


def igusa_dim(k: int) -> int:
    """Number of monomials in the generators of weights 4, 6, 10, 12 of total weight k."""
    if k % 2:
        raise ValueError("only even weights are supported")
    if k < 0:
        return 0
    count = 0
    for d in range(k // 12 + 1):
        for c in range((k - 12 * d) // 10 + 1):
            rest = k - 12 * d - 10 * c
            for b in range(rest // 6 + 1):
                if (rest - 6 * b) % 4 == 0:
                    count += 1
    return count


# ---------------------------------------------------------------------------
# coefficient sources


class SiegelCoeffSource:
    """Exact Fourier coefficients a(T), memoized by GL2-reduced index."""

    weight: int
    label: str

    def __init__(self):
        self.memo: dict[BQF, Fraction] = {}
        self._lock = threading.Lock()

    def coefficient(self, t) -> Fraction:
        key = reduced(t)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        val = self._compute(key)
        with self._lock:
            self.memo.setdefault(key, val)
        return val

    __call__ = coefficient

    def _compute(self, t: BQF) -> Fraction:
        raise NotImplementedError

    def __mul__(self, other: "SiegelCoeffSource") -> "ProductSource":
        return ProductSource(self, other)

    def __repr__(self):
        return f"{type(self).__name__}({self.label!r}, weight={self.weight})"


class LiftSource(SiegelCoeffSource):
    """Gritsenko lift: a(T) = sum_{d | content T} d^(k-1) c(4 det T / d^2)."""

    def __init__(self, phi: JacobiIndex1Form | None = None, label: str | None = None, weight: int | None = None):
        super().__init__()
        if phi is None and (label is None or weight is None):
            raise ValueError("need a Jacobi form or a spezialschar label")
        self.phi = phi
        self.weight = phi.weight if phi is not None else weight
        self.label = label or f"V(phi_{self.weight})"
        self._growable = phi is None
        self._by_key: dict[tuple[int, int], Fraction] = {}

    def _ensure(self, dmax: int) -> JacobiIndex1Form:
        if self.phi is not None and self.phi.dmax >= dmax:
            return self.phi
        if not self._growable:
            raise ExtendPrecisionError(dmax, self.phi.dmax)
        depth = max(dmax, 2 * self.phi.dmax if self.phi is not None else 64)
        self.phi = spezialschar_labels(self.weight, depth)[self.label]
        return self.phi

    def constant_term(self) -> Fraction:
        k = self.weight
        return -bernoulli(k) / (2 * k) * self._ensure(0).c(0)

    def value(self, content: int, det4: int) -> Fraction:
        """a(T) as a function of (content, 4 det) alone."""
        key = (content, det4)
        hit = self._by_key.get(key)
        if hit is not None:
            return hit
        if content == 0:
            val = self.constant_term()
        else:
            phi = self._ensure(det4)
            k = self.weight
            num = 0
            for d in divisors(content):
                if det4 % (d * d) == 0:
                    num += d ** (k - 1) * phi.num[det4 // (d * d)]
            val = Fraction(num, phi.den)
        self._by_key[key] = val
        return val

    def _compute(self, t: BQF) -> Fraction:
        return self.value(t.content, t.det4)

    def int_value(self, content: int, det4: int) -> int:
        """Numerator of value() over the Jacobi denominator (content > 0)."""
        phi = self._ensure(det4)
        k = self.weight
        return sum(
            d ** (k - 1) * phi.num[det4 // (d * d)] for d in divisors(content) if det4 % (d * d) == 0
        )


class ProductSource(SiegelCoeffSource):
    """Product of two lifts, a(T) = sum_{T1 + T2 = T} a1(T1) a2(T2)."""

    def __init__(self, f: LiftSource, g: LiftSource):
        super().__init__()
        if not (isinstance(f, LiftSource) and isinstance(g, LiftSource)):
            raise TypeError("products are only supported between lifts")
        self.f, self.g = f, g
        self.weight = f.weight + g.weight
        self.label = f"{f.label} · {g.label}"

    def _compute(self, t: BQF) -> Fraction:
        e1, d1, e2, d2, cnt = decomposition_table(t)
        f, g = self.f, self.g
        f._ensure(t.det4)
        g._ensure(t.det4)
        total = Fraction(0)
        inner = 0
        for a, b, c, d, n in zip(e1.tolist(), d1.tolist(), e2.tolist(), d2.tolist(), cnt.tolist()):
            if a == 0 or c == 0:
                total += n * f.value(a, b) * g.value(c, d)
            else:
                inner += n * f.int_value(a, b) * g.int_value(c, d)
        return total + Fraction(inner, f.phi.den * g.phi.den)


class CombinationSource(SiegelCoeffSource):
    def __init__(self, coeffs: Sequence, sources: Sequence[SiegelCoeffSource], label: str = "combination"):
        super().__init__()
        if len(coeffs) != len(sources) or not sources:
            raise ValueError("coefficient/source length mismatch")
        weights = {s.weight for s in sources}
        if len(weights) != 1:
            raise ValueError("sources of different weights")
        self.coeffs = [Fraction(c) for c in coeffs]
        self.sources = list(sources)
        self.weight = weights.pop()
        self.label = label

    def _compute(self, t: BQF) -> Fraction:
        return sum((c * s.coefficient(t) for c, s in zip(self.coeffs, self.sources) if c), Fraction(0))


def gritsenko_lift(phi: JacobiIndex1Form, label: str | None = None) -> LiftSource:
    if phi.weight < 4:
        raise ValueError("lift needs weight >= 4")
    return LiftSource(phi, label)


def coefficient(source: SiegelCoeffSource, t) -> Fraction:
    return source.coefficient(t)


_LIFTS: dict[str, LiftSource] = {}


def lift_by_label(label: str) -> LiftSource:
    """Shared growable lift for a spezialschar label such as '10|^1'."""
    src = _LIFTS.get(label)
    if src is None:
        k = int(label.split("|")[0])
        src = _LIFTS.setdefault(label, LiftSource(label=label, weight=k))
    return src


# ---------------------------------------------------------------------------
# modular evaluation over an index set


def _modp_value_table(src: LiftSource, p: int, emax: int, dmax: int) -> np.ndarray:
    """A[e, D] = a(T) mod p for content e <= emax and 4 det D <= dmax."""
    phi = src._ensure(dmax)
    inv = pow(phi.den % p, -1, p)
    cmod = np.array([(v % p) * inv % p for v in phi.num[: dmax + 1]], dtype=np.int64)
    k = src.weight
    table = np.zeros((emax + 1, dmax + 1), dtype=np.int64)
    a0 = src.constant_term()
    table[0, 0] = a0.numerator % p * pow(a0.denominator % p, -1, p) % p
    for e in range(1, emax + 1):
        row = np.zeros(dmax + 1, dtype=np.int64)
        for d in divisors(e):
            w = pow(d, k - 1, p)
            span = dmax // (d * d)
            # contributions at D = d^2 * D'
            row[0 : (span + 1) * d * d : d * d] = (row[0 : (span + 1) * d * d : d * d] + w * cmod[: span + 1]) % p
        table[e] = row
    return table


class IndexSet:
    """Reduced indices with concatenated decomposition buckets for fast products mod p."""

    def __init__(self, forms: Sequence[BQF]):
        self.forms = list(forms)
        self.emax = max([max(t.a, t.b, t.c) for t in self.forms] + [1])
        self.dmax = max([t.det4 for t in self.forms] + [0])
        self.e = np.array([t.content for t in self.forms], dtype=np.int64)
        self.d = np.array([t.det4 for t in self.forms], dtype=np.int64)
        parts = [decomposition_table(t) for t in self.forms]
        lens = [len(p[0]) for p in parts]
        self.starts = np.concatenate([[0], np.cumsum(lens)[:-1]]).astype(np.int64)
        self.buckets = [np.concatenate([p[i] for p in parts]).astype(np.int64) for i in range(5)]

    def __len__(self):
        return len(self.forms)

    def lift_vector(self, table: np.ndarray) -> np.ndarray:
        return table[self.e, self.d]

    def product_vector(self, t1: np.ndarray, t2: np.ndarray, p: int) -> np.ndarray:
        e1, d1, e2, d2, cnt = self.buckets
        vals = (cnt % p) * t1[e1, d1] % p * t2[e2, d2] % p
        return np.add.reduceat(vals, self.starts) % p


def _good_prime(sources: Sequence[LiftSource], dmax: int) -> int:
    dens = 1
    for s in sources:
        phi = s._ensure(dmax)
        dens *= phi.den * s.constant_term().denominator
    for p in small_primes(64):
        if dens % p:
            return p
    raise RuntimeError("no usable prime")


def candidate_labels(k: int) -> tuple[list[str], list[tuple[str, str]]]:
    """Spezialschar labels of weight k and product pairs in greedy order."""
    spez = label_names(k) if k >= 4 else []
    pairs = []
    for k2 in range(k // 2 + (k // 2) % 2, k - 3, 2):
        k1 = k - k2
        if k1 < 4 or k1 > k2:
            continue
        l1, l2 = label_names(k1), label_names(k2)
        if k1 == k2:
            pairs.extend((l1[i], l1[j]) for i, j in combinations_with_replacement(range(len(l1)), 2))
        else:
            pairs.extend((a, b) for a in l1 for b in l2)
    return spez, pairs


@dataclass
class ProductBasis:
    weight: int
    labels: list[str]
    sources: list[SiegelCoeffSource]
    pivots: list[BQF] = field(default_factory=list)
    index_bound: int = 0

    @property
    def products(self) -> list[str]:
        return [l for l in self.labels if "·" in l]

    def __len__(self):
        return len(self.labels)


@dataclass
class GenerationReport:
    weight: int
    rank: int
    dim: int
    ok: bool
    witness: list[str]
    index_bound: int


def _index_forms(k: int, xmax: int) -> list[BQF]:
    return reduced_forms_upto(xmax, singular=max(dim_M(k), 1))


def _greedy(k: int, xmax: int, target: int) -> tuple[list[str], list[SiegelCoeffSource], list[np.ndarray], int]:
    spez, pairs = candidate_labels(k)
    idx = IndexSet(_index_forms(k, xmax))
    lifts = {l: lift_by_label(l) for l in spez + [x for pr in pairs for x in pr]}
    p = _good_prime(list(lifts.values()), idx.dmax)
    tables = {l: _modp_value_table(s, p, idx.emax, idx.dmax) for l, s in lifts.items()}
    rank = IncrementalRank(len(idx), p)
    labels, sources, vectors = [], [], []
    for l in spez:
        v = idx.lift_vector(tables[l])
        if rank.add(v):
            labels.append(l)
            sources.append(lifts[l])
            vectors.append(v)
    for a, b in pairs:
        if rank.rank >= target:
            break
        v = idx.product_vector(tables[a], tables[b], p)
        if rank.add(v):
            labels.append(f"{a} · {b}")
            sources.append(ProductSource(lifts[a], lifts[b]))
            vectors.append(v)
    return labels, sources, vectors, p


def verify_generating(k: int, dmax: int | None = None) -> GenerationReport:
    """Rank of lifts and products of two lifts on reduced indices, grown until stable."""
    dim = igusa_dim(k)
    x = dmax if dmax is not None else 4 * k
    prev = None
    stable = 0
    while True:
        labels, _, _, _ = _greedy(k, x, dim)
        rank = len(labels)
        if rank >= dim:
            break
        stable = stable + 1 if rank == prev else 0
        if stable >= 1 and dmax is None and x > 16 * k:
            break
        if dmax is not None:
            break
        prev = rank
        x *= 2
    return GenerationReport(k, rank, dim, rank == dim, [l for l in labels if "·" in l], x)


def product_basis(k: int, dmax: int | None = None) -> ProductBasis:
    rep = verify_generating(k, dmax)
    if not rep.ok:
        raise RuntimeError(f"weight {k}: lifts and products span rank {rep.rank} < {rep.dim}")
    labels, sources, vectors, p = _greedy(k, rep.index_bound, rep.dim)
    forms = _index_forms(k, rep.index_bound)
    # pivot rows: first rows (in index order) raising the rank of the basis matrix
    mat = np.stack(vectors, axis=1) if vectors else np.zeros((len(forms), 0), dtype=np.int64)
    inc = IncrementalRank(len(labels), p)
    pivots = []
    for t, row in zip(forms, mat):
        if inc.add(row):
            pivots.append(t)
            if inc.rank == len(labels):
                break
    return ProductBasis(k, labels, sources, pivots, rep.index_bound)


def pivot_max_det4(k: int, basis: ProductBasis | None = None) -> int:
    """Largest 4 det among the pivot indices (inclusive cutoff)."""
    if basis is None:
        basis = product_basis(k)
    return max((t.det4 for t in basis.pivots), default=0)


def pivot_max_discriminant(k: int, basis: ProductBasis | None = None) -> int:
    """Exclusive discriminant cutoff: indices with 4 det < X already give full rank.

    Zero when singular indices alone suffice.
    """
    m = pivot_max_det4(k, basis)
    return m + 1 if m else 0


def pivot_rank_profile(k: int, basis: ProductBasis) -> list[tuple[int, int]]:
    """(4 det, rank) after each index row, rank over the prime used for selection."""
    spez, _ = candidate_labels(k)
    forms = _index_forms(k, basis.index_bound)
    idx = IndexSet(forms)
    srcs = basis.sources
    lifts = set()
    for s in srcs:
        lifts.update([s] if isinstance(s, LiftSource) else [s.f, s.g])
    p = _good_prime(list(lifts), idx.dmax)
    tables = {}
    cols = []
    for s in srcs:
        if isinstance(s, LiftSource):
            tables.setdefault(s.label, _modp_value_table(s, p, idx.emax, idx.dmax))
            cols.append(idx.lift_vector(tables[s.label]))
        else:
            for x in (s.f, s.g):
                tables.setdefault(x.label, _modp_value_table(x, p, idx.emax, idx.dmax))
            cols.append(idx.product_vector(tables[s.f.label], tables[s.g.label], p))
    mat = np.stack(cols, axis=1)
    inc = IncrementalRank(len(srcs), p)
    out = []
    for t, row in zip(forms, mat):
        inc.add(row)
        out.append((t.det4, inc.rank))
    return out


def slope_fit(table: dict[int, int]) -> float:
    """Least-squares slope of log(maxD) against log(k)."""
    pts = [(math.log(k), math.log(v)) for k, v in table.items() if k > 0 and v > 0]
    if len(pts) < 5:
        raise ValueError("need at least five positive data points")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    slope = np.polyfit(xs, ys, 1)[0]
    return float(slope)


def loglog_csv(table: dict[int, int]) -> str:
    lines = ["log_k,log_maxD"]
    for k in sorted(table):
        if table[k] > 0:
            lines.append(f"{math.log(k):.12g},{math.log(table[k]):.12g}")
    return "\n".join(lines) + "\n"


def pivots_csv(table: dict[int, int]) -> str:
    return "weight,maxD\n" + "".join(f"{k},{v}\n" for k, v in sorted(table.items()))


def cusp_dim(k: int) -> int:
    """Dimension of Siegel cusp forms: total minus the Siegel-operator image M_k."""
    return igusa_dim(k) - dim_M(k) if k >= 4 else 0


def maass_cusp_dim(k: int) -> int:
    return dim_S(2 * k - 2)
