"""On-disk cache of Siegel Fourier coefficients in a canonical text format.

Line 1: ``SIEGEL-CACHE v1 weight=<k> kind=<label> checksum=<sha256 hex of the body>``.
Body: one ``a b c : num/den`` line per reduced index, sorted by (4ac - b^2, a, b).
"""
from __future__ import annotations

import hashlib
import os
import re
import tempfile
from fractions import Fraction
from pathlib import Path

from .binquad import BQF, reduced

HEADER_RE = re.compile(r"^SIEGEL-CACHE v(\d+) weight=(-?\d+) kind=(.*) checksum=([0-9a-f]{64})$")
LINE_RE = re.compile(r"^(\d+) (-?\d+) (\d+) : (-?\d+)/(\d+)$")
VERSION = 1


class CacheError(ValueError):
    pass


def _body(memo: dict) -> bytes:
    keys = sorted(memo, key=lambda t: (t.det4, t.a, t.b))
    lines = []
    for t in keys:
        v = Fraction(memo[t])
        lines.append(f"{t.a} {t.b} {t.c} : {v.numerator}/{v.denominator}\n")
    return "".join(lines).encode()


def dumps(memo: dict, weight: int, kind: str) -> bytes:
    if "\n" in kind:
        raise ValueError("kind label must be a single line")
    body = _body(memo)
    head = f"SIEGEL-CACHE v{VERSION} weight={weight} kind={kind} checksum={hashlib.sha256(body).hexdigest()}\n"
    return head.encode() + body


def loads(data: bytes, weight: int | None = None, kind: str | None = None) -> tuple[int, str, dict[BQF, Fraction]]:
    head, sep, body = data.partition(b"\n")
    m = HEADER_RE.match(head.decode())
    if not m:
        raise CacheError("malformed cache header")
    version, w, label, checksum = int(m.group(1)), int(m.group(2)), m.group(3), m.group(4)
    if version != VERSION:
        raise CacheError(f"unsupported cache version {version}")
    if hashlib.sha256(body).hexdigest() != checksum:
        raise CacheError("cache checksum mismatch")
    if weight is not None and w != weight:
        raise CacheError(f"cache holds weight {w}, expected {weight}")
    if kind is not None and label != kind:
        raise CacheError(f"cache holds {label!r}, expected {kind!r}")
    memo = {}
    for n, line in enumerate(body.decode().splitlines(), start=2):
        lm = LINE_RE.match(line)
        if not lm:
            raise CacheError(f"malformed cache line {n}")
        a, b, c, num, den = map(int, lm.groups())
        t = BQF(a, b, c)
        if reduced(t) != t:
            raise CacheError(f"line {n}: index {tuple(t)} is not reduced")
        memo[t] = Fraction(num, den)
    return w, label, memo


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cache_store(source, path) -> Path:
    path = Path(path)
    _atomic_write(path, dumps(dict(source.memo), source.weight, source.label))
    return path


def cache_load(path, source=None, weight: int | None = None, kind: str | None = None) -> dict[BQF, Fraction]:
    """Read a cache file; with ``source`` the entries are merged into its memo after header checks."""
    if source is not None:
        weight = source.weight if weight is None else weight
        kind = source.label if kind is None else kind
    _, _, memo = loads(Path(path).read_bytes(), weight, kind)
    if source is not None:
        with source._lock:
            for t, v in memo.items():
                source.memo.setdefault(t, v)
    return memo


def cache_filename(weight: int, kind: str) -> str:
    # keep Jacobi-lift labels like 20|^1 and 20|_1 apart
    slug = kind.replace("|^", "u").replace("|_", "d").replace("·", "x")
    slug = re.sub(r"[^A-Za-z0-9]+", "", slug)
    return f"w{weight}_{slug}.cache"


def cache_path(cache_dir, source) -> Path:
    return Path(cache_dir) / cache_filename(source.weight, source.label)
