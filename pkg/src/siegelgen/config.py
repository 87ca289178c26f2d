"""Run configuration shared by the command-line tools."""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .reals import MIN_BITS

ENV_PREFIX = "SIEGELGEN_"


@dataclass(frozen=True)
class RunConfig:
    cache_dir: Path | None = None
    bits: int = MIN_BITS
    threads: int = 1
    P: int = 100
    N: int = 200
    P2: int = 50
    N2: int = 100

    def __post_init__(self):
        if self.bits < MIN_BITS:
            raise ValueError(f"precision must be at least {MIN_BITS} bits")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if not (0 < self.P2 <= self.P and 0 < self.N2 <= self.N):
            raise ValueError("need 0 < P2 <= P and 0 < N2 <= N")
        if self.P >= self.N or self.P2 >= self.N2:
            raise ValueError("need P < N and P2 < N2")

    @classmethod
    def from_env(cls, environ=None, **overrides) -> "RunConfig":
        """Defaults, then SIEGELGEN_* variables, then explicit non-None overrides."""
        environ = os.environ if environ is None else environ
        values = {}
        for f in fields(cls):
            raw = environ.get(ENV_PREFIX + f.name.upper())
            if raw is not None and raw != "":
                values[f.name] = _parse(f.name, raw)
        for name, v in overrides.items():
            if v is not None:
                values[name] = _parse(name, v) if isinstance(v, str) else v
        return replace(cls(), **values) if values else cls()


def _parse(name: str, raw: str):
    if name == "cache_dir":
        return Path(raw)
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{ENV_PREFIX}{name.upper()} must be an integer, got {raw!r}") from None
