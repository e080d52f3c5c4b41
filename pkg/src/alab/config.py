"""Run configuration: tolerances, caps, threads, output format, seed."""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

FORMATS = ("json", "csv", "table")


@dataclass(frozen=True)
class RunConfig:
    zero_tol: float = 1e-6          # relative prefilter for the exact zero test
    quad_tol: float = 1e-14         # relative |f| below which quadrature skips a node
    max_order: int = 100_000        # cap on cyclotomic orders
    max_grid: int = 4096            # cap on grid size per axis
    threads: int = 1
    format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.zero_tol <= 1e-4:
            raise ValueError("zero_tol must lie in (0, 1e-4]")
        if not 0 < self.quad_tol < 1:
            raise ValueError("quad_tol must lie in (0, 1)")
        if self.max_order < 1 or self.max_grid < 1 or self.threads < 1:
            raise ValueError("caps and thread count must be positive")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {', '.join(FORMATS)}")

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        """Read ``key = value`` lines; ``#`` starts a comment."""
        types = {f.name: f.type for f in fields(cls)}
        kw = {}
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, val = (x.strip() for x in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in types:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            val = val.strip("\"'")
            kw[key] = {"float": float, "int": int}.get(types[key], str)(val)
        return cls(**kw)

    def with_env(self) -> "RunConfig":
        """Cap the thread count by ALAB_THREADS when it is set."""
        env = os.environ.get("ALAB_THREADS")
        if not env:
            return self
        cap = int(env)
        if cap < 1:
            raise ValueError("ALAB_THREADS must be a positive integer")
        return replace(self, threads=min(self.threads, cap))
