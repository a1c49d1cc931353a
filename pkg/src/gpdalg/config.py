"""Run configuration: arithmetic mode, tolerances, caps, parallelism."""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import SchemaError

ENV_CONFIG = "GPDALG_CONFIG"


@dataclass
class RunConfig:
    arithmetic: str = "exact"          # "exact" | "float"
    eigen_tol: float = 1e-12
    comparison_tol: float = 1e-9
    symbolic_term_cap: int = 10 ** 6
    search_node_cap: int = 10 ** 6
    parallelism: int = 1

    def __post_init__(self):
        if self.arithmetic not in ("exact", "float"):
            raise SchemaError("arithmetic", "must be 'exact' or 'float'")
        if self.eigen_tol <= 0 or self.comparison_tol <= 0:
            raise SchemaError("tolerances", "must be positive")
        if self.symbolic_term_cap <= 0 or self.search_node_cap <= 0:
            raise SchemaError("caps", "must be positive")
        if self.parallelism < 1:
            raise SchemaError("parallelism", "must be at least 1")

    @staticmethod
    def from_dict(data):
        known = {"arithmetic", "eigen_tol", "comparison_tol",
                 "symbolic_term_cap", "search_node_cap", "parallelism"}
        extra = set(data) - known
        if extra:
            raise SchemaError(sorted(extra)[0], "unknown config field")
        return RunConfig(**data)

    @staticmethod
    def load(path):
        with open(path, "r", encoding="utf-8") as fh:
            return RunConfig.from_dict(json.load(fh))

    @staticmethod
    def default():
        path = os.environ.get(ENV_CONFIG)
        if path and os.path.exists(path):
            return RunConfig.load(path)
        return RunConfig()

    def as_dict(self):
        return {"arithmetic": self.arithmetic, "eigen_tol": self.eigen_tol,
                "comparison_tol": self.comparison_tol,
                "symbolic_term_cap": self.symbolic_term_cap,
                "search_node_cap": self.search_node_cap,
                "parallelism": self.parallelism}


def parallel_map(fn, items, degree=1):
    """Map a pure function over items, threaded when degree > 1."""
    items = list(items)
    if degree <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=degree) as pool:
        return list(pool.map(fn, items))
