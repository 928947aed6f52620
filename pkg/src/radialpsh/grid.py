"""Sampled functions on an ascending grid of the t = log|z| axis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values ``vals`` sampled at strictly increasing nodes ``ts``."""

    ts: np.ndarray
    vals: np.ndarray

    def __post_init__(self):
        ts = np.array(self.ts, dtype=float)
        vals = np.array(self.vals, dtype=float)
        if ts.ndim != 1 or ts.shape != vals.shape:
            raise DomainError("ts and vals must be 1-D arrays of equal length")
        if ts.size < 2:
            raise DomainError("a grid function needs at least 2 nodes")
        if not np.all(np.diff(ts) > 0):
            raise DomainError("grid nodes must be strictly increasing (duplicate ts?)")
        if not (np.all(np.isfinite(ts)) and np.all(np.isfinite(vals))):
            raise DomainError("grid nodes and values must be finite")
        ts.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "vals", vals)

    def __len__(self):
        return self.ts.size

    @classmethod
    def sample(cls, f, ts):
        ts = np.asarray(ts, dtype=float)
        return cls(ts, np.asarray(f(ts), dtype=float))


def log_grid(t_min, t_max=-1e-3, num=4096):
    """Nodes on [t_min, t_max] (both negative) spaced evenly in log(-t)."""
    if not t_min < t_max < 0:
        raise DomainError("log_grid needs t_min < t_max < 0")
    return -np.geomspace(-t_min, -t_max, num)
