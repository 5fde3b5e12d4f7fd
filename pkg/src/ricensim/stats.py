"""Small statistics helpers for the experiment harness."""
from __future__ import annotations

import math

import numpy as np


def pearson(xs, ys) -> float | None:
    """Pearson correlation, or None when either side has zero variance."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.size < 2:
        raise ValueError("need at least 2 samples")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = math.sqrt(float(dx @ dx))
    sy = math.sqrt(float(dy @ dy))
    if sx == 0.0 or sy == 0.0:
        return None
    return float(dx @ dy) / (sx * sy)


def zscore_by_group(values, group_ids) -> np.ndarray:
    """Z-normalize within groups using the population std.

    Groups with fewer than 2 members, or with zero variance, map to 0.
    """
    v = np.asarray(values, dtype=np.float64)
    g = np.asarray(group_ids)
    if v.shape != g.shape:
        raise ValueError(f"length mismatch: {v.shape} vs {g.shape}")
    out = np.zeros_like(v)
    for gid in np.unique(g):
        idx = g == gid
        members = v[idx]
        if members.size < 2:
            continue
        std = members.std()
        if std == 0.0:
            continue
        out[idx] = (members - members.mean()) / std
    return out
