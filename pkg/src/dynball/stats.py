"""Small statistical helpers used by the estimators."""
from __future__ import annotations

import numpy as np

Z95 = 1.96


def wilson_interval(successes, trials, z: float = Z95):
    """Wilson score interval for a binomial proportion.

    Vectorized over ``successes``; returns (low, high) arrays (or floats
    for scalar input).  Behaves sanely at 0 and ``trials`` successes,
    which matters here because dynamical-ball survival counts routinely
    hit zero.
    """
    k = np.asarray(successes, dtype=float)
    n = float(trials)
    if n <= 0:
        raise ValueError("trials must be positive")
    p = k / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = (z / denom) * np.sqrt(p * (1 - p) / n + z * z / (4 * n * n))
    lo = np.clip(center - half, 0.0, 1.0)
    hi = np.clip(center + half, 0.0, 1.0)
    if np.isscalar(successes):
        return float(lo), float(hi)
    return lo, hi


def wilson_halfwidth(successes, trials, z: float = Z95):
    lo, hi = wilson_interval(successes, trials, z)
    return (np.asarray(hi) - np.asarray(lo)) / 2.0
