"""Generic summary statistics.

All functions reduce along the last axis, so a batch of ``m`` datasets of
length ``n`` stored as an ``(m, n)`` array gives ``m`` summaries at once.
"""

from __future__ import annotations

import numpy as np


def raw_moment_summary(x, gamma: int):
    """``mean(x ** gamma)``."""
    x = np.asarray(x, dtype=float)
    gamma = int(gamma)
    if gamma < 1:
        raise ValueError("gamma must be a positive integer")
    # repeated products are much faster than the generic pow loop
    power = x
    for _ in range(gamma - 1):
        power = power * x
    return power.mean(axis=-1)


def quantile_summary(x, p):
    """Sample quantile with linear interpolation between order statistics
    (the ``x[floor(h)] + (h - floor(h)) * (x[floor(h)+1] - x[floor(h)])``,
    ``h = (n - 1) p`` convention)."""
    return np.quantile(np.asarray(x, dtype=float), p, axis=-1)


def upcrossing_summary(x, gamma: float):
    """Fraction of entries ``>= gamma``."""
    return (np.asarray(x, dtype=float) >= gamma).mean(axis=-1)


def g4_summary(x):
    """Sign concordance of the centred squared series with its lag-1 copy.

    With ``y = x**2 - mean(x**2)`` this is
    ``(#{y_j y_{j-1} >= 0} - #{y_j y_{j-1} < 0}) / n`` over ``j = 2..n``.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    if n < 2:
        raise ValueError("g4 needs at least two observations")
    sq = x * x
    y = sq - sq.mean(axis=-1, keepdims=True)
    prod = y[..., 1:] * y[..., :-1]
    concordant = (prod >= 0).sum(axis=-1)
    return (2 * concordant - (n - 1)) / n
