"""Goodness-of-fit helpers for Monte Carlo checks."""

import math

import numpy as np


def ks_critical(n, level=0.01):
    """Asymptotic one-sample Kolmogorov critical value, ``c(level) / sqrt(n)``."""
    coefficients = {0.01: 1.628, 0.05: 1.358, 0.10: 1.224}
    return coefficients[level] / math.sqrt(n)


def ks_statistic(samples, cdf, cdf_left=None):
    """``sup_x |ECDF(x) - F(x)|`` for a target that may have atoms.

    ``cdf`` is the right-continuous target CDF and ``cdf_left`` its left
    limit ``F(x-)`` (defaults to ``cdf``, i.e. a continuous target). Both
    must accept numpy arrays.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    values, counts = np.unique(x, return_counts=True)
    ecdf = np.cumsum(counts) / n
    ecdf_before = np.concatenate(([0.0], ecdf[:-1]))
    right = np.asarray(cdf(values), dtype=float)
    left = right if cdf_left is None else np.asarray(cdf_left(values), dtype=float)
    return float(max(np.max(np.abs(right - ecdf)), np.max(np.abs(left - ecdf_before))))


def ks_two_curves(cdf_a, cdf_b, grid):
    """Sup distance of two CDFs over a grid (used for exact-law comparisons)."""
    grid = np.asarray(grid, dtype=float)
    return float(np.max(np.abs(np.asarray(cdf_a(grid)) - np.asarray(cdf_b(grid)))))
