"""Density-based sensitivity: k-NN entropy and mutual information, delta index.

The nearest-neighbour estimators add symmetric uniform jitter of size
``1e-10 * range`` before neighbour searches. Exact duplicates would give
zero neighbour distances and corrupt the estimates.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.integrate import trapezoid
from scipy.spatial import cKDTree
from scipy.special import digamma

from .kde import gaussian_kde, silverman_bandwidth
from .sampling import rng_stream

__all__ = [
    "differential_entropy",
    "knn_mutual_information",
    "normalize_mi",
    "delta_partition_count",
    "delta_given_data",
]

JITTER = 1e-10
MI_WARN_BELOW = -0.05


def _jitter(v, rng):
    span = np.ptp(v)
    return v + rng.uniform(-1.0, 1.0, v.size) * JITTER * span


def _kth_neighbor_distance_1d(v_sorted, k):
    # the k nearest neighbours of a point in 1-D form a window of k+1
    # consecutive sorted points containing it; take the tightest window
    n = v_sorted.size
    idx = np.arange(n)
    best = np.full(n, np.inf)
    for shift in range(k + 1):
        start = idx - shift
        end = start + k
        ok = (start >= 0) & (end < n)
        s, e, i = start[ok], end[ok], idx[ok]
        d = np.maximum(v_sorted[i] - v_sorted[s], v_sorted[e] - v_sorted[i])
        best[i] = np.minimum(best[i], d)
    return best


def differential_entropy(y, k: int = 3, seed: int = 0) -> float:
    """Kozachenko-Leonenko estimate of the differential entropy (nats).

    ``H = psi(N) - psi(k) + mean(log(2 eps_k))`` with ``eps_k`` the distance
    from each point to its k-th nearest neighbour.
    """
    y = np.asarray(y, dtype=float).ravel()
    n = y.size
    if n < k + 2:
        raise ValueError(f"need at least k + 2 = {k + 2} values, got {n}")
    if np.ptp(y) == 0:
        raise ValueError("all values identical: entropy is -inf")
    v = np.sort(_jitter(y, rng_stream(seed)))
    eps = _kth_neighbor_distance_1d(v, k)
    return float(digamma(n) - digamma(k) + np.mean(np.log(2.0 * eps)))


def _marginal_counts(v, eps):
    # number of other points with |v_j - v_i| < eps_i, using the same
    # float distance as the tree query: over-wide window, then trim ends
    s = np.sort(v)
    n = s.size
    wide = eps * (1.0 + 1e-9)
    lo = np.searchsorted(s, v - wide, side="left")
    hi = np.searchsorted(s, v + wide, side="right")
    while True:
        trim_lo = (lo < hi) & (np.abs(s[np.minimum(lo, n - 1)] - v) >= eps)
        trim_hi = (hi > lo) & (np.abs(s[np.maximum(hi - 1, 0)] - v) >= eps)
        if not (trim_lo.any() or trim_hi.any()):
            break
        lo = lo + trim_lo
        hi = hi - trim_hi
    return hi - lo - 1


def knn_mutual_information(x, y, k: int = 3, seed: int = 0) -> float:
    """Kraskov-Stoegbauer-Grassberger mutual information, first algorithm.

    Both variables are scaled to unit variance, then neighbourhoods use
    the max-norm in the joint space. Small negative values are estimator
    bias and are returned as-is; values below -0.05 emit a warning.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    n = x.size
    if n < k + 2:
        raise ValueError(f"need at least k + 2 = {k + 2} samples, got {n}")
    sx, sy = np.std(x), np.std(y)
    if sx == 0 or sy == 0:
        raise ValueError("constant variable: mutual information undefined")
    rng = rng_stream(seed)
    x = _jitter((x - x.mean()) / sx, rng)
    y = _jitter((y - y.mean()) / sy, rng)
    xy = np.column_stack([x, y])
    dist, _ = cKDTree(xy).query(xy, k=[k + 1], p=np.inf)
    eps = dist[:, 0]
    nx = _marginal_counts(x, eps)
    ny = _marginal_counts(y, eps)
    mi = float(digamma(k) + digamma(n) - np.mean(digamma(nx + 1) + digamma(ny + 1)))
    if mi < MI_WARN_BELOW:
        warnings.warn(f"mutual information estimate {mi:.4f} is strongly negative; check N or ties", RuntimeWarning)
    return mi


def normalize_mi(eta: float) -> float:
    """Map mutual information to ``[0, 1)`` via ``sqrt(1 - exp(-2 eta))``.

    Negative inputs (estimator bias) are clamped to zero with a warning.
    """
    if eta < 0:
        warnings.warn(f"negative mutual information {eta:.4g} clamped to 0", RuntimeWarning)
        eta = 0.0
    return math.sqrt(-math.expm1(-2.0 * eta))


def delta_partition_count(n: int) -> int:
    """Number of equal-count conditioning classes for ``n`` samples.

    ``min(ceil(n ** (2 / (7 + tanh((1500 - n) / 500)))), 48)``: about 18
    classes at n = 5,000.
    """
    return int(min(math.ceil(n ** (2.0 / (7.0 + math.tanh((1500.0 - n) / 500.0)))), 48))


def delta_given_data(x, y, partitions: int | None = None, grid_points: int = 100) -> float:
    """Delta index of ``x`` on ``y`` from a single given-data sample.

    The sample is split into ``partitions`` equal-count classes by the
    rank of ``x``. Marginal and per-class output densities are Gaussian
    KDEs with the Silverman bandwidth, evaluated on ``grid_points`` evenly
    spaced points from ``min(y)`` to ``max(y)``::

        delta = sum_m (n_m / 2N) * trapz(|f_Y - f_{Y|m}|)

    A class whose outputs are all equal contributes ``|f_Y|``.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    n = x.size
    if y.size != n:
        raise ValueError(f"length mismatch: {n} vs {y.size}")
    m = delta_partition_count(n) if partitions is None else int(partitions)
    if m < 2:
        raise ValueError(f"need at least 2 partitions, got {m}")
    if n < 50 * m:
        raise ValueError(f"need at least 50 samples per partition: {n} samples for {m} partitions")
    grid = np.linspace(y.min(), y.max(), grid_points)
    f_y = gaussian_kde(y, grid).density
    order = np.argsort(x, kind="stable")
    edges = np.linspace(0, n, m + 1)
    # classes: ordinal rank r (1-based) in (edges[j], edges[j+1]]
    cls = np.searchsorted(edges, np.arange(1, n + 1), side="left") - 1
    total = 0.0
    for j in range(m):
        yc = y[order[cls == j]]
        if yc.size == 0:
            continue
        if np.ptp(yc) == 0:
            gap = np.abs(f_y)
        else:
            gap = np.abs(f_y - gaussian_kde(yc, grid, silverman_bandwidth(yc)).density)
        total += yc.size / (2.0 * n) * trapezoid(gap, grid)
    return float(total)
