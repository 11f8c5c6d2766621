"""Confidence intervals and importance rankings.

Bootstrap (percentile) intervals are used for the Sobol, delta and PAWN
indices. Mutual information uses a delete-one-group jackknife instead:
resampling with replacement duplicates points, which nearest-neighbour
estimators read as fine structure and so overestimate the information.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Mapping

import numpy as np
from scipy.special import ndtri

from .moment_independent import knn_mutual_information
from .sampling import rng_stream

__all__ = [
    "METHODS",
    "IndexEstimate",
    "ResamplingError",
    "percentile_interval",
    "bootstrap_replicates",
    "bootstrap_ci",
    "recenter",
    "bootstrap_weight_sets",
    "grouped_jackknife_ci",
    "rank_indices",
]

METHODS = ("sobol_total", "sobol_main", "mi", "delta", "pawn")


class ResamplingError(RuntimeError):
    """A statistic failed on one resample; ``index`` is the replicate number."""

    def __init__(self, index: int, cause: Exception):
        super().__init__(f"statistic failed on resample {index}: {cause}")
        self.index = index


@dataclass(frozen=True)
class IndexEstimate:
    method: str
    variable: str
    value: float
    ci_low: float = float("nan")
    ci_high: float = float("nan")
    rank: int = 0


def percentile_interval(replicates, level: float = 0.95):
    """Equal-tailed percentile interval of bootstrap replicates (along axis 0)."""
    tail = 50.0 * (1.0 - level)
    lo, hi = np.percentile(np.asarray(replicates, dtype=float), [tail, 100.0 - tail], axis=0)
    return lo, hi


def _as_tuple(data):
    return tuple(np.asarray(d) for d in data) if isinstance(data, (tuple, list)) else (np.asarray(data),)


def bootstrap_replicates(data, statistic: Callable, n_boot: int = 1000, seed: int = 0) -> np.ndarray:
    """Statistic evaluated on ``n_boot`` row resamples of ``data``.

    ``data`` is an array or a tuple of arrays sharing their first axis;
    rows are resampled jointly and passed to ``statistic`` positionally.
    """
    arrays = _as_tuple(data)
    n = len(arrays[0])
    if n == 0:
        raise ValueError("data is empty")
    if any(len(a) != n for a in arrays):
        raise ValueError("all data arrays must share their first dimension")
    rng = rng_stream(seed)
    reps = []
    for b in range(n_boot):
        idx = rng.integers(0, n, n)
        try:
            reps.append(statistic(*(a[idx] for a in arrays)))
        except Exception as exc:
            raise ResamplingError(b, exc) from exc
    return np.asarray(reps, dtype=float)


def recenter(replicates, estimate):
    """Shift replicates so their mean equals ``estimate`` (removes bootstrap bias)."""
    replicates = np.asarray(replicates, dtype=float)
    return replicates - (replicates.mean(axis=0) - np.asarray(estimate, dtype=float))


def bootstrap_ci(
    data,
    statistic: Callable,
    n_boot: int = 1000,
    level: float = 0.95,
    seed: int = 0,
    *,
    recentered: bool = False,
):
    """Percentile bootstrap interval ``(low, high)``.

    Vector-valued statistics give vector-valued bounds. With
    ``recentered`` the replicates are first shifted onto the full-sample
    estimate, for statistics that duplicated rows bias (kernel densities,
    KS distances); the interval then brackets the estimate.
    """
    if n_boot < 100:
        raise ValueError(f"need at least 100 bootstrap replicates, got {n_boot}")
    reps = bootstrap_replicates(data, statistic, n_boot, seed)
    if recentered:
        reps = recenter(reps, statistic(*_as_tuple(data)))
    return percentile_interval(reps, level)


def bootstrap_weight_sets(n: int, n_boot: int = 1000, seed: int = 0) -> Iterator[np.ndarray]:
    """Yield resampling multiplicities, one length-``n`` count vector per replicate.

    Draws the same resamples as :func:`bootstrap_replicates` with the same
    seed, expressed as counts instead of indices.
    """
    rng = rng_stream(seed)
    for _ in range(n_boot):
        yield np.bincount(rng.integers(0, n, n), minlength=n)


def grouped_jackknife_ci(
    x,
    y,
    mi_estimator: Callable = knn_mutual_information,
    groups: int = 1000,
    level: float = 0.95,
    seed: int = 0,
):
    """Delete-one-group jackknife interval for a two-sample statistic.

    Rows are shuffled with ``seed`` and cut into ``groups`` contiguous
    blocks. Each replicate drops one block; the jackknife variance is
    ``(G - 1) / G * sum((theta_g - mean(theta))**2)`` and the interval is
    the normal approximation around the full-sample estimate.

    Returns
    -------
    low, high : float
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    if y.size != n:
        raise ValueError("x and y differ in length")
    if groups < 2 or n < 2 * groups:
        raise ValueError(f"{n} points cannot form {groups} groups of at least 2")
    perm = rng_stream(seed).permutation(n)
    blocks = np.array_split(perm, groups)
    full = mi_estimator(x, y)
    keep = np.ones(n, dtype=bool)
    thetas = np.empty(groups)
    for g, block in enumerate(blocks):
        keep[block] = False
        thetas[g] = mi_estimator(x[keep], y[keep])
        keep[block] = True
    se = np.sqrt((groups - 1) / groups * np.sum((thetas - thetas.mean()) ** 2))
    z = ndtri(0.5 + level / 2.0)
    return float(full - z * se), float(full + z * se)


def rank_indices(values: Mapping[str, float]) -> dict[str, int]:
    """Importance ranks, 1 for the largest value.

    Ties keep the mapping's iteration (declaration) order.
    """
    if not values:
        raise ValueError("no values to rank")
    names = list(values)
    order = sorted(range(len(names)), key=lambda i: -values[names[i]])
    return {names[i]: r + 1 for r, i in enumerate(order)}
