"""PAWN index from a generic input-output sample.

The range of an input is cut into equal-count conditioning intervals. In
each interval the Kolmogorov-Smirnov distance between the conditional
output sample and the full (unconditional) output sample is computed,
and the index is a statistic (mean by default) of those distances.

The conditional samples are subsets of the unconditional one, so both
empirical CDFs only jump at sample values and the KS supremum is exact
when evaluated at the distinct sorted outputs. KS depends on ranks
only, so the index is unchanged by strictly increasing maps of ``y``.

Points whose input value ties across an interval boundary all go to the
lower interval.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["PawnEstimate", "STATS", "ks_distance", "pawn_given_data", "pawn_replicates"]

STATS = {"mean": np.mean, "median": np.median, "max": np.max}


@dataclass(frozen=True)
class PawnEstimate:
    variable: str
    value: float
    per_interval_ks: np.ndarray
    stat: str = "mean"


def ks_distance(sample_a, sample_b) -> float:
    """Supremum distance between the empirical CDFs of two samples."""
    a = np.sort(np.asarray(sample_a, dtype=float).ravel())
    b = np.sort(np.asarray(sample_b, dtype=float).ravel())
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    pts = np.concatenate([a, b])
    fa = np.searchsorted(a, pts, side="right") / a.size
    fb = np.searchsorted(b, pts, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


class _Prepared:
    """Sort orders shared by repeated evaluations on the same (x, y)."""

    def __init__(self, x, y):
        self.order = np.argsort(x, kind="stable")
        self.xs = x[self.order]
        uniq, pos = np.unique(y, return_inverse=True)
        self.n_unique = uniq.size
        self.pos = pos.ravel()[self.order]
        # index of the first occurrence of each sorted x value
        self.first = np.searchsorted(self.xs, self.xs, side="left")

    def ks(self, n_intervals, weights=None):
        """Per-interval KS distances; ``weights`` are given in original row order."""
        n = self.xs.size
        w = np.ones(n, dtype=np.int64) if weights is None else np.asarray(weights, dtype=np.int64)[self.order]
        before = np.cumsum(w) - w
        total = before[-1] + w[-1]
        ids = np.minimum((before * n_intervals) // total, n_intervals - 1)
        ids = ids[self.first]
        cuts = np.searchsorted(ids, np.arange(n_intervals + 1), side="left")
        c_all = np.cumsum(np.bincount(self.pos, weights=w, minlength=self.n_unique))
        c_left = np.concatenate([[0.0], c_all[:-1]])
        # pack (output position, weight) into one key: a plain integer sort
        # is much faster than an argsort
        base = np.int64(w.max()) + 1
        keys = self.pos.astype(np.int64) * base + w
        out = np.empty(n_intervals)
        for j in range(n_intervals):
            s, e = cuts[j], cuts[j + 1]
            kj = np.sort(keys[s:e])
            p, cw = kj // base, np.cumsum(kj % base)
            if p.size == 0 or cw[-1] == 0:
                raise ValueError(f"conditioning interval {j} is empty (too many ties in x)")
            # both CDFs are constant between conditional jumps, so the
            # supremum is attained at a jump (right limit) or just before it
            last = np.append(p[1:] != p[:-1], True)
            p, right = p[last], cw[last]
            left = np.concatenate([[0], right[:-1]])
            nj = right[-1]
            out[j] = max(np.max(np.abs(c_all[p] / total - right / nj)),
                         np.max(np.abs(c_left[p] / total - left / nj)))
        return out


def _check(x, y, n_intervals, stat):
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if n_intervals < 2:
        raise ValueError(f"need at least 2 conditioning intervals, got {n_intervals}")
    if x.size < 20 * n_intervals:
        raise ValueError(f"need at least {20 * n_intervals} samples for {n_intervals} intervals")
    if stat not in STATS:
        raise ValueError(f"unknown stat {stat!r}; choose from {sorted(STATS)}")
    return x, y


def pawn_given_data(
    x,
    y,
    n_intervals: int = 10,
    stat: str = "mean",
    *,
    variable: str = "",
    weights=None,
) -> PawnEstimate:
    """PAWN index of input ``x`` on output ``y``.

    Parameters
    ----------
    x, y : array_like
        Paired samples, at least ``20 * n_intervals`` long.
    n_intervals : int
        Number of equal-count conditioning intervals.
    stat : {"mean", "median", "max"}
        Statistic applied to the per-interval KS distances.
    weights : array_like of int, optional
        Multiplicity of each row, e.g. bootstrap counts. Rows with weight
        zero are absent. Equivalent to repeating rows.
    """
    x, y = _check(x, y, n_intervals, stat)
    ks = _Prepared(x, y).ks(n_intervals, weights)
    return PawnEstimate(variable, float(STATS[stat](ks)), ks, stat)


def pawn_replicates(x, y, weight_sets, n_intervals: int = 10, stat: str = "mean") -> np.ndarray:
    """PAWN index for each row of ``weight_sets`` (resampling multiplicities)."""
    x, y = _check(x, y, n_intervals, stat)
    prep = _Prepared(x, y)
    return np.array([STATS[stat](prep.ks(n_intervals, w)) for w in weight_sets])
