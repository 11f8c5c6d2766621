"""Variance-based main and total effects by Monte Carlo integration.

For base matrices ``A`` (rows x_k), ``B`` (rows x'_k) and hybrids ``H_i``
(``B`` with column ``i`` from ``A``)::

    S_i   = mean( f(A) * (f(H_i) - f(B)) ) / V
    S_i^T = mean( (f(H_i) - f(B))**2 ) / (2 V)

``V`` is the unbiased variance of the pooled outputs of ``A`` and ``B``.
``N`` always means the number of rows of a base matrix, so a full
estimate costs ``(d + 2) * N`` model evaluations.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import ModelDefinition
from .sampling import sobol_matrices

__all__ = [
    "DegenerateModelError",
    "SobolEstimate",
    "SobolOutputs",
    "sample_variance",
    "evaluate_sobol_design",
    "sobol_from_outputs",
    "estimate_sobol",
]


class DegenerateModelError(ValueError):
    """The output variance is (numerically) zero."""


def sample_variance(y) -> float:
    """Unbiased sample variance ``sum((y - mean)**2) / (N - 1)``."""
    y = np.asarray(y, dtype=float).ravel()
    if y.size < 2:
        raise ValueError("need at least two values")
    # numpy reductions use fixed-order pairwise summation
    return float(np.sum((y - np.sum(y) / y.size) ** 2) / (y.size - 1))


@dataclass(frozen=True)
class SobolEstimate:
    variable: str
    main_effect: float
    total_effect: float
    n_evaluations: int
    main_se: float = float("nan")
    total_se: float = float("nan")

    @property
    def negative_main(self) -> bool:
        """Main effect below zero (Monte Carlo noise; reported unclipped)."""
        return self.main_effect < 0


@dataclass(frozen=True)
class SobolOutputs:
    """Model outputs on the Sobol design: ``f(A)``, ``f(B)`` and ``f(H_i)`` as columns."""

    f_a: np.ndarray
    f_b: np.ndarray
    f_hybrid: np.ndarray
    names: tuple[str, ...]

    @property
    def n_evaluations(self) -> int:
        return self.f_a.size + self.f_b.size + self.f_hybrid.size


def evaluate_sobol_design(model: ModelDefinition, n: int, seed: int, *, stream: tuple[int, ...] = ()) -> SobolOutputs:
    a, b, hybrids = sobol_matrices(model.input_specs, n, seed, stream=stream)
    f_a = np.asarray(model.evaluate(a), dtype=float)
    f_b = np.asarray(model.evaluate(b), dtype=float)
    f_h = np.column_stack([model.evaluate(h) for h in hybrids])
    return SobolOutputs(f_a, f_b, f_h, tuple(model.names))


def sobol_from_outputs(f_a, f_b, f_hybrid):
    """Main and total effects from design outputs.

    Returns
    -------
    main, total, main_se, total_se : ndarray, shape (d,)
        Standard errors are per-row term standard deviations over sqrt(N),
        treating the variance denominator as exact.
    """
    f_a = np.asarray(f_a, dtype=float)
    f_b = np.asarray(f_b, dtype=float)
    f_h = np.asarray(f_hybrid, dtype=float)
    pooled = np.concatenate([f_a, f_b])
    var = sample_variance(pooled)
    mean = np.mean(pooled)
    if var == 0 or var < 1e-12 * mean * mean:
        raise DegenerateModelError(f"output variance {var:g} is zero relative to the mean {mean:g}")
    diff = f_h - f_b[:, None]
    main_terms = f_a[:, None] * diff
    total_terms = 0.5 * diff * diff
    n = f_a.size
    main = np.sum(main_terms, axis=0) / n / var
    total = np.sum(total_terms, axis=0) / n / var
    main_se = np.std(main_terms, axis=0, ddof=1) / np.sqrt(n) / var
    total_se = np.std(total_terms, axis=0, ddof=1) / np.sqrt(n) / var
    return main, total, main_se, total_se


def estimate_sobol(model: ModelDefinition, n: int, seed: int, *, stream: tuple[int, ...] = ()) -> list[SobolEstimate]:
    """Main and total effect of every input of ``model``.

    Parameters
    ----------
    model : ModelDefinition
    n : int
        Rows per base matrix (at least 100).
    seed : int
        Master seed; the design is deterministic given ``(seed, stream)``.
    """
    if n < 100:
        raise ValueError(f"need N >= 100 base rows, got {n}")
    out = evaluate_sobol_design(model, n, seed, stream=stream)
    main, total, main_se, total_se = sobol_from_outputs(out.f_a, out.f_b, out.f_hybrid)
    return [
        SobolEstimate(name, float(main[i]), float(total[i]), out.n_evaluations, float(main_se[i]), float(total_se[i]))
        for i, name in enumerate(out.names)
    ]
