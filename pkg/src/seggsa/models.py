"""Segmented dry eucalypt fire spread model and analytic test models.

All model functions are vectorised: scalar or array arguments broadcast
with numpy rules. ``ModelDefinition.evaluate`` takes an ``N x d`` input
matrix and returns a length-``N`` output vector.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .sampling import RandomVariableSpec

__all__ = [
    "ModelDefinition",
    "WIND_THRESHOLD",
    "fuel_moisture_coeff",
    "fuel_hazard",
    "dry_eucalypt_rate",
    "fire_input_specs",
    "dry_eucalypt_model",
    "ishigami",
    "ishigami_model",
    "linear_gaussian",
    "linear_model",
]

# wind speed (km/h) at which the spread model switches branch
WIND_THRESHOLD = 5.0


@dataclass(frozen=True)
class ModelDefinition:
    """A deterministic model ``y = evaluate(X)`` over named inputs.

    ``indicator_index`` and ``threshold`` optionally mark the input whose
    value selects the model segment.
    """

    name: str
    input_specs: tuple[RandomVariableSpec, ...]
    evaluate: Callable[[np.ndarray], np.ndarray]
    indicator_index: int | None = None
    threshold: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "input_specs", tuple(self.input_specs))
        if self.indicator_index is not None:
            spec = self.input_specs[self.indicator_index]
            if self.threshold is None or not spec.lower <= self.threshold <= spec.upper:
                raise ValueError(f"threshold {self.threshold} outside the range of {spec.name}")

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.input_specs]

    @property
    def dimension(self) -> int:
        return len(self.input_specs)

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    def with_specs(self, specs: Sequence[RandomVariableSpec]) -> "ModelDefinition":
        return ModelDefinition(self.name, tuple(specs), self.evaluate, self.indicator_index, self.threshold)


def fuel_moisture_coeff(T, RH):
    """Moisture function phi*M_f from air temperature (deg C) and relative humidity (%).

    Raises ``ValueError`` if the moisture base ``2.76 + 0.124 RH - 0.0187 T``
    is not positive.
    """
    base = 2.76 + 0.124 * np.asarray(RH, dtype=float) - 0.0187 * np.asarray(T, dtype=float)
    if np.any(base <= 0):
        raise ValueError("fuel moisture base must be positive")
    return 18.35 * base ** -1.495


def fuel_hazard(FA):
    """Surface hazard score, near-surface hazard score and near-surface height.

    ``FA`` is fuel age in years; the exponents use months (12 * FA).
    """
    months = 12.0 * np.asarray(FA, dtype=float)
    fhs_s = 3.39 * (1.0 - np.exp(-0.03 * months))
    fhs_ns = 2.5 * (1.0 - np.exp(-0.22 * months))
    h_ns = 23.33 * (1.0 - np.exp(-0.025 * months))
    return fhs_s, fhs_ns, h_ns


def dry_eucalypt_rate(T, RH, U, FA):
    """Forward rate of spread R (m/h).

    Below or at the wind threshold the rate is ``30 phi``; above it a wind
    term ``1.03 * 1.531 (U-5)^0.858 FHS_s^0.93 (FHS_ns H_ns)^0.637`` is
    added inside the bracket. The 1.03 factor scales the wind term only,
    which keeps R continuous at U = 5.
    """
    phi = fuel_moisture_coeff(T, RH)
    fhs_s, fhs_ns, h_ns = fuel_hazard(FA)
    excess = np.maximum(np.asarray(U, dtype=float) - WIND_THRESHOLD, 0.0)
    wind = 1.531 * excess ** 0.858 * fhs_s ** 0.93 * (fhs_ns * h_ns) ** 0.637 * 1.03
    return (30.0 + wind) * phi


def fire_input_specs(mu_U: float = 4.7) -> tuple[RandomVariableSpec, ...]:
    """Input laws (T, RH, U, FA) with the wind-speed mean set to ``mu_U``."""
    return (
        RandomVariableSpec("T", 25.0, 4.0, 10.0, 40.0),
        RandomVariableSpec("RH", 20.0, 2.0, 14.0, 26.0),
        RandomVariableSpec("U", float(mu_U), 0.5, 0.5, 9.5),
        RandomVariableSpec("FA", 4.0, 0.8, 1.5, 6.5),
    )


def _fire_evaluate(X):
    X = np.asarray(X, dtype=float)
    return dry_eucalypt_rate(X[:, 0], X[:, 1], X[:, 2], X[:, 3])


def dry_eucalypt_model(mu_U: float = 4.7) -> ModelDefinition:
    return ModelDefinition("dry_eucalypt", fire_input_specs(mu_U), _fire_evaluate, indicator_index=2, threshold=WIND_THRESHOLD)


def ishigami(x1, x2, x3, a=7.0, b=0.1):
    s1 = np.sin(x1)
    return s1 + a * np.sin(x2) ** 2 + b * np.asarray(x3) ** 4 * s1


def ishigami_model(a: float = 7.0, b: float = 0.1) -> ModelDefinition:
    """Ishigami function with three uniform(-pi, pi) inputs."""
    specs = tuple(RandomVariableSpec.uniform(f"x{i}", -np.pi, np.pi) for i in (1, 2, 3))
    return ModelDefinition("ishigami", specs, lambda X: ishigami(X[:, 0], X[:, 1], X[:, 2], a, b))


def linear_gaussian(x, coeffs):
    """Dot product ``coeffs . x`` along the last axis."""
    return np.asarray(x, dtype=float) @ np.asarray(coeffs, dtype=float)


def linear_model(coeffs: Sequence[float], bound: float = 8.0) -> ModelDefinition:
    """Linear model over independent standard normals cut at +/- ``bound``."""
    coeffs = np.asarray(coeffs, dtype=float)
    specs = tuple(RandomVariableSpec(f"x{i + 1}", 0.0, 1.0, -bound, bound) for i in range(len(coeffs)))
    return ModelDefinition("linear", specs, lambda X: linear_gaussian(X, coeffs))
