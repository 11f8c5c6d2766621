"""Stratified sampling of independent truncated-normal inputs.

Truncation is realised through the inverse CDF of the truncated normal
law, which is equal in distribution to drawing from the normal and
redrawing every value that falls outside ``[lower, upper]``, but keeps
Latin hypercube strata intact.

Normal CDF and quantile come from :func:`scipy.special.ndtr` and
:func:`scipy.special.ndtri` (Cephes rational approximations, accurate to
roughly machine precision over the whole real line).

Random streams
--------------
Every stochastic routine takes a single integer ``seed``. Independent
sub-streams are derived with :func:`rng_stream`, which feeds
``SeedSequence(seed, spawn_key=key)`` with a tuple of non-negative
integer counters. The same ``(seed, key)`` always yields the same stream,
independent of call order or thread scheduling.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import ndtr, ndtri

__all__ = [
    "RandomVariableSpec",
    "SampleSet",
    "rng_stream",
    "truncnorm_cdf",
    "truncnorm_inverse_cdf",
    "truncnorm_mean",
    "lhs_sample",
    "random_sample",
    "sobol_matrices",
]

# stream counters used by sobol_matrices
STREAM_A = 1
STREAM_B = 2


@dataclass(frozen=True)
class RandomVariableSpec:
    """Normal law N(mean, std_dev**2) truncated to ``[lower, upper]``."""

    name: str
    mean: float
    std_dev: float
    lower: float
    upper: float

    def __post_init__(self):
        if not self.std_dev > 0:
            raise ValueError(f"{self.name}: std_dev must be positive, got {self.std_dev}")
        if not self.lower < self.upper:
            raise ValueError(f"{self.name}: need lower < upper, got [{self.lower}, {self.upper}]")
        if not self.lower <= self.mean <= self.upper:
            raise ValueError(f"{self.name}: mean {self.mean} outside [{self.lower}, {self.upper}]")

    @classmethod
    def uniform(cls, name: str, lower: float, upper: float) -> "RandomVariableSpec":
        """Uniform-like spec: a normal 1000 widths wide, truncated to the interval.

        The density varies by less than 1e-6 relative over ``[lower, upper]``.
        """
        return cls(name, 0.5 * (lower + upper), 1000.0 * (upper - lower), lower, upper)

    @property
    def alpha(self) -> float:
        return (self.lower - self.mean) / self.std_dev

    @property
    def beta(self) -> float:
        return (self.upper - self.mean) / self.std_dev


@dataclass
class SampleSet:
    """Input matrix (rows are samples) with optional model outputs."""

    specs: tuple[RandomVariableSpec, ...]
    inputs: np.ndarray
    seed: int
    outputs: np.ndarray | None = field(default=None)

    def __post_init__(self):
        self.specs = tuple(self.specs)
        if self.inputs.ndim != 2 or self.inputs.shape[1] != len(self.specs):
            raise ValueError(f"inputs must be N x {len(self.specs)}, got {self.inputs.shape}")
        if self.outputs is not None and len(self.outputs) != len(self.inputs):
            raise ValueError("outputs length does not match the number of input rows")

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.specs]

    def __len__(self) -> int:
        return len(self.inputs)

    def evaluate(self, model) -> "SampleSet":
        """Return a copy with ``outputs`` filled by ``model.evaluate``."""
        return SampleSet(self.specs, self.inputs, self.seed, np.asarray(model.evaluate(self.inputs), dtype=float))


def rng_stream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the sub-stream ``key`` of the master ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key)))


def truncnorm_cdf(x, spec: RandomVariableSpec):
    """CDF of the truncated normal law of ``spec``."""
    x = np.asarray(x, dtype=float)
    a, b = spec.alpha, spec.beta
    z = np.clip((x - spec.mean) / spec.std_dev, a, b)
    if a >= 0:
        # both bounds in the right tail; work with upper-tail probabilities
        return (ndtr(-a) - ndtr(-z)) / (ndtr(-a) - ndtr(-b))
    return (ndtr(z) - ndtr(a)) / (ndtr(b) - ndtr(a))


def truncnorm_inverse_cdf(p, spec: RandomVariableSpec):
    """Quantile function of the truncated normal law of ``spec``.

    ``p`` must lie strictly inside (0, 1); works elementwise on arrays.
    """
    p = np.asarray(p, dtype=float)
    if np.any(~((p > 0) & (p < 1))):
        raise ValueError("probabilities must lie strictly inside (0, 1)")
    a, b = spec.alpha, spec.beta
    if a >= 0:
        qa, qb = ndtr(-a), ndtr(-b)
        z = -ndtri(qa - p * (qa - qb))
    else:
        pa, pb = ndtr(a), ndtr(b)
        z = ndtri(pa + p * (pb - pa))
    z = np.clip(z, a, b)
    return spec.mean + spec.std_dev * z


def truncnorm_mean(spec: RandomVariableSpec) -> float:
    """Closed-form mean of the truncated normal law."""
    a, b = spec.alpha, spec.beta
    phi = lambda t: np.exp(-0.5 * t * t) / np.sqrt(2 * np.pi)
    mass = ndtr(b) - ndtr(a) if a < 0 else ndtr(-a) - ndtr(-b)
    return spec.mean + spec.std_dev * (phi(a) - phi(b)) / mass


def _open_unit(rng: np.random.Generator, size) -> np.ndarray:
    # uniform on the open interval (0, 1)
    return rng.uniform(np.nextafter(0.0, 1.0), 1.0, size=size)


def lhs_sample(
    specs: Sequence[RandomVariableSpec],
    n: int,
    seed: int,
    *,
    centered: bool = False,
    stream: tuple[int, ...] = (),
) -> SampleSet:
    """Latin hypercube sample of ``n`` rows.

    Each column receives exactly one point in each of the ``n``
    equal-probability strata of its truncated-normal law. Within a stratum
    the point is placed uniformly at random, or at the stratum's
    probability midpoint when ``centered`` is true.

    Parameters
    ----------
    specs : sequence of RandomVariableSpec
        One entry per column.
    n : int
        Number of rows, at least 2.
    seed : int
        Master seed.
    stream : tuple of int
        Sub-stream counters appended to the seed (see :func:`rng_stream`).
    """
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    specs = tuple(specs)
    rng = rng_stream(seed, *stream)
    cols = []
    for spec in specs:
        strata = rng.permutation(n)
        offset = 0.5 if centered else _open_unit(rng, n)
        cols.append(truncnorm_inverse_cdf((strata + offset) / n, spec))
    inputs = np.column_stack(cols) if cols else np.empty((n, 0))
    return SampleSet(specs, inputs, seed)


def random_sample(
    specs: Sequence[RandomVariableSpec],
    n: int,
    seed: int,
    *,
    stream: tuple[int, ...] = (),
) -> SampleSet:
    """Independent (plain Monte Carlo) draws of ``n`` rows.

    Use this instead of :func:`lhs_sample` when a downstream estimator
    assumes independent observations: nearest-neighbour entropy, for
    instance, is biased by ``log(k) - digamma(k)`` on outputs that are
    monotone in a single stratified input.
    """
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    specs = tuple(specs)
    rng = rng_stream(seed, *stream)
    cols = [truncnorm_inverse_cdf(_open_unit(rng, n), spec) for spec in specs]
    inputs = np.column_stack(cols) if cols else np.empty((n, 0))
    return SampleSet(specs, inputs, seed)


def sobol_matrices(specs: Sequence[RandomVariableSpec], n: int, seed: int, *, stream: tuple[int, ...] = ()):
    """Base matrices ``A``, ``B`` and the hybrid matrices for Sobol estimation.

    ``A`` and ``B`` are independent LHS draws. Hybrid ``i`` is ``B`` with
    its column ``i`` taken from ``A``, so it shares only coordinate ``i``
    with ``A`` and every other coordinate with ``B``.

    Returns
    -------
    A, B : ndarray, shape (n, d)
    hybrids : list of d ndarrays, shape (n, d)
    """
    a = lhs_sample(specs, n, seed, stream=stream + (STREAM_A,)).inputs
    b = lhs_sample(specs, n, seed, stream=stream + (STREAM_B,)).inputs
    hybrids = []
    for i in range(a.shape[1]):
        h = b.copy()
        h[:, i] = a[:, i]
        hybrids.append(h)
    return a, b, hybrids
