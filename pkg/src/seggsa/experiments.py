"""Studies on the segmented fire spread model.

* :func:`run_point_study` -- all four indices with intervals and ranks at one
  wind-speed mean.
* :func:`sweep_mu` -- the point study over a grid of wind-speed means.
* :func:`detect_crossover` -- where one input overtakes another along a sweep.
* :func:`conditional_profile` -- output variance, entropy, PDF and CDF with
  one input fixed at mean +/- 0, 1, 2 standard deviations.
* :func:`convergence_study` and :func:`timing_study` -- estimator stability and
  cost against sample size.

Randomness: every estimate draws from ``rng_stream(seed, mu_key, method,
replicate)`` where ``mu_key`` is the wind-speed mean in m/h (integer
km/h * 1000). A sweep point therefore reproduces the stand-alone point
study at the same mean and seed, and results do not depend on thread
count or execution order.
"""
from __future__ import annotations

import enum
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import partial
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import stats

from .kde import gaussian_kde
from .models import ModelDefinition, dry_eucalypt_model
from .moment_independent import delta_given_data, differential_entropy, knn_mutual_information
from .pawn import pawn_given_data, pawn_replicates
from .resampling import (
    IndexEstimate,
    bootstrap_ci,
    bootstrap_weight_sets,
    grouped_jackknife_ci,
    percentile_interval,
    rank_indices,
    recenter,
)
from .sampling import lhs_sample, random_sample
from .sobol import evaluate_sobol_design, sample_variance, sobol_from_outputs

__all__ = [
    "StageLabel",
    "stage_classify",
    "SampleSizes",
    "EstimatorSettings",
    "PointStudy",
    "SweepResult",
    "ConditionalProfile",
    "ConvergenceResult",
    "TimingRecord",
    "estimate_method",
    "run_point_study",
    "sweep_mu",
    "detect_crossover",
    "peak_location",
    "conditional_profile",
    "convergence_study",
    "ranking_instability",
    "timing_study",
    "child_seed",
    "max_threads",
]

GSA_METHODS = ("sobol", "mi", "delta", "pawn")
_METHOD_CODE = {"sobol": 11, "mi": 12, "delta": 13, "pawn": 14}
_CI_CODE = 100
_PROFILE_CODE = 31


class StageLabel(str, enum.Enum):
    STAGE1 = "Stage1"
    STAGE2 = "Stage2"
    STAGE3 = "Stage3"


def stage_classify(mu_U: float) -> StageLabel:
    """Stage of the wind-speed mean: 1 on (2, 3.5], 3 on (3.5, 6.5), 2 on [6.5, 8)."""
    if not 2.0 < mu_U < 8.0:
        raise ValueError(f"wind-speed mean {mu_U} outside (2, 8) km/h")
    if mu_U <= 3.5:
        return StageLabel.STAGE1
    if mu_U >= 6.5:
        return StageLabel.STAGE2
    return StageLabel.STAGE3


@dataclass(frozen=True)
class SampleSizes:
    """Samples per estimate. Sobol counts base-matrix rows, the rest total rows."""

    sobol: int = 4_000
    mi: int = 10_000
    delta: int = 5_000
    pawn: int = 2_000_000

    def scaled(self, factor: float) -> "SampleSizes":
        return SampleSizes(*(max(2, int(round(v * factor))) for v in asdict(self).values()))

    def __getitem__(self, method: str) -> int:
        return getattr(self, method)


@dataclass(frozen=True)
class EstimatorSettings:
    knn_k: int = 3
    delta_partitions: int | None = None  # None: size-dependent rule
    delta_grid: int = 100
    pawn_intervals: int = 10
    pawn_stat: str = "mean"
    n_boot: int = 1000
    jackknife_groups: int = 1000
    level: float = 0.95
    with_ci: bool = True


def child_seed(seed: int, *key: int) -> int:
    """Integer seed derived from ``seed`` and counters ``key``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


def max_threads() -> int:
    """Worker cap from ``SEGGSA_MAX_THREADS`` (default: CPU count)."""
    env = os.environ.get("SEGGSA_MAX_THREADS")
    return max(1, int(env)) if env else (os.cpu_count() or 1)


def _mu_key(mu_U: float) -> int:
    return int(round(mu_U * 1000))


def estimate_method(
    method: str,
    model: ModelDefinition,
    n: int,
    seed: int,
    stream: tuple[int, ...],
    settings: EstimatorSettings = EstimatorSettings(),
):
    """Point estimates (and intervals when ``settings.with_ci``) for one method.

    Returns
    -------
    dict
        ``method name -> list of (variable, value, ci_low, ci_high)``;
        the Sobol method yields both ``sobol_total`` and ``sobol_main``.
    """
    names = model.names
    nan = float("nan")
    ci_seed = child_seed(seed, *stream, _CI_CODE)
    if method == "sobol":
        out = evaluate_sobol_design(model, n, seed, stream=stream)
        main, total, _, _ = sobol_from_outputs(out.f_a, out.f_b, out.f_hybrid)
        lo = hi = np.full(2 * len(names), nan)
        if settings.with_ci:
            stat = lambda a, b, h: np.concatenate(sobol_from_outputs(a, b, h)[:2])
            lo, hi = bootstrap_ci((out.f_a, out.f_b, out.f_hybrid), stat, settings.n_boot, settings.level, ci_seed)
        d = len(names)
        return {
            "sobol_total": [(v, total[i], lo[d + i], hi[d + i]) for i, v in enumerate(names)],
            "sobol_main": [(v, main[i], lo[i], hi[i]) for i, v in enumerate(names)],
        }

    sample = lhs_sample(model.input_specs, n, seed, stream=stream).evaluate(model)
    y = sample.outputs
    rows = []
    for i, v in enumerate(names):
        x = sample.inputs[:, i]
        lo = hi = nan
        if method == "mi":
            est = partial(knn_mutual_information, k=settings.knn_k, seed=child_seed(seed, *stream, i))
            value = est(x, y)
            if settings.with_ci:
                lo, hi = grouped_jackknife_ci(x, y, est, settings.jackknife_groups, settings.level, ci_seed)
        elif method == "delta":
            est = partial(delta_given_data, partitions=settings.delta_partitions, grid_points=settings.delta_grid)
            value = est(x, y)
            if settings.with_ci:
                lo, hi = bootstrap_ci((x, y), est, settings.n_boot, settings.level, ci_seed, recentered=True)
        elif method == "pawn":
            value = pawn_given_data(x, y, settings.pawn_intervals, settings.pawn_stat).value
            if settings.with_ci:
                reps = pawn_replicates(x, y, bootstrap_weight_sets(n, settings.n_boot, ci_seed),
                                       settings.pawn_intervals, settings.pawn_stat)
                lo, hi = percentile_interval(recenter(reps, value), settings.level)
        else:
            raise ValueError(f"unknown method {method!r}")
        rows.append((v, value, lo, hi))
    return {method: rows}


@dataclass
class PointStudy:
    mu_U: float
    stage: StageLabel
    estimates: dict[str, list[IndexEstimate]]

    def values(self, method: str) -> dict[str, float]:
        return {e.variable: e.value for e in self.estimates[method]}

    def ranking(self, method: str) -> tuple[str, ...]:
        """Variables from most to least important."""
        return tuple(e.variable for e in sorted(self.estimates[method], key=lambda e: e.rank))


def _rank_rows(method, rows):
    ranks = rank_indices({v: val for v, val, _, _ in rows})
    return [IndexEstimate(method, v, float(val), float(lo), float(hi), ranks[v]) for v, val, lo, hi in rows]


def run_point_study(
    mu_U: float,
    sizes: SampleSizes = SampleSizes(),
    seed: int = 0,
    settings: EstimatorSettings = EstimatorSettings(),
    *,
    methods: Sequence[str] = GSA_METHODS,
    replicate: int = 0,
    model_factory: Callable[[float], ModelDefinition] = dry_eucalypt_model,
) -> PointStudy:
    """All requested indices, with intervals and ranks, at wind-speed mean ``mu_U``."""
    stage = stage_classify(mu_U)
    model = model_factory(mu_U)
    estimates: dict[str, list[IndexEstimate]] = {}
    for method in methods:
        stream = (_mu_key(mu_U), _METHOD_CODE[method], replicate)
        for name, rows in estimate_method(method, model, sizes[method], seed, stream, settings).items():
            estimates[name] = _rank_rows(name, rows)
    return PointStudy(float(mu_U), stage, estimates)


@dataclass
class SweepResult:
    grid: np.ndarray
    points: list[PointStudy]
    config: dict = field(default_factory=dict)

    def series(self, method: str, variable: str) -> np.ndarray:
        return np.array([p.values(method)[variable] for p in self.points])

    def stages(self) -> list[StageLabel]:
        return [p.stage for p in self.points]


def _sweep_grid(start, stop, step):
    if not step > 0:
        raise ValueError("step must be positive")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    grid = np.round(start + step * np.arange(count), 10)
    # the stages are defined on the open interval (2, 8)
    return grid[(grid > 2.0) & (grid < 8.0)]


def sweep_mu(
    start: float = 2.0,
    stop: float = 8.0,
    step: float = 0.1,
    sizes: SampleSizes = SampleSizes(),
    seed: int = 0,
    settings: EstimatorSettings = EstimatorSettings(with_ci=False),
    *,
    methods: Sequence[str] = GSA_METHODS,
    workers: int | None = None,
    model_factory: Callable[[float], ModelDefinition] = dry_eucalypt_model,
) -> SweepResult:
    """Point study at every grid value of the wind-speed mean.

    Grid values on or outside the stage domain boundaries 2 and 8 km/h
    are skipped.
    """
    grid = _sweep_grid(start, stop, step)
    run = partial(run_point_study, sizes=sizes, seed=seed, settings=settings, methods=methods,
                  model_factory=model_factory)
    workers = min(workers or max_threads(), max(1, len(grid)))
    if workers == 1:
        points = [run(mu) for mu in grid]
    else:
        with ThreadPoolExecutor(workers) as pool:
            points = list(pool.map(run, grid))
    config = {"start": start, "stop": stop, "step": step, "seed": seed, "sizes": asdict(sizes), "settings": asdict(settings)}
    return SweepResult(grid, points, config)


def detect_crossover(sweep: SweepResult, method: str, var_a: str, var_b: str) -> float | None:
    """First wind-speed mean where ``index_a - index_b`` changes sign.

    Refined by linear interpolation between the bracketing grid points.
    ``None`` when the difference never changes sign.
    """
    diff = sweep.series(method, var_a) - sweep.series(method, var_b)
    grid = sweep.grid
    for j in range(len(diff) - 1):
        d0, d1 = diff[j], diff[j + 1]
        if d0 == 0:
            return float(grid[j])
        if np.sign(d0) != np.sign(d1):
            if d1 == 0:
                return float(grid[j + 1])
            return float(grid[j] + (grid[j + 1] - grid[j]) * d0 / (d0 - d1))
    return None


def peak_location(sweep: SweepResult, method: str, variable: str) -> float:
    """Grid value where the raw index of ``variable`` is largest."""
    return float(sweep.grid[int(np.argmax(sweep.series(method, variable)))])


@dataclass
class ConditionalProfile:
    variable: str
    fix_values: np.ndarray
    variances: np.ndarray
    entropies: np.ndarray
    grid: np.ndarray
    pdf_curves: np.ndarray  # (5, len(grid))
    cdf_curves: np.ndarray  # (5, len(grid))
    baseline_variance: float
    baseline_entropy: float
    baseline_pdf: np.ndarray
    baseline_cdf: np.ndarray
    excess_kurtosis: np.ndarray
    baseline_excess_kurtosis: float


def _ecdf(y_sorted, grid):
    return np.searchsorted(y_sorted, grid, side="right") / y_sorted.size


def conditional_profile(
    variable: str,
    mu_U: float = 4.7,
    n: int = 2_000_000,
    seed: int = 0,
    *,
    k: int = 3,
    grid_points: int = 512,
    model_factory: Callable[[float], ModelDefinition] = dry_eucalypt_model,
) -> ConditionalProfile:
    """Output distribution with ``variable`` fixed at mean + (-2, -1, 0, 1, 2) std.

    One independent (not Latin hypercube) sample of all inputs is drawn;
    each conditional run overwrites the fixed column of that same sample,
    so differences between fixed values are not blurred by sampling
    noise. Independent draws keep the nearest-neighbour entropy unbiased:
    with the wind term switched off the output depends on one or two
    inputs only, and stratified values of a single input are too evenly
    spaced for that estimator.
    """
    model = model_factory(mu_U)
    if variable not in model.names:
        raise ValueError(f"unknown variable {variable!r}; expected one of {model.names}")
    i = model.index_of(variable)
    spec = model.input_specs[i]
    fix = spec.mean + spec.std_dev * np.arange(-2.0, 3.0)
    if np.any(fix < spec.lower) or np.any(fix > spec.upper):
        raise ValueError(f"fixed values {fix} leave the range [{spec.lower}, {spec.upper}] of {variable}")
    base = random_sample(model.input_specs, n, seed, stream=(_mu_key(mu_U), _PROFILE_CODE))
    y0 = model.evaluate(base.inputs)
    h_seed = child_seed(seed, _mu_key(mu_U), _PROFILE_CODE)
    outputs = []
    for v in fix:
        X = base.inputs.copy()
        X[:, i] = v
        outputs.append(model.evaluate(X))
    lo = min(y0.min(), min(o.min() for o in outputs))
    hi = max(y0.max(), max(o.max() for o in outputs))
    span = hi - lo
    grid = np.linspace(lo - 0.02 * span, hi + 0.02 * span, grid_points)
    pdf = lambda y: gaussian_kde(y, grid, binned=True).density
    cdf = lambda y: _ecdf(np.sort(y), grid)
    return ConditionalProfile(
        variable=variable,
        fix_values=fix,
        variances=np.array([sample_variance(o) for o in outputs]),
        entropies=np.array([differential_entropy(o, k, h_seed) for o in outputs]),
        grid=grid,
        pdf_curves=np.array([pdf(o) for o in outputs]),
        cdf_curves=np.array([cdf(o) for o in outputs]),
        baseline_variance=sample_variance(y0),
        baseline_entropy=differential_entropy(y0, k, h_seed),
        baseline_pdf=pdf(y0),
        baseline_cdf=cdf(y0),
        excess_kurtosis=np.array([stats.kurtosis(o) for o in outputs]),
        baseline_excess_kurtosis=float(stats.kurtosis(y0)),
    )


@dataclass
class ConvergenceResult:
    """Per method: sample sizes, mean index values and the ranking of the means."""

    sizes: dict[str, list[int]]
    means: dict[str, list[dict[str, float]]]
    rankings: dict[str, list[tuple[str, ...]]]
    repetitions: int


def default_convergence_grid(sizes: SampleSizes = SampleSizes()) -> dict[str, list[int]]:
    return {m: [max(2, sizes[m] // d) for d in (8, 4, 2, 1)] for m in GSA_METHODS}


def convergence_study(
    mu_U: float = 4.7,
    sample_size_grid: Mapping[str, Sequence[int]] | None = None,
    repetitions: int = 100,
    seed: int = 0,
    settings: EstimatorSettings = EstimatorSettings(with_ci=False),
    *,
    workers: int | None = None,
    model_factory: Callable[[float], ModelDefinition] = dry_eucalypt_model,
) -> ConvergenceResult:
    """Mean index values over ``repetitions`` independent estimates per sample size.

    Repetition ``r`` uses the same random stream as ``run_point_study(...,
    replicate=r)``, so one repetition at the point-study sizes reproduces it.
    """
    grid = {m: list(v) for m, v in (sample_size_grid or default_convergence_grid()).items()}
    if not grid or any(not v for v in grid.values()):
        raise ValueError("sample size grid is empty")
    settings = replace(settings, with_ci=False)
    model = model_factory(mu_U)
    tasks = [(m, n, r) for m, ns in grid.items() for n in ns for r in range(repetitions)]

    def one(task):
        m, n, r = task
        stream = (_mu_key(mu_U), _METHOD_CODE[m], r)
        res = estimate_method(m, model, n, seed, stream, settings)
        key = "sobol_total" if m == "sobol" else m
        return {v: float(val) for v, val, _, _ in res[key]}

    workers = min(workers or max_threads(), len(tasks))
    if workers == 1:
        results = [one(t) for t in tasks]
    else:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, tasks))

    means: dict[str, list[dict[str, float]]] = {}
    rankings: dict[str, list[tuple[str, ...]]] = {}
    it = iter(results)
    for m, ns in grid.items():
        means[m], rankings[m] = [], []
        for _ in ns:
            reps = [next(it) for _ in range(repetitions)]
            mean = {v: float(np.mean([r[v] for r in reps])) for v in model.names}
            ranks = rank_indices(mean)
            means[m].append(mean)
            rankings[m].append(tuple(sorted(mean, key=ranks.get)))
    return ConvergenceResult(grid, means, rankings, repetitions)


def ranking_instability(result: ConvergenceResult, method: str) -> list[float]:
    """Running fraction of sample sizes, from each size upwards, that disagree with the largest-size ranking."""
    final = result.rankings[method][-1]
    flags = [r != final for r in result.rankings[method]]
    return [float(np.mean(flags[j:])) for j in range(len(flags))]


@dataclass(frozen=True)
class TimingRecord:
    method: str
    n: int
    seconds: float


def timing_study(
    sample_size_grid: Mapping[str, Sequence[int]] | None = None,
    seed: int = 0,
    *,
    mu_U: float = 4.7,
    repeats: int = 5,
    settings: EstimatorSettings = EstimatorSettings(with_ci=False),
    model_factory: Callable[[float], ModelDefinition] = dry_eucalypt_model,
) -> list[TimingRecord]:
    """Median wall-clock seconds of one full estimate (sampling, model, index) per method and size.

    Runs single-threaded; absolute times depend on the machine.
    """
    grid = sample_size_grid or default_convergence_grid()
    settings = replace(settings, with_ci=False)
    model = model_factory(mu_U)
    records = []
    for m, ns in grid.items():
        for n in ns:
            times = []
            for r in range(repeats):
                t0 = time.perf_counter()
                estimate_method(m, model, n, seed, (_mu_key(mu_U), _METHOD_CODE[m], r), settings)
                times.append(time.perf_counter() - t0)
            records.append(TimingRecord(m, int(n), float(np.median(times))))
    return records
