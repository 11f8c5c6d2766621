"""Command-line front end: configuration files, study dispatch and file output.

Usage::

    python3 -m seggsa indices --config run.cfg --out results
    seggsa sweep --profile fast --seed 3

Configuration is plain ``key = value`` text, one key per line, ``#``
starts a comment. Omitted keys take their defaults (see :class:`RunConfig`);
unknown keys are errors. ``--seed``, ``--out`` and ``--profile`` override
the file.

Every command writes CSV tables, two-column ``.dat`` files for plotting and
a ``<command>_manifest.json`` listing them. Numbers are written with 6
significant digits. Exit status is 0 on success, 2 for configuration
errors and 3 when a computation fails.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import platform
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy

from . import __version__
from .experiments import (
    GSA_METHODS,
    EstimatorSettings,
    SampleSizes,
    conditional_profile,
    convergence_study,
    detect_crossover,
    max_threads,
    peak_location,
    run_point_study,
    sweep_mu,
    timing_study,
)
from .models import dry_eucalypt_model, fire_input_specs
from .pawn import STATS
from .sampling import RandomVariableSpec

__all__ = ["ConfigError", "RunConfig", "COMMANDS", "parse_config", "parse_config_text", "serialize_config", "dispatch", "main"]

COMMANDS = ("indices", "sweep", "conditional", "convergence", "timing")
PROFILES = {"paper": 1.0, "fast": 0.1}
MODELS = {"dry_eucalypt": dry_eucalypt_model}
FIRE_VARIABLES = ("T", "RH", "U", "FA")

EXIT_OK, EXIT_CONFIG, EXIT_COMPUTE = 0, 2, 3


class ConfigError(ValueError):
    """Invalid configuration; ``line`` is the 1-based line number (0 if not from a file line)."""

    def __init__(self, message: str, line: int = 0, keys: tuple[str, ...] = ()):
        super().__init__(f"line {line}: {message}" if line else message)
        self.message = message
        self.line = line
        self.keys = keys


_DEFAULT_SPECS = {s.name: s for s in fire_input_specs()}


@dataclass(frozen=True)
class RunConfig:
    """Every setting of a run. Field names are the configuration keys.

    ``delta_partitions = 0`` selects the size-dependent class count.
    The wind-speed mean is ``mu_U``; the other ``U_*`` keys set its
    spread and truncation.
    """

    model: str = "dry_eucalypt"
    mu_U: float = 4.7
    T_mean: float = _DEFAULT_SPECS["T"].mean
    T_std: float = _DEFAULT_SPECS["T"].std_dev
    T_lower: float = _DEFAULT_SPECS["T"].lower
    T_upper: float = _DEFAULT_SPECS["T"].upper
    RH_mean: float = _DEFAULT_SPECS["RH"].mean
    RH_std: float = _DEFAULT_SPECS["RH"].std_dev
    RH_lower: float = _DEFAULT_SPECS["RH"].lower
    RH_upper: float = _DEFAULT_SPECS["RH"].upper
    U_std: float = _DEFAULT_SPECS["U"].std_dev
    U_lower: float = _DEFAULT_SPECS["U"].lower
    U_upper: float = _DEFAULT_SPECS["U"].upper
    FA_mean: float = _DEFAULT_SPECS["FA"].mean
    FA_std: float = _DEFAULT_SPECS["FA"].std_dev
    FA_lower: float = _DEFAULT_SPECS["FA"].lower
    FA_upper: float = _DEFAULT_SPECS["FA"].upper
    sobol_n: int = 4_000
    mi_n: int = 10_000
    delta_n: int = 5_000
    pawn_n: int = 2_000_000
    conditional_n: int = 2_000_000
    knn_k: int = 3
    delta_partitions: int = 0
    delta_grid: int = 100
    pawn_intervals: int = 10
    pawn_stat: str = "mean"
    n_boot: int = 1_000
    jackknife_groups: int = 1_000
    ci_level: float = 0.95
    sweep_start: float = 2.0
    sweep_stop: float = 8.0
    sweep_step: float = 0.1
    conditional_variables: str = "T,RH,U,FA"
    convergence_repetitions: int = 100
    timing_repeats: int = 5
    seed: int = 0
    out: str = "results"
    profile: str = "paper"

    def __post_init__(self):
        problems = _invariant_problems(self)
        if problems:
            keys, msg = problems[0]
            raise ConfigError(f"{keys[0]}: {msg}", keys=keys)

    # derived settings -------------------------------------------------
    def sample_sizes(self) -> SampleSizes:
        base = SampleSizes(self.sobol_n, self.mi_n, self.delta_n, self.pawn_n)
        return base.scaled(PROFILES[self.profile]) if self.profile != "paper" else base

    def conditional_size(self) -> int:
        return max(2, int(round(self.conditional_n * PROFILES[self.profile])))

    def estimator_settings(self, with_ci: bool = True) -> EstimatorSettings:
        # each jackknife group keeps at least 10 points
        groups = max(2, min(self.jackknife_groups, self.sample_sizes().mi // 10))
        return EstimatorSettings(
            knn_k=self.knn_k,
            delta_partitions=self.delta_partitions or None,
            delta_grid=self.delta_grid,
            pawn_intervals=self.pawn_intervals,
            pawn_stat=self.pawn_stat,
            n_boot=self.n_boot,
            jackknife_groups=groups,
            level=self.ci_level,
            with_ci=with_ci,
        )

    def input_specs(self, mu_U: float) -> tuple[RandomVariableSpec, ...]:
        spec = lambda v, mean: RandomVariableSpec(
            v, mean, getattr(self, f"{v}_std"), getattr(self, f"{v}_lower"), getattr(self, f"{v}_upper")
        )
        return (spec("T", self.T_mean), spec("RH", self.RH_mean), spec("U", float(mu_U)), spec("FA", self.FA_mean))

    def model_factory(self):
        make = MODELS[self.model]
        return lambda mu_U: make(mu_U).with_specs(self.input_specs(mu_U))

    def variables(self) -> list[str]:
        return [v.strip() for v in self.conditional_variables.split(",") if v.strip()]


_POSITIVE = (
    "sobol_n", "mi_n", "delta_n", "pawn_n", "conditional_n", "knn_k", "delta_grid",
    "pawn_intervals", "n_boot", "jackknife_groups", "convergence_repetitions", "timing_repeats",
)


def _invariant_problems(c: RunConfig) -> list[tuple[tuple[str, ...], str]]:
    """Violated invariants as ``(keys involved, message)`` pairs."""
    out = []
    for key in _POSITIVE:
        if getattr(c, key) <= 0:
            out.append(((key,), f"must be positive, got {getattr(c, key)}"))
    if c.delta_partitions < 0 or c.delta_partitions == 1:
        out.append((("delta_partitions",), "must be 0 (automatic) or at least 2"))
    if c.model not in MODELS:
        out.append((("model",), f"unknown model {c.model!r}; choose from {sorted(MODELS)}"))
    if c.pawn_stat not in STATS:
        out.append((("pawn_stat",), f"unknown statistic {c.pawn_stat!r}; choose from {sorted(STATS)}"))
    if c.profile not in PROFILES:
        out.append((("profile",), f"unknown profile {c.profile!r}; choose from {sorted(PROFILES)}"))
    if not 0.0 < c.ci_level < 1.0:
        out.append((("ci_level",), "must lie in (0, 1)"))
    if not 2.0 < c.mu_U < 8.0:
        out.append((("mu_U",), "must lie in (2, 8)"))
    if not c.sweep_step > 0:
        out.append((("sweep_step",), "must be positive"))
    if c.sweep_stop < c.sweep_start:
        out.append((("sweep_start", "sweep_stop"), "sweep_stop must not be below sweep_start"))
    if c.seed < 0:
        out.append((("seed",), "must be non-negative"))
    for v in FIRE_VARIABLES:
        mean_key = "mu_U" if v == "U" else f"{v}_mean"
        mean, std, lo, hi = (getattr(c, k) for k in (mean_key, f"{v}_std", f"{v}_lower", f"{v}_upper"))
        if not std > 0:
            out.append(((f"{v}_std",), "must be positive"))
        if not lo < hi:
            out.append(((f"{v}_lower", f"{v}_upper"), f"{v}_upper must exceed {v}_lower"))
        elif not lo <= mean <= hi:
            out.append(((mean_key, f"{v}_lower", f"{v}_upper"), f"{mean_key} must lie in [{v}_lower, {v}_upper]"))
    bad = [v for v in c.variables() if v not in FIRE_VARIABLES]
    if bad or not c.variables():
        out.append((("conditional_variables",), f"expected a comma list drawn from {FIRE_VARIABLES}"))
    return out


_FIELDS = {f.name: f for f in fields(RunConfig)}
_TYPES = {"int": int, "float": float, "str": str}


def _convert(key: str, raw: str, line: int):
    kind = _TYPES[_FIELDS[key].type]
    if kind is str:
        return raw
    try:
        if kind is int:
            return int(raw.replace("_", ""))
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot read {raw!r} as {kind.__name__}", line) from None


def parse_config_text(text: str, **overrides) -> RunConfig:
    """Build a :class:`RunConfig` from ``key = value`` text.

    ``overrides`` (e.g. from command-line flags) replace file values.
    """
    values, lines = {}, {}
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        key, sep, value = body.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", no)
        if key not in _FIELDS:
            raise ConfigError(f"unknown key {key!r}", no)
        if key in values:
            raise ConfigError(f"duplicate key {key!r} (first set on line {lines[key]})", no)
        values[key] = _convert(key, value, no)
        lines[key] = no
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**values)
    except ConfigError as exc:
        # point at the last line that set one of the offending keys
        line = max((lines.get(k, 0) for k in exc.keys), default=0)
        raise ConfigError(exc.message, line, exc.keys) from None


def parse_config(path, **overrides) -> RunConfig:
    """Read a configuration file; see :func:`parse_config_text`."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc.strerror}") from None
    return parse_config_text(text, **overrides)


def serialize_config(config: RunConfig) -> str:
    """Configuration text that :func:`parse_config_text` reads back to ``config``."""
    rows = []
    for f in fields(config):
        v = getattr(config, f.name)
        rows.append(f"{f.name} = {repr(v) if isinstance(v, float) else v}")
    return "\n".join(rows) + "\n"


# output -----------------------------------------------------------------

def fmt(v) -> str:
    """Locale-independent decimal text with 6 significant digits."""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".6g")
    return str(v)


class _Writer:
    def __init__(self, out: Path):
        self.out = out
        self.files: list[str] = []

    def _write(self, name: str, text: str):
        path = self.out / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
        self.files.append(name)

    def csv(self, name: str, header: Sequence[str], rows):
        lines = [",".join(header)] + [",".join(fmt(v) for v in r) for r in rows]
        self._write(name, "\n".join(lines) + "\n")

    def dat(self, name: str, x, y, labels=("x", "y")):
        lines = [f"# {labels[0]} {labels[1]}"] + [f"{fmt(a)} {fmt(b)}" for a, b in zip(x, y)]
        self._write(name, "\n".join(lines) + "\n")


def _indices(cfg: RunConfig, w: _Writer):
    study = run_point_study(cfg.mu_U, cfg.sample_sizes(), cfg.seed, cfg.estimator_settings(),
                            model_factory=cfg.model_factory())
    rows = [(e.method, e.variable, e.value, e.ci_low, e.ci_high, e.rank)
            for m in study.estimates for e in study.estimates[m]]
    w.csv("indices.csv", ("method", "variable", "value", "ci_low", "ci_high", "rank"), rows)
    for m, ests in study.estimates.items():
        w.dat(f"indices_{m}.dat", [e.variable for e in ests], [e.value for e in ests], ("variable", "value"))


def _sweep(cfg: RunConfig, w: _Writer):
    res = sweep_mu(cfg.sweep_start, cfg.sweep_stop, cfg.sweep_step, cfg.sample_sizes(), cfg.seed,
                   cfg.estimator_settings(with_ci=False), model_factory=cfg.model_factory())
    if not res.points:
        raise ValueError("sweep grid has no points inside (2, 8)")
    rows = [(p.mu_U, p.stage.value, e.method, e.variable, e.value, e.rank)
            for p in res.points for m in p.estimates for e in p.estimates[m]]
    w.csv("sweep.csv", ("mu_U", "stage", "method", "variable", "value", "rank"), rows)
    methods = list(res.points[0].estimates)
    for m in methods:
        for v in res.points[0].values(m):
            w.dat(f"sweep_{m}_{v}.dat", res.grid, res.series(m, v), ("mu_U", "index"))
    summary = []
    for m in methods:
        mu = detect_crossover(res, m, "U", "RH")
        summary.append((m, float("nan") if mu is None else mu, peak_location(res, m, "U")))
    w.csv("sweep_crossovers.csv", ("method", "crossover_U_over_RH", "peak_U"), summary)


_FIX_LABELS = ("mean-2sd", "mean-1sd", "mean", "mean+1sd", "mean+2sd")


def _conditional(cfg: RunConfig, w: _Writer):
    rows = []
    for v in cfg.variables():
        prof = conditional_profile(v, cfg.mu_U, cfg.conditional_size(), cfg.seed, k=cfg.knn_k,
                                   model_factory=cfg.model_factory())
        rows.append((v, "baseline", float("nan"), prof.baseline_variance, prof.baseline_entropy,
                     prof.baseline_excess_kurtosis))
        w.dat(f"conditional_{v}_pdf_baseline.dat", prof.grid, prof.baseline_pdf, ("y", "pdf"))
        w.dat(f"conditional_{v}_cdf_baseline.dat", prof.grid, prof.baseline_cdf, ("y", "cdf"))
        for j, label in enumerate(_FIX_LABELS):
            rows.append((v, label, prof.fix_values[j], prof.variances[j], prof.entropies[j], prof.excess_kurtosis[j]))
            w.dat(f"conditional_{v}_pdf_{label}.dat", prof.grid, prof.pdf_curves[j], ("y", "pdf"))
            w.dat(f"conditional_{v}_cdf_{label}.dat", prof.grid, prof.cdf_curves[j], ("y", "cdf"))
    w.csv("conditional.csv", ("variable", "fixed_at", "fix_value", "variance", "entropy", "excess_kurtosis"), rows)


def _size_grid(cfg: RunConfig):
    sizes = cfg.sample_sizes()
    return {m: [max(2, sizes[m] // d) for d in (8, 4, 2, 1)] for m in GSA_METHODS}


def _convergence(cfg: RunConfig, w: _Writer):
    res = convergence_study(cfg.mu_U, _size_grid(cfg), cfg.convergence_repetitions, cfg.seed,
                            cfg.estimator_settings(with_ci=False), model_factory=cfg.model_factory())
    rows = []
    for m, ns in res.sizes.items():
        for n, mean, ranking in zip(ns, res.means[m], res.rankings[m]):
            for v, val in mean.items():
                rows.append((m, n, v, val, ranking.index(v) + 1))
        for v in res.means[m][0]:
            w.dat(f"convergence_{m}_{v}.dat", ns, [mean[v] for mean in res.means[m]], ("n", "mean_index"))
    w.csv("convergence.csv", ("method", "n", "variable", "mean_value", "rank"), rows)


def _timing(cfg: RunConfig, w: _Writer):
    recs = timing_study(_size_grid(cfg), cfg.seed, mu_U=cfg.mu_U, repeats=cfg.timing_repeats,
                        settings=cfg.estimator_settings(with_ci=False), model_factory=cfg.model_factory())
    w.csv("timing.csv", ("method", "n", "seconds"), [(r.method, r.n, r.seconds) for r in recs])
    for m in dict.fromkeys(r.method for r in recs):
        sel = [r for r in recs if r.method == m]
        w.dat(f"timing_{m}.dat", [r.n for r in sel], [r.seconds for r in sel], ("n", "seconds"))


_RUNNERS = {"indices": _indices, "sweep": _sweep, "conditional": _conditional,
            "convergence": _convergence, "timing": _timing}


def _versions() -> dict:
    return {"seggsa": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def dispatch(command: str, config: RunConfig, out: str | Path | None = None) -> int:
    """Run ``command`` and write its files under ``out`` (default ``config.out``).

    Returns the exit status; failures are reported on standard error.
    """
    if command not in _RUNNERS:
        print(f"error: unknown command {command!r}; choose from {', '.join(COMMANDS)}", file=sys.stderr)
        return EXIT_CONFIG
    w = _Writer(Path(config.out if out is None else out))
    try:
        _RUNNERS[command](config, w)
    except Exception as exc:  # any estimator or model failure
        print(f"error: {command} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    manifest = {
        "command": command,
        "config": dataclasses.asdict(config),
        "seeds": {
            "master": config.seed,
            "derivation": "numpy SeedSequence(master, spawn_key=(round(1000 * mu_U), method code, replicate))",
        },
        "versions": _versions(),
        "threads": max_threads(),
        "files": sorted(w.files),
    }
    w._write(f"{command}_manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="seggsa", description="Sensitivity studies of the dry eucalypt fire spread model.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", metavar="PATH", help="key = value configuration file")
    p.add_argument("--seed", type=int, help="master seed (overrides the file)")
    p.add_argument("--out", metavar="DIR", help="output directory (overrides the file)")
    p.add_argument("--profile", choices=sorted(PROFILES), help="full sample sizes (paper), or fast (sizes / 10)")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {"seed": args.seed, "out": args.out, "profile": args.profile}
    try:
        cfg = parse_config(args.config, **overrides) if args.config else parse_config_text("", **overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return dispatch(args.command, cfg)


if __name__ == "__main__":
    sys.exit(main())
