"""Experiment orchestration: sweeps, trials, rate fits, and file I/O.

A run is declared by a config file (flat TOML sections, documented below),
expanded into a grid of (N, eps, trial) triples, and executed with one
derived seed per triple so results do not depend on execution order or
worker count.  Each trial samples a dataset, applies the task's schedule and
privatization, fits, and measures excess risk against the known truth.

Rate fits aggregate per-trial risks at each abscissa value (median by
default; Laplace noise makes per-trial risks heavy-tailed) and regress
ln(risk) on ln(abscissa) by ordinary least squares.  The abscissa encodes
the probed regime: N at fixed eps, eps*N for the central privacy term, or
N*eps^2 for the local effective sample size.

Config file format (all keys shown; unknown keys are errors)::

    [experiment]
    task = "cls-local"        # one of the nine TASKS
    N_grid = [4096, 8192]     # increasing positive integers
    eps_grid = [1.0]          # increasing positive reals (inf allowed)
    trials = 20               # >= 1
    master_seed = 1234
    record_timing = false     # optional; when true, wall_ms is written to CSV

    [distribution]
    family = "smooth"         # the trigonometric family
    dim = 1
    beta = 1.0
    seed = 7
    num_classes = 2           # classification tasks only
    label_bound = 1.0         # bounded-regression tasks only
    moment_order = 2.0        # heavy-tail tasks only
    moment_bound = 1.0        # heavy-tail tasks only

    [schedule]                # optional section, all keys optional
    c_mult_h = 1.0            # bandwidth multiplier
    c_mult_k = 1.0            # neighbor-count multiplier
    c_mult_T = 1.0            # clip-radius multiplier
"""

from __future__ import annotations

import csv
import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import estimators, risk
from .core import AssumptionParams
from .mechanisms import (
    derive_rng,
    derive_seed,
    privatize_clip_laplace_batch,
    privatize_kbit_batch,
    privatize_laplace_batch,
)
from .synthdata import (
    BoundedNoise,
    Distribution,
    HeavyTailNoise,
    sample_dataset,
    smooth_classification,
    smooth_regression,
)

__all__ = [
    "TASKS",
    "CSV_HEADER",
    "DistributionSpec",
    "ExperimentConfig",
    "TrialRecord",
    "RateFit",
    "theoretical_exponent",
    "build_distribution",
    "run_experiment",
    "aggregate_points",
    "fit_rate",
    "config_from_mapping",
    "load_config",
    "write_records",
    "read_records",
    "write_plot_data",
    "write_fit_summary",
]

CLS_TASKS = ("cls-local", "cls-central", "cls-full")
REG_BOUNDED_TASKS = ("reg-local-bounded", "reg-central-bounded", "reg-full-bounded")
REG_HEAVY_TASKS = ("reg-local-heavy", "reg-central-heavy", "reg-full-heavy")
TASKS = CLS_TASKS + REG_BOUNDED_TASKS + REG_HEAVY_TASKS

ABSCISSAS = ("N", "epsN", "Neps2")

CSV_HEADER = "task,N,eps,trial,seed,excess_risk,std_error,h,k,T,n0,wall_ms"


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass(frozen=True)
class DistributionSpec:
    """Declarative description of the synthetic law an experiment uses."""

    family: str
    dim: int
    beta: float
    seed: int
    num_classes: int | None = None
    label_bound: float | None = None
    moment_order: float | None = None
    moment_bound: float | None = None

    def __post_init__(self):
        if self.family != "smooth":
            raise ConfigError(f"unknown distribution family {self.family!r}")
        if self.dim < 1:
            raise ConfigError("dim must be >= 1")
        if not (0.0 < self.beta <= 1.0):
            raise ConfigError(f"beta must lie in (0, 1], got {self.beta}")


@dataclass(frozen=True)
class ExperimentConfig:
    """A full sweep declaration; see the module docstring for the file form."""

    task: str
    dist: DistributionSpec
    N_grid: tuple
    eps_grid: tuple
    trials: int
    master_seed: int
    c_mult_h: float = 1.0
    c_mult_k: float = 1.0
    c_mult_T: float = 1.0
    record_timing: bool = False

    def __post_init__(self):
        if self.task not in TASKS:
            raise ConfigError(f"unknown task {self.task!r}; expected one of {TASKS}")
        ns = tuple(int(n) for n in self.N_grid)
        if not ns or any(n < 1 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
            raise ConfigError("N_grid must be a nonempty increasing sequence of positive ints")
        es = tuple(float(e) for e in self.eps_grid)
        if not es or any(not (e > 0.0) for e in es) or any(
            b <= a for a, b in zip(es, es[1:])
        ):
            raise ConfigError("eps_grid must be a nonempty increasing sequence of positive reals")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        for name in ("c_mult_h", "c_mult_k", "c_mult_T"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be positive")
        spec = self.dist
        if self.task in CLS_TASKS:
            if spec.num_classes is None or spec.num_classes < 2:
                raise ConfigError("classification tasks need num_classes >= 2")
        elif self.task in REG_BOUNDED_TASKS:
            if spec.label_bound is None or spec.label_bound <= 0.0:
                raise ConfigError("bounded-regression tasks need label_bound > 0")
        else:
            if spec.moment_order is None or spec.moment_order < 2.0:
                raise ConfigError("heavy-tail tasks need moment_order >= 2")
            if spec.moment_bound is None or spec.moment_bound <= 0.0:
                raise ConfigError("heavy-tail tasks need moment_bound > 0")
        object.__setattr__(self, "N_grid", ns)
        object.__setattr__(self, "eps_grid", es)


@dataclass(frozen=True)
class TrialRecord:
    """One fitted-and-evaluated trial; schedule fields are None where unused."""

    task: str
    N: int
    eps: float
    trial: int
    seed: int
    excess_risk: float
    std_error: float
    h: float | None = None
    k: int | None = None
    T: float | None = None
    n0: float | None = None
    wall_ms: float | None = None

    def __post_init__(self):
        if self.excess_risk < -self.std_error:
            raise ValueError("excess_risk below -std_error")
        for name in ("h", "T", "n0"):
            v = getattr(self, name)
            if v is not None and v <= 0.0:
                raise ValueError(f"schedule value {name} must be positive")
        if self.k is not None and self.k < 1:
            raise ValueError("schedule value k must be >= 1")


@dataclass(frozen=True)
class RateFit:
    """OLS fit of ln(aggregated risk) on ln(abscissa)."""

    slope: float
    intercept: float
    slope_std_error: float
    theoretical_exponent: float | None
    abscissa: str

    def __post_init__(self):
        if self.slope_std_error < 0.0:
            raise ValueError("slope_std_error must be nonnegative")
        if self.abscissa not in ABSCISSAS:
            raise ValueError(f"abscissa must be one of {ABSCISSAS}")


def theoretical_exponent(
    task: str,
    abscissa: str,
    beta: float,
    d: int,
    gamma: float | None = None,
    p: float | None = None,
) -> float:
    """Minimax excess-risk exponent of a task's leading term.

    The abscissa selects the term: local tasks decay in the effective sample
    size N*eps^2 (also valid against N at fixed eps), central and full tasks
    have a non-private term in N and a privacy term in eps*N.  Classification
    needs the margin exponent gamma; heavy-tail regression needs the moment
    order p.
    """
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")
    if abscissa not in ABSCISSAS:
        raise ValueError(f"abscissa must be one of {ABSCISSAS}")
    if not (0.0 < beta <= 1.0):
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if task in CLS_TASKS:
        if gamma is None or gamma < 0.0:
            raise ValueError("classification tasks need gamma >= 0")
        if task == "cls-local":
            if abscissa == "epsN":
                raise ValueError("cls-local decays in N*eps^2, not eps*N")
            return -beta * (gamma + 1.0) / (2.0 * beta + d)
        if abscissa == "N":
            return -beta * (gamma + 1.0) / (2.0 * beta + d)
        if abscissa == "epsN":
            return -beta * (gamma + 1.0) / (beta + d)
        raise ValueError(f"{task} has no N*eps^2 term")
    if task in REG_HEAVY_TASKS and (p is None or p <= 1.0):
        raise ValueError("heavy-tail tasks need moment order p > 1")
    if task == "reg-local-bounded":
        if abscissa == "epsN":
            raise ValueError("reg-local-bounded decays in N*eps^2, not eps*N")
        return -2.0 * beta / (d + 2.0 * beta)
    if task == "reg-local-heavy":
        if abscissa == "epsN":
            raise ValueError("reg-local-heavy decays in N*eps^2, not eps*N")
        return -2.0 * beta * (p - 1.0) / (2.0 * p * beta + d * (p - 1.0))
    # central/full regression
    if abscissa == "N":
        return -2.0 * beta / (2.0 * beta + d)
    if abscissa == "epsN":
        if task in REG_HEAVY_TASKS:
            return -2.0 * beta * (p - 1.0) / (p * beta + d * (p - 1.0))
        return -2.0 * beta / (d + beta)
    raise ValueError(f"{task} has no N*eps^2 term")


def build_distribution(config: ExperimentConfig) -> Distribution:
    """Instantiate the config's synthetic law (deterministic given its seed)."""
    spec = config.dist
    if config.task in CLS_TASKS:
        return smooth_classification(spec.dim, spec.num_classes, spec.beta, spec.seed)
    if config.task in REG_BOUNDED_TASKS:
        noise = BoundedNoise(spec.label_bound)
    else:
        noise = HeavyTailNoise(spec.moment_order, spec.moment_bound)
    return smooth_regression(spec.dim, spec.beta, noise, spec.seed)


def _run_trial(
    config: ExperimentConfig, dist: Distribution, N: int, eps: float, trial: int
) -> TrialRecord:
    start = time.perf_counter()
    trial_seed = derive_seed(config.master_seed, N, eps, trial)
    dataset = sample_dataset(dist, N, derive_seed(trial_seed, 1))
    rng = derive_rng(trial_seed, 2)
    task = config.task
    params: AssumptionParams = dist.params
    beta, d = params.beta, dist.dim
    h = k = T = n0 = None

    if task == "cls-local":
        h = estimators.h_local_cls(N, eps, dist.num_classes, beta, d, config.c_mult_h)
        bits = privatize_kbit_batch(dataset.labels, dist.num_classes, eps, rng)
        model = estimators.fit_local_cube_classifier(
            dataset.features, bits, dist.num_classes, h
        )
        report = risk.excess_risk_classifier(model, dist)
    elif task in ("cls-central", "cls-full"):
        h = estimators.h_central_cls(N, eps, dist.num_classes, beta, d, config.c_mult_h)
        model = estimators.fit_central_exp_classifier(
            dataset, h, eps, rng, full_dp=(task == "cls-full")
        )
        report = risk.excess_risk_classifier(model, dist)
    elif task == "reg-local-bounded":
        k = estimators.k_local_reg(N, eps, beta, d, c_mult=config.c_mult_k)
        T = params.label_bound
        z = privatize_laplace_batch(dataset.labels, T, eps, rng)
        model = estimators.fit_knn_regressor(dataset.features, z, k)
        report = risk.excess_risk_regressor(model, dist)
    elif task == "reg-local-heavy":
        p = params.moment_order
        k = estimators.k_local_reg(N, eps, beta, d, heavy=p, c_mult=config.c_mult_k)
        T = estimators.clip_radius_local(k, eps, p, config.c_mult_T)
        z = privatize_clip_laplace_batch(dataset.labels, T, eps, rng)
        model = estimators.fit_knn_regressor(dataset.features, z, k)
        report = risk.excess_risk_regressor(model, dist)
    else:
        full_dp = task.startswith("reg-full")
        heavy = task in REG_HEAVY_TASKS
        if heavy:
            p = params.moment_order
            h = estimators.h_central_reg(N, eps, beta, d, heavy=p, c_mult=config.c_mult_h)
            T = estimators.clip_radius_central(eps, N, h, d, p, config.c_mult_T)
        else:
            h = estimators.h_central_reg(N, eps, beta, d, c_mult=config.c_mult_h)
            T = params.label_bound
        model = estimators.fit_central_cube_regressor(
            dataset,
            h,
            eps,
            T,
            rng,
            clipped=heavy,
            full_dp=full_dp,
            density_floor=params.density_floor,
            theta=params.theta,
        )
        if full_dp:
            n0 = estimators.occupancy_floor(
                N, params.density_floor, params.theta, model.partition
            )
        report = risk.excess_risk_regressor(model, dist)

    wall_ms = 1000.0 * (time.perf_counter() - start)
    return TrialRecord(
        task=task,
        N=N,
        eps=eps,
        trial=trial,
        seed=trial_seed,
        excess_risk=report.excess_risk,
        std_error=report.std_error,
        h=h,
        k=k,
        T=None if T is None or math.isinf(T) else T,
        n0=n0,
        wall_ms=wall_ms,
    )


def run_experiment(config: ExperimentConfig, threads: int = 1) -> list:
    """Execute every (N, eps, trial) triple of the config.

    Trials are independent (one derived RNG stream per triple) and may run on
    a thread pool; the returned order is always N-major, then eps, then trial,
    regardless of scheduling.

    Args:
        config: validated experiment declaration.
        threads: worker threads (1 = run inline).

    Returns:
        list of TrialRecord.
    """
    dist = build_distribution(config)
    triples = [
        (N, eps, t)
        for N in config.N_grid
        for eps in config.eps_grid
        for t in range(config.trials)
    ]

    def run_one(triple):
        N, eps, t = triple
        try:
            return _run_trial(config, dist, N, eps, t)
        except Exception as exc:
            raise RuntimeError(
                f"trial failed (task={config.task}, N={N}, eps={eps}, trial={t}): {exc}"
            ) from exc

    if threads <= 1:
        return [run_one(tr) for tr in triples]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run_one, triples))


def _abscissa_value(record: TrialRecord, abscissa: str) -> float:
    if abscissa == "N":
        return float(record.N)
    if abscissa == "epsN":
        return record.eps * record.N
    return record.N * record.eps * record.eps


def aggregate_points(records, abscissa: str, aggregator: str = "median") -> np.ndarray:
    """Collapse trials into one (ln abscissa, ln risk) point per grid value.

    Points with nonpositive aggregated risk or non-finite abscissa (eps = inf
    rows under an eps-bearing abscissa) are reported via a warning and
    dropped.  With abscissa "N" the records must share a single eps value;
    mixing regimes in one fit is refused.
    """
    if abscissa not in ABSCISSAS:
        raise ValueError(f"abscissa must be one of {ABSCISSAS}")
    if aggregator not in ("median", "mean"):
        raise ValueError("aggregator must be 'median' or 'mean'")
    records = list(records)
    if not records:
        raise ValueError("no records to aggregate")
    if abscissa == "N" and len({r.eps for r in records}) > 1:
        raise ValueError(
            "abscissa 'N' mixes multiple eps values; fit one regime at a time"
        )
    groups: dict = {}
    for r in records:
        groups.setdefault(_abscissa_value(r, abscissa), []).append(r.excess_risk)
    agg = np.median if aggregator == "median" else np.mean
    points = []
    for x in sorted(groups):
        y = float(agg(groups[x]))
        if not math.isfinite(x):
            warnings.warn(f"dropping non-finite abscissa value {x}")
            continue
        if y <= 0.0:
            warnings.warn(f"dropping nonpositive aggregated risk {y} at abscissa {x}")
            continue
        points.append((math.log(x), math.log(y)))
    return np.asarray(points, dtype=float).reshape(-1, 2)


def fit_rate(
    records,
    abscissa: str,
    aggregator: str = "median",
    expected_exponent: float | None = None,
) -> RateFit:
    """Least-squares slope of ln(aggregated excess risk) vs ln(abscissa).

    Args:
        records: TrialRecord sequence from one sweep.
        abscissa: "N", "epsN", or "Neps2".
        aggregator: per-grid-point trial aggregation, median or mean.
        expected_exponent: the theoretical slope to report alongside, if known.

    Returns:
        RateFit with the OLS slope, intercept, and slope standard error
        (0 when the points are exactly collinear).

    Raises:
        ValueError: fewer than 3 usable points, or a degenerate abscissa grid.
    """
    points = aggregate_points(records, abscissa, aggregator)
    if points.shape[0] < 3:
        raise ValueError("rate fit needs at least 3 distinct abscissa values")
    x, y = points[:, 0], points[:, 1]
    sxx = float(np.sum((x - x.mean()) ** 2))
    if sxx <= 0.0:
        raise ValueError("degenerate abscissa grid: all values coincide")
    slope = float(np.sum((x - x.mean()) * (y - y.mean())) / sxx)
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    dof = x.size - 2
    stderr = math.sqrt(float(np.sum(resid**2)) / dof / sxx) if dof > 0 else 0.0
    return RateFit(
        slope=slope,
        intercept=intercept,
        slope_std_error=stderr,
        theoretical_exponent=expected_exponent,
        abscissa=abscissa,
    )


# ---------------------------------------------------------------------------
# config file parsing

_EXPERIMENT_KEYS = {
    "task",
    "N_grid",
    "eps_grid",
    "trials",
    "master_seed",
    "record_timing",
}
_DIST_KEYS = {
    "family",
    "dim",
    "beta",
    "seed",
    "num_classes",
    "label_bound",
    "moment_order",
    "moment_bound",
}
_SCHEDULE_KEYS = {"c_mult_h", "c_mult_k", "c_mult_T"}


def _require(section: dict, name: str, key: str):
    if key not in section:
        raise ConfigError(f"missing required key {key!r} in [{name}]")
    return section[key]


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    return value


def _as_float(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    return float(value)


def config_from_mapping(data: dict) -> ExperimentConfig:
    """Validate a parsed config mapping and build an ExperimentConfig.

    Raises ConfigError on unknown sections or keys, missing required keys,
    or type/range violations.
    """
    known = {"experiment": _EXPERIMENT_KEYS, "distribution": _DIST_KEYS, "schedule": _SCHEDULE_KEYS}
    for section in data:
        if section not in known:
            raise ConfigError(f"unknown config section [{section}]")
        if not isinstance(data[section], dict):
            raise ConfigError(f"[{section}] must be a section, not a value")
        for key in data[section]:
            if key not in known[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
    if "experiment" not in data or "distribution" not in data:
        raise ConfigError("config needs [experiment] and [distribution] sections")

    exp = data["experiment"]
    dist = data["distribution"]
    sched = data.get("schedule", {})

    task = _require(exp, "experiment", "task")
    if not isinstance(task, str):
        raise ConfigError("task must be a string")
    n_grid = _require(exp, "experiment", "N_grid")
    eps_grid = _require(exp, "experiment", "eps_grid")
    if not isinstance(n_grid, list) or not isinstance(eps_grid, list):
        raise ConfigError("N_grid and eps_grid must be arrays")
    n_grid = tuple(_as_int(v, "N_grid entry") for v in n_grid)
    eps_grid = tuple(_as_float(v, "eps_grid entry") for v in eps_grid)
    trials = _as_int(_require(exp, "experiment", "trials"), "trials")
    master_seed = _as_int(_require(exp, "experiment", "master_seed"), "master_seed")
    record_timing = exp.get("record_timing", False)
    if not isinstance(record_timing, bool):
        raise ConfigError("record_timing must be a boolean")

    family = _require(dist, "distribution", "family")
    if not isinstance(family, str):
        raise ConfigError("family must be a string")
    spec_kwargs = dict(
        family=family,
        dim=_as_int(_require(dist, "distribution", "dim"), "dim"),
        beta=_as_float(_require(dist, "distribution", "beta"), "beta"),
        seed=_as_int(_require(dist, "distribution", "seed"), "seed"),
    )
    if "num_classes" in dist:
        spec_kwargs["num_classes"] = _as_int(dist["num_classes"], "num_classes")
    if "label_bound" in dist:
        spec_kwargs["label_bound"] = _as_float(dist["label_bound"], "label_bound")
    if "moment_order" in dist:
        spec_kwargs["moment_order"] = _as_float(dist["moment_order"], "moment_order")
    if "moment_bound" in dist:
        spec_kwargs["moment_bound"] = _as_float(dist["moment_bound"], "moment_bound")

    c_mults = {}
    for key in _SCHEDULE_KEYS:
        if key in sched:
            c_mults[key] = _as_float(sched[key], key)

    try:
        spec = DistributionSpec(**spec_kwargs)
        return ExperimentConfig(
            task=task,
            dist=spec,
            N_grid=n_grid,
            eps_grid=eps_grid,
            trials=trials,
            master_seed=master_seed,
            record_timing=record_timing,
            **c_mults,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> ExperimentConfig:
    """Parse and validate a config file (see the module docstring for keys)."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config syntax error: {exc}") from exc
    return config_from_mapping(data)


def with_master_seed(config: ExperimentConfig, master_seed: int) -> ExperimentConfig:
    """Copy of the config with the master seed replaced (CLI --seed)."""
    return replace(config, master_seed=master_seed)


# ---------------------------------------------------------------------------
# file emission

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_records(records, path, include_timing: bool = False) -> None:
    """Write trial records as CSV with the fixed header.

    Floats use shortest round-trip decimals; unused schedule fields stay
    empty.  Timing is omitted unless requested, because wall clocks are not
    reproducible and would break byte-identical reruns.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in records:
            wall = r.wall_ms if include_timing else None
            fields = [
                r.task,
                str(r.N),
                repr(float(r.eps)),
                str(r.trial),
                str(r.seed),
                repr(float(r.excess_risk)),
                repr(float(r.std_error)),
                _fmt(r.h),
                _fmt(r.k),
                _fmt(r.T),
                _fmt(r.n0),
                _fmt(wall),
            ]
            fh.write(",".join(fields) + "\n")


def read_records(path) -> list:
    """Read back a records CSV written by ``write_records``."""

    def opt_float(s):
        return float(s) if s else None

    records = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER.split(","):
            raise ValueError(f"unexpected CSV header {header}")
        for row in reader:
            if len(row) != 12:
                raise ValueError(f"malformed CSV row: {row}")
            records.append(
                TrialRecord(
                    task=row[0],
                    N=int(row[1]),
                    eps=float(row[2]),
                    trial=int(row[3]),
                    seed=int(row[4]),
                    excess_risk=float(row[5]),
                    std_error=float(row[6]),
                    h=opt_float(row[7]),
                    k=int(row[8]) if row[8] else None,
                    T=opt_float(row[9]),
                    n0=opt_float(row[10]),
                    wall_ms=opt_float(row[11]),
                )
            )
    return records


def write_plot_data(points: np.ndarray, path) -> None:
    """Write aggregated (ln abscissa, ln risk) pairs as two-column text."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("# ln_abscissa ln_risk\n")
        for x, y in np.asarray(points, dtype=float).reshape(-1, 2):
            fh.write(f"{float(x)!r} {float(y)!r}\n")


def write_fit_summary(fit: RateFit, aggregator: str, num_points: int, path) -> None:
    """Write the fit parameters as key = value lines."""
    expected = "" if fit.theoretical_exponent is None else repr(fit.theoretical_exponent)
    lines = [
        f"slope = {fit.slope!r}",
        f"intercept = {fit.intercept!r}",
        f"slope_std_error = {fit.slope_std_error!r}",
        f"theoretical_exponent = {expected}",
        f"abscissa = {fit.abscissa}",
        f"aggregator = {aggregator}",
        f"points = {num_points}",
    ]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
