"""Cross-validated benchmarks and Gaussian-noise sweeps.

Every random choice in a run is a function of (master seed, fold, repeat):
the fold plan comes from the master seed, and each fold's rado sampler and
noise draws get their own child stream.  Running a subset of folds, or the
same configuration twice, reproduces the numbers exactly.

Test errors are reported in percent.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

import jsonschema
import numpy as np

from .baseline import adaboost_ss
from .boosting import BoostConfig, BoostTrace, parse_weak, radoboost
from .core import fixed_support_rados, uniform_rados
from .dataset import Dataset, load_csv, load_haberman, stratified_folds
from .losses import zero_one_error
from .privacy import DpFeatureConfig, NoiseConfig, dpfreal, gaussian_noisify

SCHEMA_VERSION = "1.0"
ALGORITHMS = ("radoboost", "adaboost_ss")
N_CAP = 1000

# stream tags keep the per-fold generators for different purposes apart
_RADO_STREAM = 0
_NOISE_STREAM = 1

RESULT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "rados cross-validation result",
    "type": "object",
    "required": ["schema_version", "config", "fold_errors", "mean", "std",
                 "best_iterates", "n_rados"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "config": {
            "type": "object",
            "required": ["algorithm", "rado", "T", "weak", "kappa", "folds", "seed"],
            "properties": {
                "algorithm": {"enum": list(ALGORITHMS)},
                "rado": {"type": "string"},
                "T": {"type": "integer", "minimum": 1},
                "n": {"type": ["integer", "null"], "minimum": 1},
                "weak": {"type": "string"},
                "kappa": {"type": "number", "minimum": 1},
                "folds": {"type": "integer", "minimum": 2},
                "seed": {"type": "integer"},
                "varsigma": {"type": "number", "minimum": 0},
                "repeat": {"type": "integer", "minimum": 0},
            },
        },
        "fold_errors": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 100}},
        "mean": {"type": "number"},
        "std": {"type": "number", "minimum": 0},
        "best_iterates": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "n_rados": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "wall_time": {"type": "number", "minimum": 0},
    },
}


@dataclass
class ExperimentSpec:
    """Everything that defines a benchmark run.

    ``data`` is a CSV path or ``"haberman"`` for the bundled copy.  ``rado``
    is ``"uniform"``, ``"support=F"`` (fixed support of size round(F m) on
    each training fold) or ``"dp:j,eps"``.  ``n=None`` applies the default
    rule n = min(1000, floor(train size / 2)).
    """

    data: str = "haberman"
    label_column: object = -1
    positive_rule: object = ">0"
    header: bool = True
    algorithm: str = "radoboost"
    rado: str = "uniform"
    T: int = 1000
    n: Optional[int] = None
    weak: str = "strong"
    kappa: float = 1.0
    folds: int = 10
    seed: int = 0
    sigmas: Tuple[float, ...] = (0.0,)
    repeats: int = 1
    workers: int = 1

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        parse_rado_strategy(self.rado)
        parse_weak(self.weak)
        BoostConfig(self.T, self.kappa)
        if self.n is not None and self.n < 1:
            raise ValueError("n must be positive")
        if self.folds < 2:
            raise ValueError("need at least 2 folds")
        if self.repeats < 1:
            raise ValueError("repeats must be at least 1")
        if any(s < 0 for s in self.sigmas):
            raise ValueError("noise levels must be nonnegative")
        self.sigmas = tuple(float(s) for s in self.sigmas)

    def boost_config(self) -> BoostConfig:
        return BoostConfig(self.T, self.kappa, parse_weak(self.weak))

    def load(self) -> Dataset:
        if self.data == "haberman":
            return load_haberman()
        return load_csv(self.data, self.label_column, self.positive_rule, self.header)

    def echo(self) -> dict:
        return {
            "data": self.data, "algorithm": self.algorithm, "rado": self.rado,
            "T": self.T, "n": self.n, "weak": str(parse_weak(self.weak)),
            "kappa": self.kappa, "folds": self.folds, "seed": self.seed,
        }


@dataclass
class ExperimentResult:
    config: dict
    fold_errors: List[float]
    best_iterates: List[int]
    n_rados: List[int]
    wall_time: Optional[float] = None
    schema_version: str = SCHEMA_VERSION

    @property
    def mean(self) -> float:
        return float(np.mean(self.fold_errors))

    @property
    def std(self) -> float:
        """Population standard deviation over folds."""
        return float(np.std(self.fold_errors))

    def to_dict(self, include_time: bool = False) -> dict:
        out = {
            "schema_version": self.schema_version,
            "config": self.config,
            "fold_errors": self.fold_errors,
            "mean": self.mean,
            "std": self.std,
            "best_iterates": self.best_iterates,
            "n_rados": self.n_rados,
        }
        if include_time and self.wall_time is not None:
            out["wall_time"] = self.wall_time
        return out

    def to_json(self, include_time: bool = False) -> str:
        """Canonical JSON; wall time is left out unless asked so reruns compare equal."""
        return json.dumps(self.to_dict(include_time), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentResult":
        obj = json.loads(text)
        validate_result(obj)
        return cls(obj["config"], obj["fold_errors"], obj["best_iterates"], obj["n_rados"],
                   obj.get("wall_time"), obj["schema_version"])


def validate_result(obj: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if ``obj`` does not follow the result schema."""
    jsonschema.validate(obj, RESULT_SCHEMA)


def parse_rado_strategy(text: str):
    """Return ("uniform",), ("support", fraction) or ("dp", j_star, epsilon)."""
    text = text.strip().lower()
    if text == "uniform":
        return ("uniform",)
    if text.startswith("support="):
        fraction = float(text.split("=", 1)[1])
        if not 0 < fraction <= 1:
            raise ValueError(f"support fraction must lie in (0, 1], got {fraction}")
        return ("support", fraction)
    if text.startswith("dp:"):
        parts = text[3:].split(",")
        if len(parts) != 2:
            raise ValueError(f"expected dp:j,eps, got {text!r}")
        j_star, epsilon = int(parts[0]), float(parts[1])
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        return ("dp", j_star, epsilon)
    raise ValueError(f"unknown rado strategy {text!r}")


def default_n(train_size: int) -> int:
    return max(1, min(N_CAP, train_size // 2))


def best_iterate(curve: Sequence[float]) -> int:
    """1-based index of the earliest minimum of a per-round objective curve."""
    values = np.asarray(curve, dtype=np.float64)
    if values.size == 0:
        raise ValueError("empty objective curve")
    return int(np.argmin(values)) + 1


def fold_seed(master: int, fold: int, repeat: int, stream: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([master, fold, repeat, stream])


def build_rados(train: Dataset, strategy: str, n: int, seed):
    kind = parse_rado_strategy(strategy)
    rng = np.random.default_rng(seed)
    if kind[0] == "uniform":
        return uniform_rados(train, n, rng)
    if kind[0] == "support":
        m_star = min(train.m, max(1, int(round(kind[1] * train.m))))
        return fixed_support_rados(train, m_star, n, rng)
    j_star, epsilon = kind[1], kind[2]
    seed_int = int(rng.integers(0, 2 ** 63))
    return dpfreal(train, DpFeatureConfig(j_star, epsilon, n, seed_int))


def train_once(train: Dataset, spec: ExperimentSpec, fold: int = 0, repeat: int = 0):
    """Train on one training set and return (best model, trace, best index, n rados)."""
    config = spec.boost_config()
    if spec.algorithm == "adaboost_ss":
        _, trace = adaboost_ss(train, config)
        n_used = 0
    else:
        n_used = spec.n if spec.n is not None else default_n(train.m)
        rados = build_rados(train, spec.rado, n_used, fold_seed(spec.seed, fold, repeat, _RADO_STREAM))
        _, trace = radoboost(rados, config)
    best = best_iterate(trace.log_objective)
    return trace.model_at(best), trace, best, n_used


def _run_fold(args):
    dataset, assignments, spec, fold, repeat, varsigma = args
    test_mask = assignments == fold
    train, test = dataset.subset(~test_mask), dataset.subset(test_mask)
    if varsigma > 0:
        noise_seed = int(np.random.default_rng(
            fold_seed(spec.seed, fold, repeat, _NOISE_STREAM)).integers(0, 2 ** 63))
        train = gaussian_noisify(train, NoiseConfig(varsigma, noise_seed))
    model, _, best, n_used = train_once(train, spec, fold, repeat)
    return 100.0 * zero_one_error(test, model), best, n_used


def run_cv_experiment(spec: ExperimentSpec, dataset: Optional[Dataset] = None,
                      varsigma: float = 0.0, repeat: int = 0) -> ExperimentResult:
    """k-fold stratified cross-validation of one learner.

    With ``varsigma > 0`` each training fold is noisified by the Gaussian
    mechanism before rados are built; test folds stay clean.
    """
    start = time.perf_counter()
    dataset = dataset if dataset is not None else spec.load()
    plan = stratified_folds(dataset, spec.folds, spec.seed)
    tasks = [(dataset, plan.assignments, spec, f, repeat, varsigma) for f in range(spec.folds)]
    if spec.workers > 1:
        with ProcessPoolExecutor(spec.workers) as pool:
            outcomes = list(pool.map(_run_fold, tasks))
    else:
        outcomes = [_run_fold(t) for t in tasks]
    config = spec.echo()
    if varsigma > 0:
        config.update(varsigma=varsigma, repeat=repeat)
    return ExperimentResult(
        config,
        [float(e) for e, _, _ in outcomes],
        [int(b) for _, b, _ in outcomes],
        [int(n) for _, _, n in outcomes],
        time.perf_counter() - start,
    )


@dataclass
class SweepTable:
    """Summary rows (one per noise level and strategy) plus the per-run rows behind them."""

    rows: List[dict] = field(default_factory=list)
    runs: List[dict] = field(default_factory=list)

    SUMMARY_FIELDS = ("varsigma", "algorithm", "strategy", "weak", "mean_err", "std", "delta_perr")
    RUN_FIELDS = ("varsigma", "repeat", "algorithm", "strategy", "weak", "mean_err", "std")

    @staticmethod
    def _csv(rows, fields) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
        return buf.getvalue()

    def rows_csv(self) -> str:
        return self._csv(self.rows, self.SUMMARY_FIELDS)

    def runs_csv(self) -> str:
        return self._csv(self.runs, self.RUN_FIELDS)


def _sweep_run_row(varsigma, repeat, algorithm, strategy, weak, result):
    return {"varsigma": varsigma, "repeat": repeat, "algorithm": algorithm,
            "strategy": strategy, "weak": weak, "mean_err": result.mean, "std": result.std}


def run_noise_sweep(spec: ExperimentSpec, strategies: Optional[Sequence[str]] = None,
                    dataset: Optional[Dataset] = None) -> SweepTable:
    """RadoBoost under Gaussian noise, paired with AdaBoost-SS on the same noisy folds.

    For each noise level and each rado strategy one summary row is emitted;
    the baseline always uses the strong weak learner.
    Its mean is the average over repeats of the cross-validated means, and
    ``delta_perr`` is that mean minus the AdaBoost-SS average.  At
    varsigma = 0 noise is off and every repeat would be identical, so a single
    run with repeat index 0 is made; it equals the plain benchmark.
    """
    dataset = dataset if dataset is not None else spec.load()
    strategies = tuple(strategies) if strategies else (spec.rado,)
    weak = str(parse_weak(spec.weak))
    table = SweepTable()
    # the paired baseline keeps AdaBoost-SS's usual strong weak learner
    baseline_spec = _replace(spec, algorithm="adaboost_ss", weak="strong")
    for varsigma in spec.sigmas:
        repeats = range(1) if varsigma == 0 else range(spec.repeats)
        base_means = []
        for r in repeats:
            res = run_cv_experiment(baseline_spec, dataset, varsigma, r)
            base_means.append(res.mean)
            table.runs.append(_sweep_run_row(varsigma, r, "adaboost_ss", "examples", "strong", res))
        base_mean = float(np.mean(base_means))
        for strategy in strategies:
            rado_spec = _replace(spec, algorithm="radoboost", rado=strategy)
            means = []
            for r in repeats:
                res = run_cv_experiment(rado_spec, dataset, varsigma, r)
                means.append(res.mean)
                table.runs.append(_sweep_run_row(varsigma, r, "radoboost", strategy, weak, res))
            mean = float(np.mean(means))
            table.rows.append({
                "varsigma": varsigma, "algorithm": "radoboost", "strategy": strategy,
                "weak": weak, "mean_err": mean, "std": float(np.std(means)),
                "delta_perr": mean - base_mean,
            })
    return table


def _replace(spec: ExperimentSpec, **changes) -> ExperimentSpec:
    values = asdict(spec)
    values.update(changes)
    return ExperimentSpec(**values)


def summarize_trace(trace: BoostTrace) -> dict:
    best = best_iterate(trace.log_objective)
    return {"best_iterate": best, "best_log_objective": trace.log_objective[best - 1],
            **trace.summary()}

