"""RadoBoost: boosting a linear classifier from a set of rados.

Each round asks a weak feature oracle for a feature index, computes the
normalized edge of the rado weights on that feature, adds a leveraging
coefficient to the feature's weight and reweights the rados with a
multiplicative update that needs no exponentials.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy.special import logsumexp

from .core import RadoSet
from .errors import WeakLearnerError, ZeroColumnError
from .losses import LinearModel


@dataclass(frozen=True)
class Strong:
    """Pick the feature with the largest |r|."""

    def __str__(self):
        return "strong"


@dataclass(frozen=True)
class ClampedStrong:
    """Strong pick, then the edge used for leveraging is pushed to |r| >= floor."""

    floor: float = 0.1

    def __post_init__(self):
        if not 0 < self.floor < 1:
            raise ValueError("floor must lie in (0, 1)")

    def __str__(self):
        return f"clamped:{self.floor:g}"


@dataclass(frozen=True)
class MedianPrudential:
    """Pick the feature whose |r| is the lower median among usable features."""

    def __str__(self):
        return "median"


@dataclass(frozen=True)
class LambdaPrudential:
    """Pick the largest |r| among features with |r| <= lambda_p."""

    lambda_p: float

    def __post_init__(self):
        if not 0 < self.lambda_p < 1:
            raise ValueError("lambda_p must lie in (0, 1)")

    def __str__(self):
        return f"lambda:{self.lambda_p:g}"


WeakLearnerKind = Union[Strong, ClampedStrong, MedianPrudential, LambdaPrudential]


def parse_weak(text: str) -> WeakLearnerKind:
    """Parse ``strong``, ``clamped[:floor]``, ``median`` or ``lambda:x``."""
    name, _, arg = text.strip().lower().partition(":")
    if name == "strong":
        return Strong()
    if name == "clamped":
        return ClampedStrong(float(arg)) if arg else ClampedStrong()
    if name == "median":
        return MedianPrudential()
    if name == "lambda" and arg:
        return LambdaPrudential(float(arg))
    raise ValueError(f"unknown weak learner {text!r}")


def adjust_edge(r: float, kind: WeakLearnerKind) -> float:
    """Edge actually used for leveraging and reweighting."""
    if isinstance(kind, ClampedStrong):
        return math.copysign(max(kind.floor, abs(r)), r) if r != 0 else 0.0
    return r


@dataclass
class BoostConfig:
    T: int = 1000
    kappa: float = 1.0
    weak: WeakLearnerKind = field(default_factory=Strong)
    r_clip: float = 1.0 - 1e-10

    def __post_init__(self):
        if self.T < 1:
            raise ValueError("T must be at least 1")
        if self.kappa < 1:
            raise ValueError("kappa must be >= 1")
        if not 0 < self.r_clip < 1:
            raise ValueError("r_clip must lie in (0, 1)")
        if isinstance(self.weak, str):
            self.weak = parse_weak(self.weak)

    def echo(self) -> dict:
        return {"T": self.T, "kappa": self.kappa, "weak": str(self.weak), "r_clip": self.r_clip}


@dataclass
class BoostTrace:
    """Per-round history of a boosting run.

    ``iota[t]``, ``edge[t]`` and ``alpha[t]`` describe round t+1; ``edge`` holds
    the (clipped, possibly clamped) r fed to the updates.  ``log_objective[t]``
    is the log of the learner's own exponential training loss after that
    round.
    """

    d: int
    iota: List[int] = field(default_factory=list)
    edge: List[float] = field(default_factory=list)
    alpha: List[float] = field(default_factory=list)
    log_objective: List[float] = field(default_factory=list)
    weights: Optional[List[np.ndarray]] = None
    algorithm: str = "radoboost"

    @property
    def T(self) -> int:
        return len(self.iota)

    def theta_at(self, t: Optional[int] = None) -> np.ndarray:
        """theta after the first t rounds, accumulated in round order."""
        t = self.T if t is None else t
        theta = np.zeros(self.d)
        for k, a in zip(self.iota[:t], self.alpha[:t]):
            theta[k] += a
        return theta

    def model_at(self, t: Optional[int] = None) -> LinearModel:
        return LinearModel(self.theta_at(t))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "iota", "r", "alpha"])
        for t, (k, r, a) in enumerate(zip(self.iota, self.edge, self.alpha), start=1):
            writer.writerow([t, k, repr(r), repr(a)])
        return buf.getvalue()

    def summary(self) -> dict:
        edges = np.abs(np.asarray(self.edge)) if self.edge else np.zeros(0)
        return {
            "algorithm": self.algorithm,
            "T": self.T,
            "picks": np.bincount(np.asarray(self.iota, dtype=np.int64), minlength=self.d).tolist(),
            "min_abs_edge": float(edges.min()) if edges.size else None,
            "max_abs_edge": float(edges.max()) if edges.size else None,
            "final_log_objective": self.log_objective[-1] if self.log_objective else None,
        }


def _check_simplex(weights: np.ndarray, size: int) -> None:
    if weights.shape != (size,):
        raise ValueError(f"expected {size} weights, got shape {weights.shape}")
    if weights.min() < 0 or abs(weights.sum() - 1.0) > 1e-9:
        raise ValueError("weights must be nonnegative and sum to 1")


def normalized_edge(rados: RadoSet, weights, k: int) -> float:
    """r = sum_j w_j pi_jk / pi_{*k}; always in [-1, 1]."""
    weights = np.asarray(weights, dtype=np.float64)
    _check_simplex(weights, rados.n)
    column = rados.values[:, k]
    pi_star = np.abs(column).max()
    if pi_star == 0:
        raise ZeroColumnError(f"feature {k} is zero on every rado")
    return float(weights @ column / pi_star)


def all_edges(values: np.ndarray, weights: np.ndarray, col_max: np.ndarray) -> np.ndarray:
    """Normalized edges of every feature; NaN where the column is zero."""
    usable = col_max > 0
    edges = np.full(values.shape[1], np.nan)
    edges[usable] = (weights @ values[:, usable]) / col_max[usable]
    return edges


def leveraging(r: float, pi_star: float, kappa: float = 1.0) -> float:
    """alpha = log((1 + r) / (1 - r)) / (2 kappa pi_star)."""
    return math.log((1.0 + r) / (1.0 - r)) / (2.0 * kappa * pi_star)


def weight_update(weights, rados: RadoSet, k: int, r: float) -> np.ndarray:
    """w'_j = w_j (1 - r pi_jk / pi_{*k}) / (1 - r^2), renormalized.

    The update preserves mass exactly when r is the normalized edge of
    ``weights``; renormalizing only removes round-off (or the drift caused by
    a clipped or clamped r).
    """
    weights = np.asarray(weights, dtype=np.float64)
    column = rados.values[:, k]
    pi_star = np.abs(column).max()
    return _rado_update(weights, column / pi_star, r)


def _rado_update(weights: np.ndarray, ratio: np.ndarray, r: float) -> np.ndarray:
    new = weights * (1.0 - r * ratio) / (1.0 - r * r)
    np.maximum(new, 0.0, out=new)
    return new / new.sum()


def pick_feature(edges: np.ndarray, kind: WeakLearnerKind) -> int:
    """Apply a weak-learner rule to a vector of edges (NaN = unusable feature).

    Ties always go to the lowest feature index.
    """
    usable = np.flatnonzero(~np.isnan(edges))
    if usable.size == 0:
        raise WeakLearnerError("no usable feature: every rado column is zero")
    mag = np.abs(edges[usable])
    if isinstance(kind, (Strong, ClampedStrong)):
        return int(usable[np.argmax(mag)])
    if isinstance(kind, MedianPrudential):
        order = np.lexsort((usable, mag))
        target = mag[order[(usable.size - 1) // 2]]
        return int(usable[np.flatnonzero(mag == target)[0]])
    if isinstance(kind, LambdaPrudential):
        feasible = mag <= kind.lambda_p
        if not feasible.any():
            raise WeakLearnerError(
                f"no feature has |r| <= {kind.lambda_p}; smallest |r| is {mag.min():.4g}"
            )
        masked = np.where(feasible, mag, -np.inf)
        return int(usable[np.argmax(masked)])
    raise TypeError(f"unknown weak learner kind {kind!r}")


def weak_pick(rados: RadoSet, weights, kind: WeakLearnerKind = Strong()) -> int:
    weights = np.asarray(weights, dtype=np.float64)
    return pick_feature(all_edges(rados.values, weights, rados.column_max()), kind)


def radoboost(rados: RadoSet, config: BoostConfig = None,
              forced_picks: Sequence[int] = None,
              record_weights: bool = False):
    """Run RadoBoost for ``config.T`` rounds.

    Returns ``(model, trace)``.  ``forced_picks`` overrides the weak learner
    with a fixed feature sequence (used to compare runs that differ only in
    kappa).
    """
    config = config or BoostConfig()
    n, d = rados.values.shape
    if n < 1 or d < 1:
        raise ValueError("need at least one rado and one feature")
    values = rados.values
    col_max = rados.column_max()
    weights = np.full(n, 1.0 / n)
    scores = np.zeros(n)
    theta = np.zeros(d)
    trace = BoostTrace(d, weights=[weights.copy()] if record_weights else None)
    log_n = math.log(n)

    for t in range(config.T):
        if forced_picks is None:
            k = pick_feature(all_edges(values, weights, col_max), config.weak)
        else:
            k = int(forced_picks[t])
            if col_max[k] == 0:
                raise ZeroColumnError(f"feature {k} is zero on every rado")
        ratio = values[:, k] / col_max[k]
        r = float(weights @ ratio)
        r = adjust_edge(r, config.weak)
        r = min(max(r, -config.r_clip), config.r_clip)
        alpha = leveraging(r, col_max[k], config.kappa)
        weights = _rado_update(weights, ratio, r)

        theta[k] += alpha
        scores += alpha * values[:, k]
        trace.iota.append(k)
        trace.edge.append(r)
        trace.alpha.append(alpha)
        trace.log_objective.append(float(logsumexp(-scores) - log_n))
        if record_weights:
            trace.weights.append(weights.copy())

    return LinearModel(theta), trace


def boosting_bound(trace: BoostTrace) -> float:
    """prod_t sqrt(1 - r_t^2), the guaranteed ceiling on the exponential rado-risk."""
    r = np.asarray(trace.edge)
    return float(np.exp(0.5 * np.log1p(-r * r).sum()))


def config_from_dict(obj: dict) -> BoostConfig:
    return BoostConfig(obj["T"], obj.get("kappa", 1.0), parse_weak(obj.get("weak", "strong")),
                       obj.get("r_clip", 1.0 - 1e-10))


__all__ = [
    "Strong", "ClampedStrong", "MedianPrudential", "LambdaPrudential", "WeakLearnerKind",
    "BoostConfig", "BoostTrace", "parse_weak", "adjust_edge", "normalized_edge",
    "all_edges", "leveraging", "weight_update", "pick_feature", "weak_pick",
    "radoboost", "boosting_bound", "config_from_dict",
]
