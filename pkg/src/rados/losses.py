"""Logistic loss over examples and the exponential / logistic rado-risks.

All rado-risk internals work with the log of the mean of exp(-theta . pi):
rado coordinates grow with m, so the linear-space exponentials overflow long
before the risks themselves become meaningless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, logsumexp

from .core import ENUMERATION_LIMIT, RadoSet, enumerate_all_rados
from .dataset import Dataset
from .errors import DatasetError, NumericError

LOG2 = math.log(2.0)
_EXP_LIMIT = 700.0


@dataclass
class LinearModel:
    theta: np.ndarray

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=np.float64).ravel()
        if not np.all(np.isfinite(self.theta)):
            raise NumericError("model weights must be finite")

    @property
    def d(self) -> int:
        return self.theta.shape[0]

    def decision_function(self, X) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.theta

    def predict(self, X) -> np.ndarray:
        """Signs of theta . x; zero scores are returned as 0."""
        return np.sign(self.decision_function(X)).astype(np.int64)

    @classmethod
    def zeros(cls, d: int) -> "LinearModel":
        return cls(np.zeros(d))


def _theta(model) -> np.ndarray:
    return model.theta if isinstance(model, LinearModel) else np.asarray(model, dtype=np.float64)


def _check_dims(d: int, theta: np.ndarray) -> None:
    if theta.shape[0] != d:
        raise DatasetError(f"model has {theta.shape[0]} weights, data has {d} features")


def softplus_neg(z: np.ndarray) -> np.ndarray:
    """log(1 + exp(-z)) without overflow."""
    z = np.asarray(z, dtype=np.float64)
    return np.log1p(np.exp(-np.abs(z))) + np.maximum(0.0, -z)


def logloss(dataset: Dataset, model) -> float:
    theta = _theta(model)
    _check_dims(dataset.d, theta)
    margins = dataset.y * (dataset.X @ theta)
    return float(softplus_neg(margins).mean())


def logloss_gradient(dataset: Dataset, model) -> np.ndarray:
    """Gradient of the mean logistic loss with respect to theta."""
    theta = _theta(model)
    margins = dataset.y * (dataset.X @ theta)
    coef = -expit(-margins)
    return (coef[:, None] * dataset.edges).mean(axis=0)


def rado_scores(rados: RadoSet, model) -> np.ndarray:
    """theta . pi_j for every rado."""
    theta = _theta(model)
    _check_dims(rados.d, theta)
    return rados.values @ theta


def log_exp_rado_risk(rados: RadoSet, model) -> float:
    """log of the exponential rado-risk, via log-sum-exp."""
    if rados.n < 1:
        raise DatasetError("empty rado set")
    return float(logsumexp(-rado_scores(rados, model)) - math.log(rados.n))


def exp_rado_risk(rados: RadoSet, model) -> float:
    """Mean of exp(-theta . pi) over the rados.

    Raises :class:`NumericError` if any exponent exceeds 700; use
    :func:`log_exp_rado_risk` in that regime.
    """
    exponents = -rado_scores(rados, model)
    if rados.n < 1:
        raise DatasetError("empty rado set")
    if exponents.max() > _EXP_LIMIT:
        raise NumericError(
            f"exp({exponents.max():.1f}) overflows; request the log form instead"
        )
    return float(np.exp(exponents).mean())


def logistic_rado_risk(rados: RadoSet, model, m: int) -> float:
    """log 2 + (1/m) log of the exponential rado-risk."""
    if m < 1:
        raise ValueError("m must be positive")
    return LOG2 + log_exp_rado_risk(rados, model) / m


def equivalence_gap(dataset: Dataset, model, rados: RadoSet | None = None,
                    limit: int = ENUMERATION_LIMIT) -> float:
    """Gap between the logistic loss and the logistic rado-risk.

    With no ``rados`` the risk is taken over all 2^m signatures and the
    absolute gap is returned (it is zero up to round-off).  With a sampled
    rado set the signed gap logloss - risk is returned.
    """
    if rados is None:
        full = enumerate_all_rados(dataset, limit)
        return abs(logloss(dataset, model) - logistic_rado_risk(full, model, dataset.m))
    return logloss(dataset, model) - logistic_rado_risk(rados, model, dataset.m)


def zero_one_error(dataset: Dataset, model) -> float:
    """Fraction of examples with sign(theta . x) != y; a zero score counts as an error."""
    theta = _theta(model)
    _check_dims(dataset.d, theta)
    margins = dataset.y * (dataset.X @ theta)
    return float(np.mean(margins <= 0))
