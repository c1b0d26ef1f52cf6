"""AdaBoost-SS over raw examples, with single features as weak hypotheses.

This is the comparator for RadoBoost: the weak learner kinds, edge clipping
and tie-breaking are shared so the only difference between the two learners
is whether they see rados or examples.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import logsumexp

from .boosting import BoostConfig, BoostTrace, adjust_edge, leveraging, pick_feature
from .dataset import Dataset
from .errors import ZeroColumnError
from .losses import LinearModel


def example_edge(dataset: Dataset, weights, k: int) -> float:
    """r = sum_i w_i y_i x_ik / x_{*k}."""
    weights = np.asarray(weights, dtype=np.float64)
    column = dataset.X[:, k]
    x_star = np.abs(column).max()
    if x_star == 0:
        raise ZeroColumnError(f"feature {k} is zero on every example")
    return float(weights @ (dataset.y * column) / x_star)


def adaboost_ss(dataset: Dataset, config: BoostConfig = None, record_weights: bool = False):
    """AdaBoost with real-valued single-feature hypotheses h(x) = x_k / x_{*k}.

    Returns ``(model, trace)``; the trace's objective is the log of the mean
    exponential loss over the training examples.
    """
    config = config or BoostConfig()
    m, d = dataset.X.shape
    edges_matrix = dataset.edges
    col_max = np.abs(dataset.X).max(axis=0)
    usable = col_max > 0
    margins = np.zeros(m)
    weights = np.full(m, 1.0 / m)
    theta = np.zeros(d)
    trace = BoostTrace(d, weights=[weights.copy()] if record_weights else None,
                       algorithm="adaboost_ss")
    log_m = math.log(m)

    for _ in range(config.T):
        r_all = np.full(d, np.nan)
        r_all[usable] = (weights @ edges_matrix[:, usable]) / col_max[usable]
        k = pick_feature(r_all, config.weak)
        r = adjust_edge(float(r_all[k]), config.weak)
        r = min(max(r, -config.r_clip), config.r_clip)
        alpha = leveraging(r, col_max[k], config.kappa)

        theta[k] += alpha
        margins += alpha * edges_matrix[:, k]
        # weights are exp(-margin) renormalized; computing them from the
        # margins keeps them exact after any number of rounds
        log_w = -margins
        weights = np.exp(log_w - log_w.max())
        weights /= weights.sum()

        trace.iota.append(k)
        trace.edge.append(r)
        trace.alpha.append(alpha)
        trace.log_objective.append(float(logsumexp(-margins) - log_m))
        if record_weights:
            trace.weights.append(weights.copy())

    return LinearModel(theta), trace


def example_weights_from_rado_weights(dataset: Dataset, signatures, rado_weights, k: int):
    """Example weights matching a rado weighting on feature k.

    Builds w~_i proportional to (x_{*k} / pi_{*k}) * sum_{j: sigma_ji = y_i} w_j
    and returns ``(w_tilde, W)`` where W is the normalizer, so that the rado
    edge equals ``W * example_edge(dataset, w_tilde, k)``.
    """
    sigmas = np.atleast_2d(np.asarray(signatures))
    w = np.asarray(rado_weights, dtype=np.float64)
    selection = (sigmas == dataset.y).astype(np.float64)
    pi_star = np.abs(selection @ dataset.edges[:, k]).max()
    x_star = np.abs(dataset.X[:, k]).max()
    raw = (x_star / pi_star) * (w @ selection)
    total = raw.sum()
    return raw / total, total
