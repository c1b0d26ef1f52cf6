"""Differentially private rado generation.

Two mechanisms live here.  ``dpfreal`` protects one boolean feature by
rejection sampling: a uniformly drawn signature is kept only if the rado's
coordinate on that feature stays away from both tails.  ``gaussian_noisify``
is the standard Gaussian mechanism applied to the observations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import RadoSet, compute_rados
from .dataset import Dataset
from .errors import DatasetError, DrawBudgetExceeded

BUDGET_SAFETY = 10
BUDGET_ETA = 0.05


@dataclass(frozen=True)
class DpFeatureConfig:
    j_star: int
    epsilon: float
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.n < 1:
            raise ValueError("n must be positive")


@dataclass(frozen=True)
class DpAcceptanceInterval:
    lo: float
    hi: float
    m_plus: int
    m_minus: int
    m: int
    beta: float

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    def contains(self, z) -> np.ndarray:
        return (self.lo <= z) & (z <= self.hi)

    def achievable(self) -> bool:
        """True if some attainable integer coordinate falls inside the window."""
        low = max(math.ceil(self.lo), -self.m_minus)
        high = min(math.floor(self.hi), self.m_plus)
        return low <= high


@dataclass(frozen=True)
class NoiseConfig:
    varsigma: float
    seed: int = 0

    def __post_init__(self):
        if not self.varsigma > 0:
            raise ValueError("varsigma must be positive")


def dp_beta(epsilon: float) -> float:
    """Tail fraction 1 / (1 + exp(epsilon / 2)), in (0, 1/2)."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    return 1.0 / (1.0 + math.exp(epsilon / 2.0))


def _boolean_edges(dataset: Dataset, j_star: int) -> np.ndarray:
    if not 0 <= j_star < dataset.d:
        raise DatasetError(f"feature index {j_star} out of range for d={dataset.d}")
    column = dataset.X[:, j_star]
    values = set(np.unique(column).tolist())
    if not (values <= {0.0, 1.0} or values <= {-1.0, 1.0}):
        raise DatasetError(f"feature {j_star} is not boolean (values {sorted(values)[:5]}...)")
    return dataset.y * column


def dp_interval(dataset: Dataset, j_star: int, beta: float) -> DpAcceptanceInterval:
    """Acceptance window [m+ - m + beta (m+1), m+ - beta (m+1)] on feature j_star.

    m+ counts the examples with y_i x_{i j*} = +1.  The thresholds are kept
    real-valued and compared against the integer rado coordinate.
    """
    if not 0 < beta < 0.5:
        raise ValueError("beta must lie in (0, 1/2)")
    edge = _boolean_edges(dataset, j_star)
    m = dataset.m
    m_plus = int(np.sum(edge == 1))
    m_minus = int(np.sum(edge == -1))
    return DpAcceptanceInterval(m_plus - m + beta * (m + 1), m_plus - beta * (m + 1),
                                m_plus, m_minus, m, beta)


def bit_entropy_divergence(p: float, q: float) -> float:
    """p log(p/q) + (1-p) log((1-p)/(1-q)), natural log."""
    if not (0 < p < 1 and 0 < q < 1):
        raise ValueError("arguments must lie in (0, 1)")
    return p * math.log(p / q) + (1 - p) * math.log((1 - p) / (1 - q))


def rejection_threshold(beta: float, eta: float) -> float:
    """n*_eta: below this many rados no rejection is expected with confidence 1 - eta."""
    return eta * (1.0 - math.exp(2.0 * beta - 1.0)) / (4.0 * beta)


def rejection_bound(m: int, beta: float, n: int, eta: float) -> int:
    """Upper bound on the number of draws needed to accept n rados, w.p. >= 1 - eta."""
    if not 0 < beta < 0.5:
        raise ValueError("beta must lie in (0, 1/2)")
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    n_star = rejection_threshold(beta, eta)
    if n <= n_star:
        return n
    divergence = bit_entropy_divergence(1.0 - beta, 0.5)
    rounds = math.ceil(math.log(n / n_star) / (m * divergence))
    return n * rounds


def acceptance_probability(dataset: Dataset, j_star: int, beta: float) -> Fraction:
    """Exact probability that a uniform signature lands in the acceptance window.

    The coordinate is (#selected +1 edges) - (#selected -1 edges) with each
    example selected independently with probability 1/2, so the count of
    signatures giving coordinate z is sum_a C(m+, a) C(m-, a - z), times
    2^(number of zero edges).
    """
    window = dp_interval(dataset, j_star, beta)
    p, q = window.m_plus, window.m_minus
    count = 0
    for z in range(-q, p + 1):
        if window.lo <= z <= window.hi:
            count += sum(math.comb(p, a) * math.comb(q, a - z)
                         for a in range(max(0, z), min(p, q + z) + 1))
    return Fraction(count, 2 ** (p + q))


def dpfreal(dataset: Dataset, config: DpFeatureConfig, eta: float = BUDGET_ETA,
            keep_draws: bool = False) -> RadoSet:
    """Feature-wise DP rados by Rademacher rejection sampling.

    Signatures are drawn uniformly from {-1, +1}^m, in batches from a single
    seeded generator, and accepted while the rado coordinate on ``j_star``
    lies in the window.  Sampling stops after ``config.n`` acceptances; if
    that takes more than ``BUDGET_SAFETY`` times the theoretical bound the
    run aborts with :class:`DrawBudgetExceeded`.

    The returned set records the total number of draws ``n_R`` and the
    privacy budget in ``metadata``.  With ``keep_draws`` the metadata also
    holds every drawn signature and its accept flag.
    """
    beta = dp_beta(config.epsilon)
    window = dp_interval(dataset, config.j_star, beta)
    if window.empty or not window.achievable():
        raise DatasetError(
            f"acceptance window [{window.lo:.3f}, {window.hi:.3f}] holds no attainable "
            f"coordinate (m+={window.m_plus}, m-={window.m_minus})"
        )
    m, n = dataset.m, config.n
    budget = BUDGET_SAFETY * rejection_bound(m, beta, n, eta)
    edge = dataset.y * dataset.X[:, config.j_star]
    rng = np.random.default_rng(config.seed)

    accepted, drawn, flags = [], [], []
    n_accepted = draws = 0
    while n_accepted < n:
        batch = min(max(2 * (n - n_accepted), 64), budget - draws)
        if batch <= 0:
            raise DrawBudgetExceeded(
                f"only {n_accepted} of {n} rados accepted after {draws} draws "
                f"(budget {budget}); window [{window.lo:.3f}, {window.hi:.3f}]",
                accepted=n_accepted, draws=draws,
            )
        sigmas = 2 * rng.integers(0, 2, size=(batch, m), dtype=np.int8) - 1
        ok = window.contains((sigmas == dataset.y) @ edge)
        hits = np.flatnonzero(ok)
        need = n - n_accepted
        # draws past the n-th acceptance are discarded and not counted
        used = hits[need - 1] + 1 if hits.size >= need else batch
        accepted.append(sigmas[:used][ok[:used]])
        if keep_draws:
            drawn.append(sigmas[:used])
            flags.append(ok[:used])
        n_accepted += int(ok[:used].sum())
        draws += int(used)

    sigmas = np.concatenate(accepted)
    rados = compute_rados(dataset, sigmas, f"dp-feature j*={config.j_star},eps={config.epsilon:g}")
    rados.metadata = {
        "j_star": config.j_star,
        "epsilon": config.epsilon,
        "beta": beta,
        "lo": window.lo,
        "hi": window.hi,
        "m_plus": window.m_plus,
        "n": n,
        "n_R": draws,
        "budget": [n * config.epsilon, "n*delta, epsilon*delta=O(m^-5/2)"],
    }
    if keep_draws:
        rados.metadata["draws"] = np.concatenate(drawn)
        rados.metadata["accepted_flags"] = np.concatenate(flags)
    return rados


def gaussian_noisify(dataset: Dataset, noise: NoiseConfig) -> Dataset:
    """Add i.i.d. N(0, varsigma^2) noise to every feature of every observation.

    Labels are untouched; since y_i is +-1, noising x_i or the edge y_i x_i
    has the same distribution.
    """
    rng = np.random.default_rng(noise.seed)
    noisy = dataset.X + rng.normal(0.0, noise.varsigma, size=dataset.X.shape)
    out = dataset.with_features(noisy)
    out.metadata["varsigma"] = noise.varsigma
    return out


def gaussian_sigma(epsilon: float, delta: float, l2_sensitivity: float) -> float:
    """Noise scale sqrt(2 ln(1.25/delta)) * sensitivity / epsilon."""
    if epsilon <= 0 or l2_sensitivity <= 0:
        raise ValueError("epsilon and sensitivity must be positive")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return math.sqrt(2.0 * math.log(1.25 / delta)) * l2_sensitivity / epsilon


def composition_budget(config: DpFeatureConfig) -> dict:
    """Privacy budget of a DPFReal run: (n eps, n delta) with eps delta = O(m^-5/2)."""
    return {"epsilon_total": config.n * config.epsilon,
            "delta_total": "n*delta", "delta_order": "epsilon*delta = O(m^-5/2)"}


def signature_in_window(dataset: Dataset, sigma, j_star: int,
                        window: Optional[DpAcceptanceInterval] = None, beta: float = None) -> bool:
    """Brute-force membership test of one signature in the DP signature set."""
    if window is None:
        window = dp_interval(dataset, j_star, beta)
    sigma = np.asarray(sigma)
    coord = float(np.sum((sigma == dataset.y) * dataset.y * dataset.X[:, j_star]))
    return bool(window.lo <= coord <= window.hi)
