import math
from fractions import Fraction

import numpy as np
import pytest

from rados import Dataset, DatasetError, DpFeatureConfig, NoiseConfig, dp_beta, dp_interval, dpfreal
from rados.errors import DrawBudgetExceeded
from rados.privacy import (acceptance_probability, bit_entropy_divergence, composition_budget,
                           gaussian_noisify, gaussian_sigma, rejection_bound, rejection_threshold,
                           signature_in_window)

from oracles import dp_window_set


def boolean_dataset(rng, m, d=3, encoding=(-1.0, 1.0)):
    X = rng.choice(encoding, size=(m, d))
    y = rng.choice([-1, 1], size=m)
    y[0], y[-1] = 1, -1
    return Dataset(X, y)


def test_beta_values():
    assert dp_beta(2.0) == pytest.approx(1 / (1 + math.e), rel=1e-15)
    assert dp_beta(2.0) == pytest.approx(0.268941, abs=1e-6)
    assert abs(dp_beta(1e-12) - 0.5) <= 1e-9
    assert dp_beta(50.0) < 1e-10
    with pytest.raises(ValueError):
        dp_beta(0.0)


def test_interval_arithmetic():
    # m = 10 with six +1 edges and four -1 edges on feature 0
    X = np.ones((10, 1))
    y = np.array([1] * 6 + [-1] * 4)
    window = dp_interval(Dataset(X, y), 0, 0.2)
    assert window.lo == pytest.approx(-1.8, abs=1e-12)
    assert window.hi == pytest.approx(3.8, abs=1e-12)
    assert (window.m_plus, window.m_minus) == (6, 4)


def test_interval_tiny_beta_is_full_range():
    X = np.ones((10, 1))
    y = np.array([1] * 6 + [-1] * 4)
    window = dp_interval(Dataset(X, y), 0, 1e-15)
    assert window.lo == pytest.approx(6 - 10, abs=1e-12)
    assert window.hi == pytest.approx(6, abs=1e-12)


def test_interval_shrinks_to_center_near_half():
    X = np.ones((8, 1))
    y = np.array([1] * 4 + [-1] * 4)
    window = dp_interval(Dataset(X, y), 0, 0.5 - 1e-9)
    # the window collapses around the center 0 of [-m_minus, m_plus]
    assert window.lo == pytest.approx(0.5, abs=1e-6) and window.hi == pytest.approx(-0.5, abs=1e-6)
    assert window.empty


def test_non_boolean_feature_rejected():
    ds = Dataset([[0.5], [1.0]], [1, -1])
    with pytest.raises(DatasetError, match="not boolean"):
        dp_interval(ds, 0, 0.2)


def test_dpfreal_matches_brute_force_set():
    rng = np.random.default_rng(0)
    ds = boolean_dataset(rng, 10)
    rados = dpfreal(ds, DpFeatureConfig(1, 1.0, 300, seed=5), keep_draws=True)
    window = dp_interval(ds, 1, dp_beta(1.0))
    exact = dp_window_set(ds.X.tolist(), ds.y.tolist(), 1, window.lo, window.hi)
    draws = rados.metadata["draws"]
    flags = rados.metadata["accepted_flags"]
    assert len(draws) == rados.metadata["n_R"]
    for sigma, ok in zip(draws, flags):
        assert (tuple(sigma.tolist()) in exact) == bool(ok)
    assert rados.n == 300
    assert np.array_equal(rados.signatures, draws[flags])


def test_acceptance_probability_is_exact_count():
    rng = np.random.default_rng(1)
    for encoding in ((-1.0, 1.0), (0.0, 1.0)):
        ds = boolean_dataset(rng, 11, encoding=encoding)
        beta = 0.2
        window = dp_interval(ds, 0, beta)
        exact = dp_window_set(ds.X.tolist(), ds.y.tolist(), 0, window.lo, window.hi)
        assert acceptance_probability(ds, 0, beta) == Fraction(len(exact), 2 ** 11)


def test_huge_epsilon_accepts_everything():
    rng = np.random.default_rng(2)
    ds = boolean_dataset(rng, 12, encoding=(0.0, 1.0))
    rados = dpfreal(ds, DpFeatureConfig(0, 200.0, 40, seed=1))
    assert rados.metadata["n_R"] == 40


def test_metadata_and_budget():
    rng = np.random.default_rng(3)
    ds = boolean_dataset(rng, 30)
    config = DpFeatureConfig(2, 0.5, 20, seed=4)
    rados = dpfreal(ds, config)
    meta = rados.metadata
    for key in ("j_star", "epsilon", "beta", "lo", "hi", "n", "n_R", "budget"):
        assert key in meta
    assert meta["budget"][0] == 20 * 0.5
    assert composition_budget(config)["epsilon_total"] == 10.0
    for sigma in rados.signatures:
        assert signature_in_window(ds, sigma, 2, beta=meta["beta"])


def test_dpfreal_deterministic():
    rng = np.random.default_rng(4)
    ds = boolean_dataset(rng, 25)
    a = dpfreal(ds, DpFeatureConfig(0, 1.0, 30, seed=8))
    b = dpfreal(ds, DpFeatureConfig(0, 1.0, 30, seed=8))
    assert np.array_equal(a.values, b.values) and a.metadata["n_R"] == b.metadata["n_R"]


def test_empty_window_rejected():
    # {0,1} feature with few ones: the window sits in an unattainable tail
    X = np.zeros((40, 1))
    X[:2] = 1.0
    y = np.array([1] * 20 + [-1] * 20)
    with pytest.raises(DatasetError, match="no attainable"):
        dpfreal(Dataset(X, y), DpFeatureConfig(0, 1.0, 5))


def test_budget_abort(monkeypatch):
    import rados.privacy as privacy
    rng = np.random.default_rng(5)
    ds = boolean_dataset(rng, 12)
    monkeypatch.setattr(privacy, "BUDGET_SAFETY", 0)
    with pytest.raises(DrawBudgetExceeded):
        dpfreal(ds, DpFeatureConfig(0, 1.0, 10))


def test_bit_entropy_divergence():
    assert bit_entropy_divergence(0.3, 0.3) == 0.0
    expected = 0.9 * math.log(1.8) + 0.1 * math.log(0.2)
    assert bit_entropy_divergence(0.9, 0.5) == pytest.approx(expected, rel=1e-14)
    assert bit_entropy_divergence(0.9, 0.5) == pytest.approx(0.368064, abs=1e-6)
    grid = np.linspace(0.05, 0.95, 19)
    assert all(bit_entropy_divergence(p, q) >= 0 for p in grid for q in grid)


def test_rejection_bound_branches():
    beta, eta = dp_beta(1.0), 0.05
    n_star = rejection_threshold(beta, eta)
    assert rejection_bound(200, beta, 50, eta) == 100
    small_beta = 1e-6
    assert rejection_threshold(small_beta, 0.5) > 1
    assert rejection_bound(50, small_beta, 1, 0.5) == 1
    assert n_star < 1


def test_rejection_threshold_monotone_in_inverse_beta():
    betas = np.linspace(0.45, 0.01, 30)
    values = [rejection_threshold(b, 0.05) for b in betas]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_rejection_bound_nonincreasing_in_m():
    beta = dp_beta(1.0)
    bounds = [rejection_bound(m, beta, 50, 0.05) for m in range(10, 400, 10)]
    assert all(b <= a for a, b in zip(bounds, bounds[1:]))


def test_gaussian_noise():
    rng = np.random.default_rng(6)
    ds = Dataset(rng.normal(size=(10000, 1)), rng.choice([-1, 1], size=10000))
    noisy = gaussian_noisify(ds, NoiseConfig(2.0, seed=3))
    again = gaussian_noisify(ds, NoiseConfig(2.0, seed=3))
    assert noisy == again
    assert abs(np.std(noisy.X - ds.X) - 2.0) <= 0.1
    assert np.array_equal(noisy.y, ds.y)
    tiny = gaussian_noisify(ds, NoiseConfig(1e-300, seed=3))
    np.testing.assert_array_equal(tiny.X, ds.X)


def test_noise_config_validation():
    with pytest.raises(ValueError):
        NoiseConfig(0.0)


def test_gaussian_sigma():
    assert gaussian_sigma(1.0, 1e-5, 1.0) == pytest.approx(math.sqrt(2 * math.log(125000)), rel=1e-15)
    assert gaussian_sigma(1.0, 1e-5, 1.0) == pytest.approx(4.84481, abs=1e-5)
    assert gaussian_sigma(1.0, 1e-5, 2.0) == 2 * gaussian_sigma(1.0, 1e-5, 1.0)
    with pytest.raises(ValueError):
        gaussian_sigma(1.0, 1.25, 1.0)


def test_noise_mean_and_shape():
    rng = np.random.default_rng(7)
    ds = Dataset(rng.normal(size=(500, 4)), rng.choice([-1, 1], size=500))
    noisy = gaussian_noisify(ds, NoiseConfig(3.0, seed=1))
    assert noisy.X.shape == ds.X.shape
    assert abs(np.mean(noisy.X - ds.X)) <= 4 * 3.0 / np.sqrt(500 * 4)
