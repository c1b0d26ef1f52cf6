import math

import numpy as np
import pytest

from rados import (Dataset, LinearModel, RadoSet, equivalence_gap, exp_rado_risk,
                   logistic_rado_risk, logloss, logloss_gradient, uniform_rados, zero_one_error)
from rados.errors import NumericError
from rados.losses import log_exp_rado_risk

from oracles import central_difference_gradient, logloss_by_loops, rado_by_loops, random_dataset

LOG2 = math.log(2)


def test_logloss_at_zero():
    rng = np.random.default_rng(0)
    ds = random_dataset(rng, 5, 3)
    assert logloss(ds, np.zeros(3)) == pytest.approx(LOG2, abs=1e-15)


def test_logloss_saturates():
    ds = Dataset([[50.0]], [1])
    assert logloss(ds, [1.0]) <= 1e-20


def test_logloss_two_terms():
    ds = Dataset([[1.0], [1.0]], [1, -1])
    expected = (math.log(1 + math.exp(-1)) + math.log(1 + math.e)) / 2
    assert logloss(ds, [1.0]) == pytest.approx(expected, rel=1e-15)


def test_logloss_matches_loops_and_is_finite_for_huge_margins():
    rng = np.random.default_rng(1)
    ds = random_dataset(rng, 12, 3)
    theta = rng.normal(size=3)
    assert logloss(ds, theta) == pytest.approx(logloss_by_loops(ds.X, ds.y, theta), rel=1e-12)
    assert math.isfinite(logloss(ds, theta * 1e4))


def test_exp_rado_risk_cases():
    assert exp_rado_risk(RadoSet([[1.0], [-1.0]], [1, 1]), [1.0]) == pytest.approx((math.exp(-1) + math.e) / 2)
    assert exp_rado_risk(RadoSet([[0.0, 0.0]], [0]), [3.0, -2.0]) == 1.0
    rng = np.random.default_rng(2)
    rados = RadoSet(rng.normal(size=(4, 2)), [1] * 4)
    assert exp_rado_risk(rados, [0.0, 0.0]) == 1.0


def test_exp_rado_risk_overflow_guard():
    rados = RadoSet([[-1000.0]], [1])
    with pytest.raises(NumericError):
        exp_rado_risk(rados, [1.0])
    assert log_exp_rado_risk(rados, [1.0]) == pytest.approx(1000.0)


def test_logistic_rado_risk_cases():
    rng = np.random.default_rng(3)
    rados = RadoSet(rng.normal(size=(5, 2)), [1] * 5)
    assert logistic_rado_risk(rados, [0.0, 0.0], 7) == pytest.approx(LOG2, abs=1e-15)
    assert logistic_rado_risk(RadoSet([[0.0]], [0]), [5.0], 4) == pytest.approx(LOG2, abs=1e-15)


def test_exact_equivalence():
    rng = np.random.default_rng(4)
    for _ in range(10):
        ds = random_dataset(rng, int(rng.integers(2, 11)), int(rng.integers(1, 5)))
        assert equivalence_gap(ds, rng.normal(size=ds.d)) <= 1e-9


def test_sampled_gap_zero_model():
    rng = np.random.default_rng(5)
    ds = random_dataset(rng, 8, 3)
    assert equivalence_gap(ds, np.zeros(3), uniform_rados(ds, 16, 0)) == pytest.approx(0.0, abs=1e-15)


def test_sampled_gap_first_principles():
    rng = np.random.default_rng(6)
    ds = random_dataset(rng, 6, 3)
    rados = uniform_rados(ds, 16, seed=21)
    theta = rng.normal(size=3)
    exps = []
    for sigma in rados.signatures:
        pi, _ = rado_by_loops(ds.X, ds.y, sigma)
        exps.append(math.exp(-sum(t * v for t, v in zip(theta, pi))))
    risk = LOG2 + math.log(sum(exps) / len(exps)) / ds.m
    expected = logloss_by_loops(ds.X, ds.y, theta) - risk
    assert equivalence_gap(ds, theta, rados) == pytest.approx(expected, abs=1e-12)


def test_zero_one_error_cases():
    ds = Dataset([[1.0], [-1.0]], [1, 1])
    assert zero_one_error(ds, [1.0]) == 0.5
    assert zero_one_error(ds, [0.0]) == 1.0
    sep = Dataset([[1.0], [2.0], [-1.0]], [1, 1, -1])
    assert zero_one_error(sep, [1.0]) == 0.0


def test_gradient_against_finite_differences():
    rng = np.random.default_rng(7)
    ds = random_dataset(rng, 15, 4)
    theta = rng.normal(size=4)
    numeric = central_difference_gradient(lambda t: logloss(ds, t), theta)
    np.testing.assert_allclose(logloss_gradient(ds, theta), numeric, rtol=1e-6, atol=1e-9)


def test_model_rejects_nonfinite():
    with pytest.raises(NumericError):
        LinearModel([1.0, np.inf])
    assert LinearModel.zeros(3).predict([[1.0, 2.0, 3.0]]).tolist() == [0]


def test_rado_risk_monotone_link():
    rng = np.random.default_rng(8)
    rados = RadoSet(rng.normal(size=(12, 3)), [1] * 12)
    for _ in range(20):
        a, b = rng.normal(size=3), rng.normal(size=3)
        ea, eb = exp_rado_risk(rados, a), exp_rado_risk(rados, b)
        la, lb = logistic_rado_risk(rados, a, 5), logistic_rado_risk(rados, b, 5)
        assert (ea < eb) == (la < lb)
