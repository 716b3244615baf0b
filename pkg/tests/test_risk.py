"""Population excess-risk evaluation and the clipping bias bound."""

import math

import numpy as np
import pytest

from labeldp.core import AssumptionParams, make_partition
from labeldp.estimators import CubeClassifier, CubeRegressor, fit_central_exp_classifier
from labeldp.risk import (
    RiskReport,
    clip_bias_bound,
    excess_risk_classifier,
    excess_risk_regressor,
)
from labeldp.synthdata import (
    TASK_CLASSIFICATION,
    TASK_REG_BOUNDED,
    BoundedNoise,
    Distribution,
    HeavyTailNoise,
    grid_resolution,
    midpoint_grid,
    sample_dataset,
    smooth_classification,
    smooth_regression,
)

_PARAMS = AssumptionParams(beta=1.0, holder_const=1.0, gamma=1.0, margin_const=1.0)


def _constant_binary(dim, p2):
    def probs(P):
        out = np.empty((len(P), 2))
        out[:, 0] = 1.0 - p2
        out[:, 1] = p2
        return out

    return Distribution(
        dim=dim, task=TASK_CLASSIFICATION, params=_PARAMS, num_classes=2, _prob_fn=probs
    )


def _mean_law(dim, mean_fn):
    return Distribution(
        dim=dim,
        task=TASK_REG_BOUNDED,
        params=_PARAMS,
        _mean_fn=mean_fn,
        _var_fn=lambda P: np.zeros(len(P)),
    )


def _const_classifier(dim, cls, num_classes=2):
    return CubeClassifier(
        partition=make_partition(dim, 1.0),
        class_of=np.array([cls]),
        num_classes=num_classes,
    )


def _const_regressor(dim, value):
    return CubeRegressor(partition=make_partition(dim, 1.0), value_of=np.array([value]))


# ---------------------------------------------------------------------------
# classification risk


def test_bayes_classifier_has_zero_excess_risk():
    dist = smooth_classification(1, 2, 1.0, seed=4)
    grid = midpoint_grid(1, 64)
    probs = dist.class_probs(grid)
    bayes = CubeClassifier(
        partition=make_partition(1, 1.0 / 64.0),
        class_of=1 + np.argmax(probs, axis=1),
        num_classes=2,
    )
    # cube cells align with the evaluation grid, so cell classes are optimal
    # at every midpoint and the integrand vanishes identically
    report = excess_risk_classifier(bayes, dist)
    assert report.excess_risk == 0.0
    assert report.method == "grid"
    assert report.std_error == 0.0
    assert report.eval_points == grid_resolution(1)


def test_constant_law_risk_is_the_probability_gap():
    dist = _constant_binary(1, 0.7)
    report = excess_risk_classifier(_const_classifier(1, 1), dist)
    assert report.excess_risk == pytest.approx(0.4, abs=1e-12)
    assert excess_risk_classifier(_const_classifier(1, 2), dist).excess_risk == 0.0


def test_classification_risk_stays_in_unit_interval():
    rng = np.random.default_rng(90)
    dist = smooth_classification(2, 3, 1.0, seed=5)
    ds = sample_dataset(dist, 200, seed=6)
    model = fit_central_exp_classifier(ds, 0.25, 1.0, rng)
    r = excess_risk_classifier(model, dist).excess_risk
    assert 0.0 <= r <= 1.0


def test_classification_risk_validation():
    dist = _constant_binary(1, 0.7)
    with pytest.raises(ValueError):
        excess_risk_classifier(_const_classifier(1, 1, num_classes=3), dist)
    reg_dist = smooth_regression(1, 1.0, BoundedNoise(label_bound=1.0), seed=1)
    with pytest.raises(ValueError):
        excess_risk_classifier(_const_classifier(1, 1), reg_dist)


# ---------------------------------------------------------------------------
# regression risk


def test_regression_risk_of_zero_fit_against_linear_mean():
    dist = _mean_law(1, lambda P: P[:, 0])
    report = excess_risk_regressor(_const_regressor(1, 0.0), dist)
    # midpoint rule integrates x^2 with O(m^-2) error
    assert report.excess_risk == pytest.approx(1.0 / 3.0, abs=2e-6)
    assert report.std_error == 0.0


def test_regression_risk_of_constant_offset():
    dist = _mean_law(1, lambda P: P[:, 0])
    shifted = CubeRegressor(
        partition=make_partition(1, 1.0 / 256.0),
        value_of=(np.arange(256) + 0.5) / 256.0 + 0.1,
    )
    # the fit equals the true mean at every grid midpoint, offset by 0.1
    report = excess_risk_regressor(shifted, dist)
    assert report.excess_risk == pytest.approx(0.01, abs=1e-12)


def test_regression_risk_nonnegative_on_random_pairs():
    rng = np.random.default_rng(91)
    for _ in range(100):
        d = int(rng.integers(1, 3))
        dist = smooth_regression(d, 1.0, BoundedNoise(label_bound=1.0), seed=int(rng.integers(1000)))
        part = make_partition(d, float(rng.choice([0.2, 0.34, 0.5])))
        model = CubeRegressor(partition=part, value_of=rng.normal(size=part.num_cells))
        report = excess_risk_regressor(model, dist)
        assert report.excess_risk >= 0.0


def test_regression_risk_validation():
    cls_dist = smooth_classification(1, 2, 1.0, seed=2)
    with pytest.raises(ValueError):
        excess_risk_regressor(_const_regressor(1, 0.0), cls_dist)


# ---------------------------------------------------------------------------
# grid vs Monte Carlo agreement


def test_grid_and_monte_carlo_agree_within_three_sigma():
    rng = np.random.default_rng(92)
    dist = smooth_regression(1, 1.0, BoundedNoise(label_bound=1.0), seed=8)
    for _ in range(20):
        part = make_partition(1, float(rng.choice([0.15, 0.25, 0.4])))
        model = CubeRegressor(partition=part, value_of=rng.normal(scale=0.3, size=part.num_cells))
        grid_val = excess_risk_regressor(model, dist).excess_risk
        # manual MC with an independent stream
        X = rng.random((100_000, 1))
        vals = (model.predict(X) - dist.mean(X)) ** 2
        sem = vals.std(ddof=1) / math.sqrt(len(vals))
        assert abs(vals.mean() - grid_val) <= 3.0 * sem


def test_monte_carlo_path_reports_its_error():
    dist = smooth_regression(4, 1.0, BoundedNoise(label_bound=1.0), seed=9)
    model = CubeRegressor(partition=make_partition(4, 0.5), value_of=np.zeros(16))
    report = excess_risk_regressor(model, dist)
    assert report.method == "monte-carlo"
    assert report.std_error > 0.0
    assert report.eval_points == 100_000
    # pinned seed: bitwise repeatable
    again = excess_risk_regressor(model, dist)
    assert report.excess_risk == again.excess_risk


# ---------------------------------------------------------------------------
# clipping bias


def test_clip_bias_bound_values():
    assert clip_bias_bound(10.0, 2.0, 1.0) == pytest.approx(0.1, abs=1e-15)
    # at p = 3 doubling T divides the bound by 4
    assert clip_bias_bound(2.0, 3.0, 1.0) == pytest.approx(4.0 * clip_bias_bound(4.0, 3.0, 1.0))
    with pytest.raises(ValueError):
        clip_bias_bound(0.0, 2.0, 1.0)
    with pytest.raises(ValueError):
        clip_bias_bound(1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        clip_bias_bound(1.0, 2.0, 0.0)


def test_clip_bias_bound_dominates_three_point_law():
    """Exact clipping bias of the heavy-tail law stays under the moment bound."""
    p, M = 2.0, 1.0
    dist = smooth_regression(1, 1.0, HeavyTailNoise(moment_order=p, moment_bound=M), seed=10)
    t0 = dist.detail["tail_scale"]
    grid = midpoint_grid(1, 256)
    eta = dist.mean(grid)
    for T in (2.0, 5.0, 10.0, 20.0):
        # clipping min(t0, T): the +-t0 atoms shrink, the 0 atom is untouched
        bias = np.abs(eta) * (t0 - min(t0, T)) / t0
        assert np.all(bias <= clip_bias_bound(T, p, M) + 1e-15)


# ---------------------------------------------------------------------------
# report invariants


def test_risk_report_validation():
    RiskReport(0.0, 0.0, "grid", 10)
    RiskReport(-0.001, 0.01, "monte-carlo", 10)
    with pytest.raises(ValueError):
        RiskReport(0.1, -0.01, "grid", 10)
    with pytest.raises(ValueError):
        RiskReport(-0.02, 0.01, "monte-carlo", 10)
    with pytest.raises(ValueError):
        RiskReport(0.1, 0.0, "exact", 10)
