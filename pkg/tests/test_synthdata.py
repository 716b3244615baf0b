"""Synthetic laws: exact conditionals, certified constants, sampling."""

import math

import numpy as np
import pytest

from labeldp.core import AssumptionParams, CLASSIFICATION, REGRESSION
from labeldp.synthdata import (
    TASK_CLASSIFICATION,
    TASK_REG_BOUNDED,
    TASK_REG_HEAVY,
    BoundedNoise,
    BumpConfig,
    Distribution,
    HeavyTailNoise,
    bayes_risk,
    bump_classification,
    grid_resolution,
    midpoint_grid,
    sample_dataset,
    smooth_classification,
    smooth_regression,
)


def _holder_check(value_fn, params, dim, rng, n_pairs=100_000):
    """|f(x) - f(y)| <= L * ||x - y||^beta on random pairs."""
    X = rng.random((n_pairs, dim))
    Y = rng.random((n_pairs, dim))
    gap = np.abs(value_fn(X) - value_fn(Y))
    dist = np.linalg.norm(X - Y, axis=1)
    bound = params.holder_const * dist**params.beta
    assert np.all(gap <= bound + 1e-12)


# ---------------------------------------------------------------------------
# smooth classification


def test_smooth_binary_probabilities_track_the_wave():
    dist = smooth_classification(1, 2, 1.0, seed=7)
    a = dist.detail["amplitude"]
    assert 0.15 <= a <= 0.35
    # sin(2 pi x) peaks at x = 1/4 and crosses zero at x = 1/2
    probs = dist.class_probs(np.array([[0.25], [0.5], [0.75]]))
    np.testing.assert_allclose(probs[0], [0.5 - a, 0.5 + a], atol=1e-12)
    np.testing.assert_allclose(probs[1], [0.5, 0.5], atol=1e-9)
    np.testing.assert_allclose(probs[2], [0.5 + a, 0.5 - a], atol=1e-12)


def test_smooth_binary_certified_constants():
    for d in (1, 2):
        dist = smooth_classification(d, 2, 1.0, seed=3)
        a = dist.detail["amplitude"]
        assert dist.params.holder_const == pytest.approx(2.0 * math.pi * a * math.sqrt(d))
        assert dist.params.gamma == 1.0
        assert dist.params.margin_const == pytest.approx(1.0 / (2.0 * a))
        assert dist.num_classes == 2
        assert dist.task == TASK_CLASSIFICATION


def test_smooth_probabilities_are_valid_distributions():
    rng = np.random.default_rng(11)
    for d, K, beta, seed in ((1, 2, 1.0, 0), (2, 2, 0.5, 1), (1, 5, 1.0, 2), (3, 4, 0.8, 3)):
        dist = smooth_classification(d, K, beta, seed=seed)
        probs = dist.class_probs(rng.random((10_000, d)))
        assert probs.shape == (10_000, K)
        assert np.all(probs >= -1e-12)
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-12)


def test_smooth_holder_condition_binary_and_multiclass():
    rng = np.random.default_rng(12)
    # the trig wave is Lipschitz, so its constant certifies every beta <= 1
    for d, K, beta, seed in ((1, 2, 1.0, 5), (2, 2, 0.5, 6), (1, 5, 1.0, 7), (2, 3, 0.7, 8)):
        dist = smooth_classification(d, K, beta, seed=seed)
        for j in range(K):
            _holder_check(lambda X, j=j: dist.class_probs(X)[:, j], dist.params, d, rng)


def test_smooth_margin_bound_binary():
    """P(top-two gap <= t) stays under C_T * t^gamma on a large sample."""
    rng = np.random.default_rng(13)
    dist = smooth_classification(2, 2, 1.0, seed=9)
    n = 100_000
    probs = dist.class_probs(rng.random((n, 2)))
    srt = np.sort(probs, axis=1)
    gap = srt[:, -1] - srt[:, -2]
    for t in (0.05, 0.1, 0.2):
        frac = np.mean((gap > 0.0) & (gap <= t))
        bound = dist.params.margin_const * t**dist.params.gamma
        sigma = math.sqrt(max(frac * (1.0 - frac), 1e-6) / n)
        assert frac <= bound + 3.0 * sigma


def test_smooth_margin_bound_multiclass_numeric_constant():
    rng = np.random.default_rng(14)
    dist = smooth_classification(1, 4, 1.0, seed=15)
    assert dist.params.margin_const > 0.0
    n = 100_000
    probs = dist.class_probs(rng.random((n, 1)))
    srt = np.sort(probs, axis=1)
    gap = srt[:, -1] - srt[:, -2]
    for t in (0.02, 0.05, 0.1):
        frac = np.mean((gap > 0.0) & (gap <= t))
        bound = dist.params.margin_const * t**dist.params.gamma
        sigma = math.sqrt(max(frac * (1.0 - frac), 1e-6) / n)
        assert frac <= bound + 3.0 * sigma


def test_smooth_classification_validation():
    with pytest.raises(ValueError):
        smooth_classification(0, 2, 1.0, seed=0)
    with pytest.raises(ValueError):
        smooth_classification(1, 1, 1.0, seed=0)
    with pytest.raises(ValueError):
        smooth_classification(1, 2, 0.0, seed=0)
    with pytest.raises(ValueError):
        smooth_classification(1, 2, 1.2, seed=0)
    dist = smooth_classification(1, 2, 1.0, seed=0)
    with pytest.raises(ValueError):
        dist.class_probs(np.zeros((3, 2)))  # wrong dimension
    with pytest.raises(ValueError):
        dist.mean(np.zeros((3, 1)))  # regression accessor on classification


# ---------------------------------------------------------------------------
# bump classification


def test_bump_values_at_center_and_quarter_offset():
    cfg = BumpConfig(h=0.25, signs=(1,), beta=1.0)
    dist = bump_classification(cfg, 1)
    w = dist.detail["width"]
    assert w == 0.25
    # center of the first cell: full bump height w^beta
    p_center = dist.class_probs(np.array([[0.125]]))
    np.testing.assert_allclose(p_center[0, 1], (1.0 + 0.25) / 2.0, atol=1e-12)
    # a quarter width to the right: profile 1 - 2*(1/4) = 1/2, so eta = 0.125
    p_off = dist.class_probs(np.array([[0.125 + 0.0625]]))
    np.testing.assert_allclose(p_off[0, 1], (1.0 + 0.125) / 2.0, atol=1e-12)


def test_bump_vanishes_outside_active_cells():
    cfg = BumpConfig(h=0.25, signs=(1, -1), beta=0.7)
    dist = bump_classification(cfg, 1)
    # cells 2 and 3 carry no bump, so eta = 0 there
    probs = dist.class_probs(np.array([[0.625], [0.875], [0.5], [1.0]]))
    np.testing.assert_allclose(probs, 0.5, atol=1e-12)


def test_bump_sign_flips_the_tilt():
    cfg = BumpConfig(h=0.5, signs=(1, -1), beta=1.0)
    dist = bump_classification(cfg, 1)
    probs = dist.class_probs(np.array([[0.25], [0.75]]))
    np.testing.assert_allclose(probs[0, 1], 0.75, atol=1e-12)
    np.testing.assert_allclose(probs[1, 1], 0.25, atol=1e-12)


def test_bump_support_invariant_random_points():
    rng = np.random.default_rng(21)
    cfg = BumpConfig(h=0.34, signs=(1, -1, 1), beta=0.6)
    dist = bump_classification(cfg, 2)
    w = dist.detail["width"]
    m = round(1.0 / w)
    X = rng.random((10_000, 2))
    probs = dist.class_probs(X)
    cell = np.minimum(np.floor(X * m).astype(int), m - 1)
    flat = cell[:, 0] * m + cell[:, 1]
    outside = flat >= cfg.num_active
    np.testing.assert_allclose(probs[outside, 1], 0.5, atol=1e-12)
    # inside the active cells the tilt is nonzero away from cell faces
    assert np.any(np.abs(probs[~outside, 1] - 0.5) > 1e-3)


def test_bump_holder_condition_and_constants():
    rng = np.random.default_rng(22)
    for d, beta in ((1, 1.0), (1, 0.5), (2, 0.6)):
        cfg = BumpConfig(h=0.3, signs=(1, -1), beta=beta)
        dist = bump_classification(cfg, d)
        assert dist.params.gamma == 0.0
        assert dist.params.holder_const == pytest.approx(d * 2.0 ** (beta + 1.0))
        _holder_check(lambda X: dist.class_probs(X)[:, 1], dist.params, d, rng)


def test_bump_config_validation():
    with pytest.raises(ValueError):
        BumpConfig(h=0.0, signs=(1,), beta=1.0)
    with pytest.raises(ValueError):
        BumpConfig(h=0.5, signs=(), beta=1.0)
    with pytest.raises(ValueError):
        BumpConfig(h=0.5, signs=(2,), beta=1.0)
    with pytest.raises(ValueError):
        bump_classification(BumpConfig(h=0.5, signs=(1, 1, 1), beta=1.0), 1)  # 3 bumps, 2 cells


# ---------------------------------------------------------------------------
# smooth regression, bounded noise


def test_bounded_regression_mean_and_variance():
    dist = smooth_regression(1, 1.0, BoundedNoise(label_bound=1.0), seed=5)
    a = dist.detail["amplitude"]
    b = dist.detail["noise_halfwidth"]
    assert 0.25 <= a <= 0.35
    assert b == 0.5
    np.testing.assert_allclose(dist.mean(np.array([[0.25]])), [a], atol=1e-12)
    np.testing.assert_allclose(dist.conditional_variance(np.array([[0.3]])), [b * b / 3.0], atol=1e-12)
    assert dist.task == TASK_REG_BOUNDED
    assert dist.params.label_bound == 1.0


def test_bounded_regression_labels_stay_inside_the_bound():
    dist = smooth_regression(1, 1.0, BoundedNoise(label_bound=2.0), seed=6)
    a = dist.detail["amplitude"]
    b = dist.detail["noise_halfwidth"]
    rng = np.random.default_rng(30)
    X = rng.random((50_000, 1))
    y = dist.sample_labels(X, rng)
    assert np.max(np.abs(y)) <= a + b + 1e-12
    assert a + b < 2.0
    # noise is centered: the sample mean at a pinned x tracks the true mean
    x0 = np.full((200_000, 1), 0.37)
    y0 = dist.sample_labels(x0, rng)
    eta = dist.mean(x0[:1])[0]
    se = math.sqrt((b * b / 3.0) / len(y0))
    assert abs(y0.mean() - eta) <= 3.0 * se


def test_bounded_regression_holder():
    rng = np.random.default_rng(31)
    for d in (1, 2):
        dist = smooth_regression(d, 1.0, BoundedNoise(label_bound=1.0), seed=8)
        _holder_check(lambda X: dist.mean(X), dist.params, d, rng)


def test_bounded_regression_bayes_risk_is_noise_variance():
    dist = smooth_regression(1, 1.0, BoundedNoise(label_bound=1.0), seed=9)
    assert bayes_risk(dist) == pytest.approx(1.0 / 12.0, abs=1e-12)


# ---------------------------------------------------------------------------
# smooth regression, heavy-tailed noise


def test_heavy_three_point_support_and_moments():
    p, M = 2.0, 1.0
    dist = smooth_regression(1, 1.0, HeavyTailNoise(moment_order=p, moment_bound=M), seed=10)
    a = dist.detail["amplitude"]
    t0 = dist.detail["tail_scale"]
    assert t0 == pytest.approx((M / a) ** (1.0 / (p - 1.0)))
    assert dist.detail["tail_mass"] == pytest.approx(M / t0**p)
    rng = np.random.default_rng(32)
    x0 = np.full((1_000_000, 1), 0.21)
    y = dist.sample_labels(x0, rng)
    vals = np.unique(y)
    assert set(np.round(vals, 12)).issubset({round(v, 12) for v in (-t0, 0.0, t0)})
    eta = dist.mean(x0[:1])[0]
    var = dist.conditional_variance(x0[:1])[0]
    assert var == pytest.approx(M * t0 ** (2.0 - p) - eta * eta)
    n = len(y)
    assert abs(y.mean() - eta) <= 3.0 * math.sqrt(var / n)
    # |Y|^p is Bernoulli-scaled: variance M * t0^p - M^2
    mom = np.abs(y) ** p
    se_mom = math.sqrt((M * t0**p - M * M) / n)
    assert abs(mom.mean() - M) <= 3.0 * se_mom


def test_heavy_moment_identity_holds_across_x():
    # E|Y|^p == M at every x, not just on average
    dist = smooth_regression(1, 1.0, HeavyTailNoise(moment_order=3.0, moment_bound=2.0), seed=11)
    t0 = dist.detail["tail_scale"]
    mass = dist.detail["tail_mass"]
    assert mass * t0**3.0 == pytest.approx(2.0)
    assert dist.params.moment_order == 3.0
    assert dist.params.moment_bound == 2.0
    assert dist.params.label_bound is None


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        BoundedNoise(label_bound=0.0)
    with pytest.raises(ValueError):
        HeavyTailNoise(moment_order=1.0, moment_bound=1.0)
    with pytest.raises(ValueError):
        HeavyTailNoise(moment_order=2.0, moment_bound=0.0)
    with pytest.raises(TypeError):
        smooth_regression(1, 1.0, "uniform", seed=0)


# ---------------------------------------------------------------------------
# dataset sampling


def test_sample_dataset_is_deterministic_in_the_seed():
    dist = smooth_classification(2, 3, 1.0, seed=1)
    ds1 = sample_dataset(dist, 500, seed=99)
    ds2 = sample_dataset(dist, 500, seed=99)
    ds3 = sample_dataset(dist, 500, seed=100)
    assert np.array_equal(ds1.features, ds2.features)
    assert np.array_equal(ds1.labels, ds2.labels)
    assert not np.array_equal(ds1.labels, ds3.labels)
    assert ds1.task == CLASSIFICATION and ds1.num_classes == 3
    assert ds1.features.shape == (500, 2)


def test_sample_dataset_class_frequencies():
    # marginal P(Y=2) integrates the wave to exactly 1/2
    dist = smooth_classification(1, 2, 1.0, seed=2)
    ds = sample_dataset(dist, 100_000, seed=5)
    freq = np.mean(ds.labels == 2)
    se = math.sqrt(0.25 / len(ds))
    assert abs(freq - 0.5) <= 3.0 * se


def test_sample_dataset_rejects_empty():
    dist = smooth_classification(1, 2, 1.0, seed=2)
    with pytest.raises(ValueError):
        sample_dataset(dist, 0, seed=1)


def test_sample_dataset_regression_task_tag():
    dist = smooth_regression(1, 1.0, BoundedNoise(label_bound=1.0), seed=3)
    ds = sample_dataset(dist, 64, seed=4)
    assert ds.task == REGRESSION and ds.num_classes is None


# ---------------------------------------------------------------------------
# integration grids and Bayes risk


def test_grid_resolution_schedule():
    assert grid_resolution(1) == 256
    assert grid_resolution(2) == 128
    assert grid_resolution(3) == 64
    with pytest.raises(ValueError):
        grid_resolution(4)


def test_midpoint_grid_nodes():
    g = midpoint_grid(1, 4)
    np.testing.assert_allclose(g.ravel(), [0.125, 0.375, 0.625, 0.875])
    g2 = midpoint_grid(2, 3)
    assert g2.shape == (9, 2)
    # row-major: the first axis varies slowest
    np.testing.assert_allclose(g2[0], [1.0 / 6.0, 1.0 / 6.0])
    np.testing.assert_allclose(g2[1], [1.0 / 6.0, 0.5])
    np.testing.assert_allclose(g2[3], [0.5, 1.0 / 6.0])


def _constant_binary(dim, p2):
    def probs(P):
        out = np.empty((len(P), 2))
        out[:, 0] = 1.0 - p2
        out[:, 1] = p2
        return out

    params = AssumptionParams(beta=1.0, holder_const=1.0, gamma=1.0, margin_const=1.0)
    return Distribution(dim=dim, task=TASK_CLASSIFICATION, params=params, num_classes=2, _prob_fn=probs)


def test_bayes_risk_degenerate_and_constant_laws():
    assert bayes_risk(_constant_binary(1, 1.0)) == pytest.approx(0.0, abs=1e-12)
    assert bayes_risk(_constant_binary(2, 0.7)) == pytest.approx(0.3, abs=1e-12)


def test_bayes_risk_monte_carlo_path_above_three_dims():
    # constant conditionals make the MC average exact for any sample
    assert bayes_risk(_constant_binary(4, 0.7)) == pytest.approx(0.3, abs=1e-12)
    dist = smooth_regression(4, 1.0, BoundedNoise(label_bound=1.0), seed=12)
    b = dist.detail["noise_halfwidth"]
    assert bayes_risk(dist) == pytest.approx(b * b / 3.0, abs=1e-12)
    # the MC seed is pinned, so repeated calls agree bitwise
    dist5 = smooth_classification(4, 2, 1.0, seed=13)
    assert bayes_risk(dist5) == bayes_risk(dist5)
