import math

import numpy as np
import pytest

from mfou import theory
from mfou.config import SimConfig
from mfou.noise import NoisePair, generate_noise
from mfou.synthesis import (EMPIRICAL_VARIANCE, EXTERNAL_VALUE, synth_bundle, synth_chaos,
                            synth_ensemble, synth_mfou, synth_xtilde, transfer_functions)


def exact_variance(config, which):
    """Expected variance of the linear filter output: dt * mean |filter|^2 over all bins."""
    log_f, frac_f = transfer_functions(config)
    f = log_f if which == "log" else frac_f
    w = np.full(f.size, 2.0)
    w[0] = 1.0
    w[-1] = 1.0
    return config.dt * np.sum(w * np.abs(f) ** 2) / config.n_points


@pytest.fixture(scope="module")
def chaos_cfg():
    return SimConfig.desk(n_points=2**18, gamma_sq=0.04, n_traj=8)


@pytest.fixture(scope="module")
def chaos_bundles(chaos_cfg):
    return list(synth_ensemble(chaos_cfg))


def test_chaos_is_one_without_intermittency(small_config):
    b = synth_bundle(small_config, 0)
    assert np.array_equal(b.m.values, np.ones(small_config.n_points))
    assert b.m.normalization_used == EMPIRICAL_VARIANCE


def test_chaos_positive(chaos_bundles):
    assert all(np.all(b.m.values > 0) for b in chaos_bundles)


def test_chaos_second_moment_near_one(chaos_bundles):
    m2 = np.mean([np.mean(b.m.values**2) for b in chaos_bundles])
    assert abs(m2 - 1) < 0.1


def test_chaos_first_moment_lognormal(chaos_bundles, chaos_cfg):
    for b in chaos_bundles:
        assert np.mean(b.m.values) == pytest.approx(math.exp(-chaos_cfg.gamma_sq * b.m.variance / 2), rel=0.05)


def test_lognormal_identity_small_monte_carlo():
    """E exp(gX - g^2 v) = exp(-g^2 v / 2) for X ~ N(0, v): the oracle behind the previous test."""
    rng = np.random.default_rng(5)
    v, g = 3.0, 0.2
    x = rng.normal(0, math.sqrt(v), 400_000)
    assert np.mean(np.exp(g * x - g * g * v)) == pytest.approx(math.exp(-g * g * v / 2), rel=0.01)


def test_external_variance_override(chaos_cfg):
    noise = generate_noise(chaos_cfg, 0)
    xt = synth_xtilde(chaos_cfg, noise)
    m = synth_chaos(chaos_cfg, xt, variance=2.5)
    assert m.normalization_used == EXTERNAL_VALUE
    assert np.allclose(m.values, np.exp(0.2 * xt.values - 0.04 * 2.5), rtol=1e-14)


def test_xtilde_zero_mean(chaos_bundles):
    vals = np.array([b.x_tilde.values[::4096] for b in chaos_bundles])
    sigma = math.sqrt(np.mean(vals**2))
    assert np.all(np.abs(vals.mean(axis=0)) < 4 * sigma)


def test_xtilde_variance_grows_like_log_inverse_epsilon():
    cfg = SimConfig.desk()
    v4 = exact_variance(cfg, "log")
    v2 = exact_variance(cfg.with_(epsilon=2 * cfg.epsilon), "log")
    assert (v4 - v2) / math.log(2) == pytest.approx(1, abs=0.15)
    # same noise, both regularizations: the empirical difference tracks the exact one
    emp = []
    for i in range(3):
        noise = generate_noise(cfg, i)
        a = synth_xtilde(cfg, noise).values
        b = synth_xtilde(cfg.with_(epsilon=2 * cfg.epsilon), noise).values
        emp.append(np.mean(a**2) - np.mean(b**2))
    assert np.mean(emp) / math.log(2) == pytest.approx(1, abs=0.15)


def test_ou_variance_at_half():
    cfg = SimConfig.desk(n_points=2**18, hurst=0.5, n_traj=8)
    assert exact_variance(cfg, "frac") == pytest.approx(cfg.t_large / 2, rel=0.01)
    var = np.mean([np.mean(b.x.values**2) for b in synth_ensemble(cfg)])
    assert var == pytest.approx(cfg.t_large / 2, rel=0.05)


@pytest.mark.parametrize("h", [1 / 3, 2 / 3])
def test_fou_variance_exact_expectation(h):
    cfg = SimConfig.desk(hurst=h)
    assert exact_variance(cfg, "frac") == pytest.approx(theory.fou_variance(h, cfg.t_large), rel=0.05)


def test_fou_variance_ensemble_third():
    cfg = SimConfig.desk(n_points=2**18, hurst=1 / 3, n_traj=16, seed=1)
    var = np.mean([np.mean(b.x.values**2) for b in synth_ensemble(cfg)])
    assert var == pytest.approx(theory.fou_variance(1 / 3, cfg.t_large), rel=0.05)


def test_increment_skewness_small(chaos_bundles, chaos_cfg):
    for k in (8, 64, 512):
        d = np.concatenate([b.x.values[k:] - b.x.values[:-k] for b in chaos_bundles])
        skew = np.mean(d**3) / np.mean(d**2) ** 1.5
        assert abs(skew) < 0.1


def test_bundle_determinism(small_config):
    a, b = synth_bundle(small_config, 1), synth_bundle(small_config, 1)
    assert np.array_equal(a.x.values, b.x.values)
    assert np.array_equal(a.x_tilde.values, b.x_tilde.values)


def test_distinct_trajectories(small_config):
    assert not np.array_equal(synth_bundle(small_config, 0).x.values, synth_bundle(small_config, 1).x.values)


def test_gaussian_bundle_equals_unit_chaos_pipeline(small_config):
    b = synth_bundle(small_config, 0)
    noise = generate_noise(small_config, 0)
    ones = synth_chaos(small_config, b.x_tilde)
    assert np.array_equal(synth_mfou(small_config, noise, ones).values, b.x.values)


def test_linearity_in_noise(small_config):
    noise = generate_noise(small_config, 0)
    ones = synth_chaos(small_config, synth_xtilde(small_config, noise))
    x = synth_mfou(small_config, noise, ones).values
    scaled = NoisePair(2.5 * noise.dw, noise.dw_tilde, noise.seed, noise.traj_index)
    assert np.max(np.abs(synth_mfou(small_config, scaled, ones).values - 2.5 * x)) <= 1e-10 * np.max(np.abs(x))


def test_half_hurst_is_plain_exponential_smoothing():
    cfg = SimConfig.desk(n_points=1024, hurst=0.5, t_large=1 / 64, n_traj=1)
    noise = generate_noise(cfg, 0)
    ones = synth_chaos(cfg, synth_xtilde(cfg, noise))
    x = synth_mfou(cfg, noise, ones).values
    kern = np.exp(-np.arange(1024) * cfg.dt / cfg.t_large)
    direct = np.array([np.sum(kern * noise.dw[(t - np.arange(1024)) % 1024]) for t in range(1024)])
    assert np.max(np.abs(x - direct)) < 1e-8


def test_stationarity_halves(chaos_bundles):
    n = len(chaos_bundles[0].x.values)
    first = np.array([np.mean(b.x.values[: n // 2] ** 2) for b in chaos_bundles])
    second = np.array([np.mean(b.x.values[n // 2:] ** 2) for b in chaos_bundles])
    diff = first - second
    assert abs(diff.mean()) < 3 * diff.std(ddof=1) / math.sqrt(len(diff))


def test_chaos_independent_of_driving_noise(chaos_cfg):
    noise = generate_noise(chaos_cfg, 0)
    m = synth_chaos(chaos_cfg, synth_xtilde(chaos_cfg, noise)).values
    r = np.corrcoef(m, noise.dw)[0, 1]
    assert abs(r) < 4 / math.sqrt(chaos_cfg.n_points)


def test_fault_injection_scales_output(small_config):
    a = synth_bundle(small_config, 0).x.values
    b = synth_bundle(small_config, 0, kernel_scale=2.0).x.values
    assert np.allclose(b, 2 * a, rtol=1e-12, atol=1e-15)


def test_invalid_config_rejected():
    with pytest.raises(ValueError):
        synth_bundle(SimConfig.desk(n_points=2**10, gamma_sq=0.3), 0)


def test_transfer_functions_are_read_only(small_config):
    log_f, frac_f = transfer_functions(small_config)
    with pytest.raises(ValueError):
        log_f[0] = 1.0
