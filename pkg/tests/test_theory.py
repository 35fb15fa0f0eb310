import math

import mpmath as mp
import numpy as np
import pytest

from mfou import theory as th

mp.mp.dps = 30


# independent oracles -------------------------------------------------------------

def fou_cov_closed(h, r):
    """Closed form (T = 1): Gamma(H+1/2)^2 / (2 sin(pi H) Gamma(2H)) times
    cosh(r) Gamma(2H) Q(2H, r) - e^{-r} int_0^r sinh(u) u^{2H-1} du."""
    h, r = mp.mpf(h), mp.mpf(r)
    a = 2 * h
    first = mp.cosh(r) * mp.gammainc(a, r, mp.inf)
    second = mp.exp(-r) * mp.quad(lambda u: mp.sinh(u) * u ** (a - 1), [0, r]) if r > 0 else 0
    pref = mp.gamma(h + 0.5) ** 2 / (2 * mp.sin(mp.pi * h) * mp.gamma(a))
    return float(pref * (first - second))


def xtilde_closed(r):
    """cosh(r) E1(r) - e^{-r} Shi(r), T = 1."""
    r = mp.mpf(r)
    return float(mp.cosh(r) * mp.e1(r) - mp.exp(-r) * mp.shi(r))


def selberg_triple(gs):
    """Selberg integral S_3(1, 1, gs) over [0,1]^3."""
    out = mp.mpf(1)
    for j in range(3):
        out *= (mp.gamma(1 + j * gs) ** 2 * mp.gamma(1 + (j + 1) * gs)
                / (mp.gamma(2 + (3 + j - 1) * gs) * mp.gamma(1 + gs)))
    return float(out)


# Gamma function ----------------------------------------------------------------------

@pytest.mark.parametrize("z", [0.5, 5 / 6, 1 / 3, 1.0, 7 / 6, 5 / 3, 2.5, 3.0, 0.01])
def test_gamma_against_tabulated(z):
    assert th.gamma_fn(z) == pytest.approx(float(mp.gamma(z)), rel=1e-12)


# variance and covariance -----------------------------------------------------------

def test_fou_variance_examples():
    assert th.fou_variance(0.5, 1.0) == pytest.approx(0.5, rel=1e-15)
    assert th.fou_variance(0.5, 2.0) == pytest.approx(1.0, rel=1e-15)
    ref = float(mp.gamma(mp.mpf(5) / 6) ** 2 / (2 * mp.sin(mp.pi / 3)))
    assert th.fou_variance(1 / 3, 1.0) == pytest.approx(ref, rel=1e-13)
    assert ref == pytest.approx(0.7356, abs=1e-4)


@pytest.mark.parametrize("h", [0.0, 1.0, -0.2])
def test_fou_variance_domain(h):
    with pytest.raises(ValueError):
        th.fou_variance(h, 1.0)


@pytest.mark.parametrize("h", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
def test_covariance_at_zero_is_variance(h):
    v, err = th.fou_covariance_time(h, 1.0, 0.0)
    assert err > 0
    assert v == pytest.approx(th.fou_variance(h, 1.0), rel=1e-6)


@pytest.mark.parametrize("h", [1 / 3, 2 / 3, 0.2, 0.8])
@pytest.mark.parametrize("r", [0.05, 0.5, 1.0, 3.0])
def test_covariance_time_against_closed_form(h, r):
    v, err = th.fou_covariance_time(h, 1.0, r)
    assert v == pytest.approx(fou_cov_closed(h, r), rel=1e-8, abs=1e-12)


def test_covariance_ou_limit():
    for tau in (0.0, 0.3, 2.0):
        v, _ = th.fou_covariance_time(0.5, 2.0, tau)
        assert v == pytest.approx(np.exp(-tau / 2.0), abs=1e-6)


def test_covariance_decay_at_five_t():
    """Exponential decay only at H = 1/2; for H != 1/2 the decay is a power law."""
    for h, bound in ((0.5, 0.01), (1 / 3, 0.05), (2 / 3, 0.2)):
        v, _ = th.fou_covariance_time(h, 1.0, 5.0)
        assert abs(v) < bound * th.fou_variance(h, 1.0)
    v, _ = th.fou_covariance_time(0.5, 1.0, 5.0)
    assert abs(v) < 0.01 * th.fou_variance(0.5, 1.0)
    v, _ = th.fou_covariance_time(2 / 3, 1.0, 5.0)
    assert abs(v) > 0.1 * th.fou_variance(2 / 3, 1.0)


@pytest.mark.parametrize("h", [1 / 3, 0.5, 2 / 3])
@pytest.mark.parametrize("r", [0.0, 0.1, 1.0])
def test_representations_agree(h, r):
    vt, et = th.fou_covariance_time(h, 1.0, r)
    vs, es = th.fou_covariance_spectral(h, 1.0, r)
    assert abs(vt - vs) <= max(1e-4, et + es)
    assert abs(vt - vs) < 1e-8


def test_spectral_form_at_half():
    v, _ = th.fou_covariance_spectral(0.5, 1.0, 0.0)
    assert v == pytest.approx(0.5, abs=1e-4)


def test_spectral_density_is_even():
    w = np.linspace(0.01, 10, 7)
    assert np.allclose(th.spectral_density(1 / 3, 1.0, w), th.spectral_density(1 / 3, 1.0, -w), rtol=0, atol=0)


# log-correlated field ----------------------------------------------------------

@pytest.mark.parametrize("r", [1e-6, 1e-3, 0.1, 1.0, 3.0])
def test_xtilde_against_closed_form(r):
    v, err = th.xtilde_covariance(1.0, r)
    assert v == pytest.approx(xtilde_closed(r), rel=1e-9, abs=1e-12)
    assert err > 0


def test_xtilde_remainder_bounded():
    for r in np.geomspace(1e-6, 1.0, 13):
        v, _ = th.xtilde_covariance(1.0, r)
        assert abs(v - math.log(1 / r)) < 2


def test_xtilde_small_lag_slope():
    a, _ = th.xtilde_covariance(1.0, 1e-6)
    b, _ = th.xtilde_covariance(1.0, 2e-6)
    assert (a - b) == pytest.approx(math.log(2), rel=0.01)


def test_xtilde_value_at_three_t():
    """The closed form gives about -0.116 at 3T: smaller than the variance scale but not below 0.05."""
    v, _ = th.xtilde_covariance(1.0, 3.0)
    assert v == pytest.approx(-0.1161, abs=5e-4)


def test_xtilde_zero_lag_diverges():
    with pytest.raises(ValueError):
        th.xtilde_covariance(1.0, 0.0)


def test_g_at_zero():
    assert th.g_at_zero() == pytest.approx(-0.577216, abs=1e-5)
    assert th.g_at_zero() == pytest.approx(-th.EULER_GAMMA, abs=1e-12)


def test_g_continuous_at_zero():
    assert th.g_function(1.0, 1e-7) == pytest.approx(th.g_at_zero(), abs=1e-2)


def test_g_at_zero_sign_split():
    import scipy.integrate as si
    lo, _ = si.quad(lambda h: math.log(h) * math.exp(-h), 0, 1)
    hi, _ = si.quad(lambda h: math.log(h) * math.exp(-h), 1, np.inf)
    assert lo < 0 < hi


# constants ------------------------------------------------------------------------

def test_c2_examples():
    assert th.c2(0.5, 1.0) == pytest.approx(1.0, rel=1e-15)
    ref = float(mp.gamma(mp.mpf(5) / 6) ** 2 / (mp.sin(mp.pi / 3) * mp.gamma(mp.mpf(5) / 3)))
    assert th.c2(1 / 3, 1.0) == pytest.approx(ref, rel=1e-13)
    assert ref == pytest.approx(1.630, abs=1e-3)


@pytest.mark.parametrize("h", [0.2, 1 / 3, 0.5, 2 / 3, 0.9])
def test_c2_integral_form(h):
    v, err = th.c2_integral(h, 1.0)
    assert v == pytest.approx(th.c2(h, 1.0), rel=1e-6)


def test_c4_half_closed_examples():
    assert th.c4_half_closed(0.0, 1.0) == pytest.approx(1.0, rel=1e-15)
    ref = math.exp(-0.16 * 0.5772156649015329) / (0.84 * 0.92)
    assert th.c4_half_closed(0.04, 1.0) == pytest.approx(ref, rel=1e-14)
    assert ref == pytest.approx(1.1798, abs=1e-4)
    with pytest.raises(ValueError):
        th.c4_half_closed(0.25, 1.0)


def test_c4_half_closed_increasing():
    g = np.linspace(0, 0.249, 200)
    vals = [th.c4_half_closed(x, 1.0) for x in g]
    assert np.all(np.diff(vals) > 0)


@pytest.mark.parametrize("g2", [0.02, 0.04, 0.1])
def test_c4_quadrature_vs_closed_form(g2):
    v, err = th.c2n_quadrature(0.5, g2, 2, 1.0)
    assert v == pytest.approx(th.c4_half_closed(g2, 1.0), rel=1e-3)
    assert abs(v - th.c4_half_closed(g2, 1.0)) <= max(err, 1e-12)


@pytest.mark.parametrize("h", [0.2, 1 / 3, 2 / 3])
def test_gaussian_factorization(h):
    v, err = th.c2n_quadrature(h, 0.0, 2, 1.0)
    assert v == pytest.approx(th.c2(h, 1.0) ** 2, rel=1e-3)
    assert abs(v - th.c2(h, 1.0) ** 2) <= err


def test_first_order_constant_at_half():
    v, _ = th.c2n_quadrature(0.5, 0.0, 1, 1.0)
    assert v == pytest.approx(1.0, rel=1e-10)


def test_quadrature_error_is_honest():
    """Tightening the tolerance moves the value by less than the reported error."""
    v, err = th.c2n_quadrature(1 / 3, 0.04, 2, 1.0, tol=1e-6)
    v2, _ = th.c2n_quadrature(1 / 3, 0.04, 2, 1.0, tol=1e-9)
    assert abs(v - v2) <= err


def test_t_large_scaling_of_c4():
    v1, _ = th.c2n_quadrature(2 / 3, 0.02, 2, 1.0)
    v2, _ = th.c2n_quadrature(2 / 3, 0.02, 2, 0.5)
    assert v2 == pytest.approx(v1 * 0.5 ** (4 * 2 / 3), rel=1e-12)


def test_sixth_order_against_selberg():
    g2 = 0.04
    v, err = th.c2n_quadrature(0.5, g2, 3, 1.0)
    ref = selberg_triple(-2 * g2) * math.exp(-12 * g2 * th.EULER_GAMMA)
    assert abs(v - ref) < 4 * err
    assert err / v < 0.01


def test_sixth_order_gaussian_factorization():
    v, err = th.c2n_quadrature(1 / 3, 0.0, 3, 1.0)
    assert abs(v - th.c2(1 / 3, 1.0) ** 3) < 4 * err


@pytest.mark.parametrize("h, g2, n", [(1 / 3, 0.2, 3), (0.5, 0.25, 2), (0.5, 0.1, 4), (0.0, 0.0, 2)])
def test_c2n_domain(h, g2, n):
    with pytest.raises(ValueError):
        th.c2n_quadrature(h, g2, n, 1.0)


# scaling laws --------------------------------------------------------------------

def test_s2n_exponents():
    assert th.s2n_exponent(1 / 3, 0.04, 1) == pytest.approx(2 / 3)
    assert th.s2n_exponent(0.5, 0.04, 2) == pytest.approx(1.84)


def test_s2n_first_order_small_scale():
    """n = 1: the prediction c2 (tau/T)^{2H} matches 2 (C(0) - C(tau)) as tau -> 0."""
    tau = 1e-5
    c0, _ = th.fou_covariance_time(1 / 3, 1.0, 0.0)
    ct, _ = th.fou_covariance_time(1 / 3, 1.0, tau)
    assert th.s2n_prediction(1 / 3, 0.04, 1, 1.0, tau) == pytest.approx(2 * (c0 - ct), rel=1e-2)


def test_s2n_prediction_vector():
    taus = np.array([0.01, 0.1])
    out = th.s2n_prediction(0.5, 0.0, 2, 1.0, taus)
    assert np.allclose(out, 3 * taus**2, rtol=1e-6)


def test_flatness_prediction():
    assert th.flatness_prediction(1 / 3, 0.0, 1.0, 0.01) == 1.0
    assert th.flatness_prediction(0.5, 0.04, 1.0, 1.0) == pytest.approx(1.1798, abs=1e-4)
    ratio = th.flatness_prediction(0.5, 0.04, 1.0, 0.05) / th.flatness_prediction(0.5, 0.04, 1.0, 0.1)
    assert ratio == pytest.approx(2**0.16, rel=1e-12)


# chaos correlator ----------------------------------------------------------------

def test_chaos_correlator_trivial_cases():
    assert th.chaos_correlator([0.3], 0.04, 1.0) == 1.0
    assert th.chaos_correlator([0.0, 0.1, 0.5], 0.0, 1.0) == 1.0


def test_chaos_correlator_pair_at_t():
    v = th.chaos_correlator([0.0, 1.0], 0.04, 1.0)
    assert v == pytest.approx(math.exp(0.16 * th.g_function(1.0, 1.0)), rel=1e-12)
    assert 0 < v < math.inf


def test_chaos_correlator_small_separation_power_law():
    a = th.chaos_correlator([0.0, 1e-4], 0.04, 1.0)
    b = th.chaos_correlator([0.0, 2e-4], 0.04, 1.0)
    assert a / b == pytest.approx(2**0.16, rel=1e-3)


def test_chaos_correlator_errors():
    with pytest.raises(ValueError):
        th.chaos_correlator([0.1, 0.1], 0.04, 1.0)
    with pytest.raises(ValueError):
        th.chaos_correlator([0.0, 0.1, 0.2], 0.3, 1.0)


# report ----------------------------------------------------------------------------

def test_theory_report_half():
    rep = th.theory_report(0.5, 0.04, 1.0, orders=(2, 4, 6, 3))
    assert rep.c4 == pytest.approx(1.1798, abs=1e-4)
    assert rep.flatness_exponent == pytest.approx(-0.16)
    assert 3 in rep.skipped and 6 in rep.c2n
    assert all(e > 0 for _, _, e in rep.covariance_samples)
    assert all(err > 0 for _, err in rep.c2n.values())


def test_theory_report_gaussian():
    rep = th.theory_report(1 / 3, 0.0, 1.0)
    assert rep.flatness_exponent == 0
    assert rep.flatness_amplitude == pytest.approx(1.0, rel=1e-6)


def test_theory_report_skips_missing_moments():
    rep = th.theory_report(1 / 3, 0.2, 1.0, orders=(2, 4, 6))
    assert 4 in rep.c2n and 6 in rep.skipped
