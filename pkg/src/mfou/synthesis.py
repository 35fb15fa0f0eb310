"""Spectral synthesis of stationary MfOU trajectories on a periodic grid.

Three stages, each a single pass through Fourier space:

1. log-correlated base field  x_tilde = IDFT{ E * K0 * DFT{dw_tilde} }
2. chaos weight               m = exp(gamma x_tilde - gamma^2 v),  v = mean(x_tilde^2)
3. MfOU path                  x = IDFT{ E * KH * DFT{m dw} }

E is the spectrum of the causal exponential e^(-t/T), K0 and KH the
log-correlated and fractional kernel spectra (both already carrying the
single dt weight, see :mod:`mfou.kernel`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import SampledPath, SimConfig, check
from .kernel import kernel_spectrum_exponential, kernel_spectrum_fractional, kernel_spectrum_h0
from .noise import NoisePair, generate_noise

EMPIRICAL_VARIANCE = "empirical_variance"
EXTERNAL_VALUE = "external_value"


@dataclass
class ChaosPath:
    values: np.ndarray
    gamma_sq: float
    normalization_used: str
    variance: float


@dataclass
class TrajectoryBundle:
    x: SampledPath
    x_tilde: SampledPath
    m: ChaosPath
    traj_index: int


def _kernel_key(config: SimConfig):
    return (config.n_points, config.t_tot, config.t_large, config.epsilon, config.hurst)


@lru_cache(maxsize=16)
def _transfer_functions(key):
    n_points, t_tot, t_large, epsilon, hurst = key
    cfg = SimConfig(n_points=n_points, t_tot=t_tot, t_large=t_large,
                    epsilon=epsilon, hurst=hurst)
    e = kernel_spectrum_exponential(cfg).spec.half
    log_filter = e * kernel_spectrum_h0(cfg).spec.half
    frac_filter = e * kernel_spectrum_fractional(cfg).spec.half
    log_filter.setflags(write=False)
    frac_filter.setflags(write=False)
    return log_filter, frac_filter


def transfer_functions(config: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """Half spectra (log-correlated, fractional) of the full linear filters, cached."""
    return _transfer_functions(_kernel_key(config))


def _filter(half: np.ndarray, signal: np.ndarray) -> np.ndarray:
    return np.fft.irfft(half * np.fft.rfft(signal), n=signal.size)


def synth_xtilde(config: SimConfig, noise: NoisePair) -> SampledPath:
    log_filter, _ = transfer_functions(config)
    return SampledPath(_filter(log_filter, noise.dw_tilde), config.dt, config)


def synth_chaos(config: SimConfig, x_tilde: SampledPath, variance: float | None = None) -> ChaosPath:
    """Normalized exponential of the base field.

    ``variance`` overrides the per-trajectory empirical mean of x_tilde^2.
    """
    g2 = config.gamma_sq
    if g2 < 0:
        raise ValueError("gamma_sq must be non-negative")
    if variance is None:
        v = float(np.mean(x_tilde.values**2))
        how = EMPIRICAL_VARIANCE
    else:
        v = float(variance)
        how = EXTERNAL_VALUE
    if g2 == 0:
        return ChaosPath(np.ones_like(x_tilde.values), 0.0, how, v)
    m = np.exp(np.sqrt(g2) * x_tilde.values - g2 * v)
    return ChaosPath(m, g2, how, v)


def synth_mfou(config: SimConfig, noise: NoisePair, m: ChaosPath, kernel_scale: float = 1.0) -> SampledPath:
    """MfOU path driven by the chaos-weighted noise ``m * dw``.

    ``kernel_scale`` multiplies the fractional transfer function; it exists
    for fault-injection tests and is 1 otherwise.
    """
    _, frac_filter = transfer_functions(config)
    if kernel_scale != 1.0:
        frac_filter = kernel_scale * frac_filter
    return SampledPath(_filter(frac_filter, m.values * noise.dw), config.dt, config)


def synth_bundle(config: SimConfig, traj_index: int, kernel_scale: float = 1.0) -> TrajectoryBundle:
    check(config)
    noise = generate_noise(config, traj_index)
    x_tilde = synth_xtilde(config, noise)
    m = synth_chaos(config, x_tilde)
    x = synth_mfou(config, noise, m, kernel_scale=kernel_scale)
    return TrajectoryBundle(x=x, x_tilde=x_tilde, m=m, traj_index=traj_index)


def synth_ensemble(config: SimConfig, kernel_scale: float = 1.0):
    """Yield the ``n_traj`` bundles in index order."""
    for i in range(config.n_traj):
        yield synth_bundle(config, i, kernel_scale=kernel_scale)
