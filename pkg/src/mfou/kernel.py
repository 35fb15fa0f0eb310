"""Discretized causal kernels on the periodic grid.

The regularized fractional kernel is

    h(t) = (H - 1/2) (t + eps)^(H - 3/2) 1_{t >= 0}  +  eps^(H - 1/2) delta(t)

Its smooth part is sampled at t_i = i dt, i = 0..N-1 (the causal support
wrapped cyclically onto one period) and weighted by dt, with the t = 0 sample
at half weight (trapezoid rule at the edge of the one-sided support; a full
weight there over-counts the steep head of the kernel, which for H < 1/2
visibly biases the variance). The Dirac part is
added as an exact flat spectral constant. The H = 0 variant drops the Dirac
term and instead removes the DC bin, so that the kernel integrates to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SimConfig
from .spectral import Spectrum, idft

FRACTIONAL = "fractional"
LOG_H0 = "log_h0"
EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class KernelSpectrum:
    spec: Spectrum
    kind: str
    epsilon: float
    dt: float
    hurst: float | None = None

    def real_space(self) -> np.ndarray:
        return idft(self.spec)


def sample_frak_h(config: SimConfig, hurst: float | None = None) -> np.ndarray:
    """Samples of (H - 1/2)(t + eps)^(H - 3/2) on t_i = i dt, i = 0..N-1.

    ``hurst`` defaults to ``config.hurst``; pass 0 for the log-correlated kernel.
    """
    h = config.hurst if hurst is None else hurst
    t = config.times()
    if h == 0.5:
        return np.zeros_like(t)
    return (h - 0.5) * (t + config.epsilon) ** (h - 1.5)


def kernel_spectrum_fractional(config: SimConfig) -> KernelSpectrum:
    """dt * DFT{frak_h} + eps^(H - 1/2), frak_h(0) at half weight."""
    frak = sample_frak_h(config)
    frak[0] *= 0.5
    half = config.dt * np.fft.rfft(frak) + config.epsilon ** (config.hurst - 0.5)
    return KernelSpectrum(Spectrum(half, config.n_points), FRACTIONAL,
                          config.epsilon, config.dt, config.hurst)


def kernel_spectrum_h0(config: SimConfig) -> KernelSpectrum:
    """dt * (DFT{frak_h0}[w] - DFT{frak_h0}[0]); the DC coefficient is exactly zero."""
    f = np.fft.rfft(sample_frak_h(config, hurst=0.0))
    half = config.dt * (f - f[0])
    half[0] = 0.0
    return KernelSpectrum(Spectrum(half, config.n_points), LOG_H0,
                          config.epsilon, config.dt, 0.0)


def kernel_spectrum_exponential(config: SimConfig) -> KernelSpectrum:
    """DFT of e^(-t_i/T), i = 0..N-1. Carries no dt weight."""
    samples = np.exp(-config.times() / config.t_large)
    return KernelSpectrum(Spectrum(np.fft.rfft(samples), config.n_points), EXPONENTIAL,
                          config.epsilon, config.dt)
