"""Fractional Ornstein-Uhlenbeck trajectories driven by multiplicative chaos.

Spectral synthesis on a periodic grid, the matching theoretical
predictions, and estimators to compare the two.
"""

from .config import SampledPath, SimConfig, check, load_config, max_even_moment, validate
from .noise import NoisePair, generate_noise
from .spectral import Spectrum, circular_convolve, dft, idft
from .synthesis import ChaosPath, TrajectoryBundle, synth_bundle, synth_chaos, synth_mfou, synth_xtilde

__version__ = "0.1.0"

__all__ = [
    "ChaosPath", "NoisePair", "SampledPath", "SimConfig", "Spectrum", "TrajectoryBundle",
    "check", "circular_convolve", "dft", "generate_noise", "idft", "load_config",
    "max_even_moment", "synth_bundle", "synth_chaos", "synth_mfou", "synth_xtilde", "validate",
]
