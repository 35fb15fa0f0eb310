"""Seed-reproducible discrete white noises.

Each (seed, traj_index, channel) triple keys its own counter-based Philox
stream through ``numpy.random.SeedSequence``'s spawn key, so trajectories
can be regenerated individually and in any order. Gaussian variates use the
inverse-CDF method on 53-bit uniforms in the open interval (0, 1):

    u = (k + 1/2) 2^-53,  k = raw64 >> 11,   z = Phi^-1(u)

The method is fixed because tests pin seeded values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .config import SimConfig

CHANNEL_DW = 0
CHANNEL_DW_TILDE = 1


@dataclass
class NoisePair:
    dw: np.ndarray
    dw_tilde: np.ndarray
    seed: int
    traj_index: int


def substream(seed: int, traj_index: int, channel: int) -> np.random.Philox:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(traj_index), int(channel)))
    return np.random.Philox(ss)


def standard_normals(bitgen: np.random.BitGenerator, size: int) -> np.ndarray:
    raw = bitgen.random_raw(size)
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    return ndtri(u)


def generate_noise(config: SimConfig, traj_index: int) -> NoisePair:
    """Two independent arrays of N(0, dt) increments for trajectory ``traj_index``."""
    if not 0 <= traj_index < config.n_traj:
        raise ValueError(f"traj_index {traj_index} outside [0, {config.n_traj})")
    scale = np.sqrt(config.dt)
    n = config.n_points
    dw = scale * standard_normals(substream(config.seed, traj_index, CHANNEL_DW), n)
    dw_tilde = scale * standard_normals(substream(config.seed, traj_index, CHANNEL_DW_TILDE), n)
    return NoisePair(dw=dw, dw_tilde=dw_tilde, seed=config.seed, traj_index=traj_index)
