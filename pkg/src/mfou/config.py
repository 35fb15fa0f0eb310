"""Simulation configuration, periodic grid and parameter-validity rules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

#: returned by :func:`max_even_moment` when every moment is finite (gamma_sq == 0)
UNBOUNDED = math.inf

CONFIG_KEYS = ("n_points", "t_tot", "t_large", "epsilon", "hurst", "gamma_sq", "seed", "n_traj")


@dataclass(frozen=True)
class SimConfig:
    """All synthesis parameters.

    Times are absolute, in the single time unit of the problem. ``epsilon``
    is the regularizing scale, ``t_large`` the OU correlation time.
    """

    n_points: int = 2**21
    t_tot: float = 1.0
    t_large: float = 2.0**-7
    epsilon: float = 4 * 2.0**-21
    hurst: float = 1 / 3
    gamma_sq: float = 0.0
    seed: int = 0
    n_traj: int = 10

    @property
    def dt(self) -> float:
        return self.t_tot / self.n_points

    @property
    def gamma(self) -> float:
        return math.sqrt(self.gamma_sq)

    def times(self) -> np.ndarray:
        return np.arange(self.n_points) * self.dt

    def with_(self, **changes) -> "SimConfig":
        return replace(self, **changes)

    @classmethod
    def desk(cls, **changes) -> "SimConfig":
        """Reduced-scale default: N=2^21, T_tot=1, T=2^-7, eps=4 dt, 10 trajectories."""
        cfg = cls(**changes)
        if "epsilon" not in changes:
            cfg = replace(cfg, epsilon=4 * cfg.dt)
        return cfg


@dataclass
class SampledPath:
    """Uniformly sampled real trajectory on the periodic grid."""

    values: np.ndarray
    dt: float
    meta: SimConfig | None = field(default=None, repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1:
            raise ValueError("path values must be one-dimensional")
        if self.meta is not None and self.values.size != self.meta.n_points:
            raise ValueError(f"path length {self.values.size} != n_points {self.meta.n_points}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("path contains non-finite values")

    def __len__(self):
        return self.values.size


def _is_power_of_two(n) -> bool:
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0


def validate(config: SimConfig) -> list[str]:
    """Return the list of violated invariants; an empty list means the config is valid."""
    errors = []
    if not _is_power_of_two(config.n_points):
        errors.append("n_points is not a positive power of two")
    if not config.t_tot > 0:
        errors.append("t_tot must be positive")
    if not config.t_large > 0:
        errors.append("t_large must be positive")
    if not config.epsilon > 0:
        errors.append("epsilon must be positive")
    if not 0 < config.hurst < 1:
        errors.append("hurst outside (0,1)")
    if not config.gamma_sq >= 0:
        errors.append("gamma_sq is negative")
    elif config.gamma_sq >= 0.25:
        errors.append("gamma_sq >= 1/4")
    if not (isinstance(config.seed, (int, np.integer)) and 0 <= config.seed < 2**64):
        errors.append("seed is not a 64-bit unsigned integer")
    if not (isinstance(config.n_traj, (int, np.integer)) and config.n_traj >= 1):
        errors.append("n_traj must be a positive integer")
    if not errors:
        # relative slack so that epsilon = dt computed in floating point passes
        if config.epsilon < config.dt * (1 - 1e-12):
            errors.append("epsilon < dt (regularization not resolved by the grid)")
        if not config.t_large < config.t_tot / 8:
            errors.append("t_large >= t_tot/8 (aliasing guard)")
    return errors


def is_valid(config: SimConfig) -> bool:
    return not validate(config)


def check(config: SimConfig) -> SimConfig:
    """Raise ``ValueError`` listing every violated invariant, else return the config."""
    errors = validate(config)
    if errors:
        raise ValueError("invalid SimConfig: " + "; ".join(errors))
    return config


def max_even_moment(hurst: float, gamma_sq: float) -> float:
    """Largest even order 2n with a guaranteed finite moment.

    The moment of order 2n exists for gamma_sq < min(1/4, H/(n-1)). Returns
    :data:`UNBOUNDED` when ``gamma_sq == 0``.
    """
    if not 0 < hurst < 1:
        raise ValueError("hurst must lie in (0,1)")
    if not 0 <= gamma_sq < 0.25:
        raise ValueError("gamma_sq must lie in [0, 1/4)")
    if gamma_sq == 0:
        return UNBOUNDED
    n = math.floor(hurst / gamma_sq) + 1
    # the float division can land on either side of an exact integer ratio
    while n > 1 and not gamma_sq * (n - 1) < hurst:
        n -= 1
    while gamma_sq * n < hurst:
        n += 1
    return 2 * n


def moment_exists(hurst: float, gamma_sq: float, order: int) -> bool:
    """True when the even moment ``order`` = 2n satisfies the existence condition."""
    if order % 2:
        raise ValueError("moment existence is stated for even orders")
    n = order // 2
    if gamma_sq >= 0.25:
        return False
    return n == 1 or gamma_sq < hurst / (n - 1)


def parse_config_text(text: str) -> dict:
    """Parse flat ``key=value`` lines. Blank lines and ``#`` comments are ignored."""
    out = {}
    types = {f.name: f.type for f in fields(SimConfig)}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        out[key] = _coerce(value, types[key])
    return out


def _coerce(value: str, typ):
    if typ in (int, "int"):
        try:
            return int(value, 0)
        except ValueError:
            f = float(value)  # accepts forms such as 2e6
            if not f.is_integer():
                raise ValueError(f"expected an integer, got {value!r}") from None
            return int(f)
    return float(value)


def load_config(path: str | Path, **overrides) -> SimConfig:
    """Read a key=value file; non-None ``overrides`` win over file values.

    When ``epsilon`` is absent it defaults to 4 dt.
    """
    values = parse_config_text(Path(path).read_text())
    values.update({k: v for k, v in overrides.items() if v is not None})
    return SimConfig.desk(**values)


def format_config(config: SimConfig) -> str:
    return "".join(f"{k}={getattr(config, k)!r}\n" for k in CONFIG_KEYS)
