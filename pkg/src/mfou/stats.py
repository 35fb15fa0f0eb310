"""Empirical estimators on sampled trajectories.

Increments are taken non-cyclically, ``x[k:] - x[:-k]``, so a path of N
samples gives N - k increments at lag k even though the synthesized paths
are periodic. The structure function of one trajectory is the plain mean of
the n-th power of those increments, and ensemble values are the uniform
average of the per-trajectory means.

Long sums go through ``np.add.reduce`` on contiguous arrays, which uses
pairwise summation, so the result does not drift with N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import SampledPath

LAG_RTOL = 1e-9
MIN_FIT_POINTS = 5
HIST_HALF_WIDTH = 8.0


# grid helpers -------------------------------------------------------------------

def lag_index(tau: float, dt: float) -> int:
    """Integer k with tau = k dt, or ValueError if tau is not on the grid."""
    k = round(tau / dt)
    if k < 1 or abs(k * dt - tau) > LAG_RTOL * max(abs(tau), dt):
        raise ValueError(f"tau={tau!r} is not a positive multiple of dt={dt!r}")
    return int(k)


def octave_scales(dt: float, t_tot: float, per_octave: int = 1,
                  tau_min: float | None = None, tau_max: float | None = None) -> np.ndarray:
    """Geometric grid of grid-aligned lags between ``tau_min`` and ``tau_max``.

    Defaults span [dt, t_tot/4]. Points are 2^(j/per_octave) dt snapped to the
    nearest lag; duplicates produced by snapping at small lags are dropped.
    """
    if per_octave < 1:
        raise ValueError("per_octave must be >= 1")
    lo = dt if tau_min is None else max(tau_min, dt)
    hi = t_tot / 4 if tau_max is None else min(tau_max, t_tot / 4)
    if hi < lo:
        raise ValueError("empty scale range")
    j_lo = math.ceil(per_octave * math.log2(lo / dt) - 1e-9)
    j_hi = math.floor(per_octave * math.log2(hi / dt) + 1e-9)
    ks = np.unique(np.rint(2.0 ** (np.arange(j_lo, j_hi + 1) / per_octave)).astype(np.int64))
    ks = ks[(ks * dt >= lo * (1 - LAG_RTOL)) & (ks * dt <= hi * (1 + LAG_RTOL))]
    return ks * dt


def increments(path: SampledPath, tau: float) -> np.ndarray:
    """delta_tau X(t) = X(t + tau) - X(t) for t = 0 .. (N - k - 1) dt."""
    k = lag_index(tau, path.dt)
    if k >= len(path.values):
        raise ValueError("tau exceeds the path length")
    return path.values[k:] - path.values[:-k]


# structure functions --------------------------------------------------------------

@dataclass
class MomentTable:
    """Per-scale moments S_n(tau), averaged over an ensemble.

    ``per_traj[n]`` keeps the individual trajectory estimates (shape
    ensemble_size x n_scales), which is what error bars are built from.
    """

    scales: np.ndarray
    s_n: dict
    n_samples_per_scale: np.ndarray
    ensemble_size: int
    per_traj: dict = field(default_factory=dict)
    flatness: np.ndarray | None = None

    def __post_init__(self):
        self.scales = np.asarray(self.scales, dtype=float)
        if self.scales.size and np.any(np.diff(self.scales) <= 0):
            raise ValueError("scales must be strictly increasing")
        if self.flatness is None and 2 in self.s_n and 4 in self.s_n and np.all(self.s_n[2] != 0):
            self.flatness = flatness(self)

    @property
    def orders(self) -> list[int]:
        return sorted(self.s_n)

    def standard_error(self, order: int) -> np.ndarray:
        """Standard error of the ensemble mean (nan for a single trajectory)."""
        v = self.per_traj[order]
        if v.shape[0] < 2:
            return np.full(v.shape[1], np.nan)
        return v.std(axis=0, ddof=1) / math.sqrt(v.shape[0])


def path_moments(values: np.ndarray, orders: Sequence[int], lags: Sequence[int]) -> np.ndarray:
    """Array (len(orders), len(lags)) of mean((x[k:] - x[:-k])^n)."""
    out = np.empty((len(orders), len(lags)))
    for j, k in enumerate(lags):
        d = values[k:] - values[:-k]
        p = np.ones_like(d)
        done = 0
        for i, n in sorted(enumerate(orders), key=lambda t: t[1]):
            for _ in range(n - done):
                p *= d
            done = n
            out[i, j] = np.add.reduce(p) / d.size
    return out


def _check_orders(orders) -> list[int]:
    orders = [int(n) for n in orders]
    if not orders or any(n < 1 for n in orders):
        raise ValueError("orders must be a non-empty list of positive integers")
    if len(set(orders)) != len(orders):
        raise ValueError("orders contain duplicates")
    return orders


def _common_dt(paths) -> float:
    dts = {p.dt for p in paths}
    if len(dts) != 1:
        raise ValueError("paths do not share a time step")
    return dts.pop()


def table_from_moments(per_traj_moments: Iterable[np.ndarray], orders: Sequence[int],
                       scales: np.ndarray, n_points: int, dt: float) -> MomentTable:
    """Assemble a table from :func:`path_moments` outputs, one per trajectory."""
    stack = np.asarray(list(per_traj_moments))
    if stack.size == 0:
        raise ValueError("no trajectories")
    lags = [lag_index(t, dt) for t in scales]
    per_traj = {n: stack[:, i, :] for i, n in enumerate(orders)}
    s_n = {n: v.mean(axis=0) for n, v in per_traj.items()}
    counts = np.array([(n_points - k) * stack.shape[0] for k in lags], dtype=np.int64)
    return MomentTable(np.asarray(scales, float), s_n, counts, stack.shape[0], per_traj)


def structure_function(paths: Sequence[SampledPath], orders: Sequence[int],
                       scales: Sequence[float]) -> MomentTable:
    """Ensemble structure functions S_n(tau) for every order and scale.

    Parameters
    ----------
    paths : sequence of SampledPath
        Trajectories on a common grid.
    orders : sequence of int
        Moment orders n.
    scales : sequence of float
        Lags tau, each a multiple of dt.
    """
    paths = list(paths)
    if not paths:
        raise ValueError("no paths given")
    orders = _check_orders(orders)
    scales = np.asarray(scales, dtype=float)
    if scales.size == 0:
        raise ValueError("no scales given")
    dt = _common_dt(paths)
    n_points = len(paths[0].values)
    if any(len(p.values) != n_points for p in paths):
        raise ValueError("paths differ in length")
    lags = [lag_index(t, dt) for t in scales]
    if max(lags) >= n_points:
        raise ValueError("largest scale exceeds the path length")
    return table_from_moments((path_moments(p.values, orders, lags) for p in paths),
                              orders, scales, n_points, dt)


def structure_function_bruteforce(paths: Sequence[SampledPath], orders: Sequence[int],
                                  scales: Sequence[float]) -> MomentTable:
    """Reference implementation with explicit loops; only for small N."""
    paths = list(paths)
    if not paths:
        raise ValueError("no paths given")
    orders = _check_orders(orders)
    dt = _common_dt(paths)
    n_points = len(paths[0].values)
    per = []
    for p in paths:
        x = [float(v) for v in p.values]
        m = np.zeros((len(orders), len(scales)))
        for j, tau in enumerate(scales):
            k = lag_index(tau, dt)
            for i, n in enumerate(orders):
                m[i, j] = math.fsum((x[t + k] - x[t]) ** n for t in range(n_points - k)) / (n_points - k)
        per.append(m)
    return table_from_moments(per, orders, np.asarray(scales, float), n_points, dt)


def flatness(table: MomentTable) -> np.ndarray:
    """F(tau) = S_4 / (3 S_2^2)."""
    if 2 not in table.s_n or 4 not in table.s_n:
        raise ValueError("flatness needs orders 2 and 4")
    s2 = table.s_n[2]
    bad = np.flatnonzero(s2 == 0)
    if bad.size:
        raise ArithmeticError(f"S_2 vanishes at tau={table.scales[bad[0]]!r}")
    return table.s_n[4] / (3 * s2**2)


# power-law fits -------------------------------------------------------------------

@dataclass(frozen=True)
class FitResult:
    """Least-squares line through (ln tau, ln S)."""

    exponent: float
    log_amplitude: float
    fit_range: tuple
    residual_rms: float
    n_points: int

    def predict(self, tau):
        return np.exp(self.log_amplitude) * np.asarray(tau, float) ** self.exponent


def _in_range(tau: np.ndarray, fit_range) -> np.ndarray:
    lo, hi = fit_range
    if not 0 < lo < hi:
        raise ValueError("fit_range must satisfy 0 < lo < hi")
    return (tau >= lo * (1 - LAG_RTOL)) & (tau <= hi * (1 + LAG_RTOL))


def fit_power_law_arrays(tau, values, fit_range) -> FitResult:
    """OLS of ln(values) on ln(tau) restricted to ``fit_range``."""
    tau = np.asarray(tau, float)
    values = np.asarray(values, float)
    sel = _in_range(tau, fit_range)
    if sel.sum() < MIN_FIT_POINTS:
        raise ValueError(f"need at least {MIN_FIT_POINTS} scales in {fit_range}, have {int(sel.sum())}")
    v = values[sel]
    if np.any(v <= 0) or not np.all(np.isfinite(v)):
        raise ArithmeticError("non-positive or non-finite values inside the fit range")
    x, y = np.log(tau[sel]), np.log(v)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return FitResult(float(slope), float(intercept), (float(fit_range[0]), float(fit_range[1])),
                     float(np.sqrt(np.mean(resid**2))), int(sel.sum()))


def fit_power_law(table: MomentTable, order: int, fit_range) -> FitResult:
    if order not in table.s_n:
        raise ValueError(f"order {order} not in the table")
    lo, hi = fit_range
    if lo < table.scales[0] * (1 - LAG_RTOL) or hi > table.scales[-1] * (1 + LAG_RTOL):
        raise ValueError("fit_range extends beyond the table's scales")
    return fit_power_law_arrays(table.scales, table.s_n[order], fit_range)


def compensated_amplitude(tau, values, exponent: float, fit_range, reference: float = 1.0) -> float:
    """Geometric mean of values / (tau/reference)^exponent over the fit range.

    With the exponent fixed to its predicted value this estimates the
    prefactor A of A (tau/reference)^exponent; for the fitted exponent it is
    the fit evaluated at the centroid of ln tau.
    """
    tau = np.asarray(tau, float)
    values = np.asarray(values, float)
    sel = _in_range(tau, fit_range)
    if not sel.any():
        raise ValueError("no scales inside the fit range")
    v = values[sel]
    if np.any(v <= 0):
        raise ArithmeticError("non-positive values inside the fit range")
    return float(np.exp(np.mean(np.log(v) - exponent * np.log(tau[sel] / reference))))


# histograms -----------------------------------------------------------------------

@dataclass
class HistogramSet:
    """Histograms of standardized increments, one row per scale.

    Bins cover [-8, 8] in units of the per-scale standard deviation; the
    rare increments beyond that range are counted in ``n_total`` but not in
    ``counts``. ``density`` is normalized by ``n_total`` so it estimates the
    probability density of the standardized increment.
    """

    scales: np.ndarray
    edges: np.ndarray
    counts: np.ndarray
    n_total: np.ndarray
    sigma: np.ndarray
    kurtosis: np.ndarray

    @property
    def n_used(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def density(self) -> np.ndarray:
        width = np.diff(self.edges)
        return self.counts / (self.n_total[:, None] * width[None, :])


def pdf_histograms(paths: Sequence[SampledPath], scales: Sequence[float], n_bins: int = 64) -> HistogramSet:
    """Pooled histograms of increments standardized to unit variance."""
    if n_bins < 16:
        raise ValueError("n_bins must be >= 16")
    paths = list(paths)
    if not paths:
        raise ValueError("no paths given")
    dt = _common_dt(paths)
    scales = np.asarray(scales, float)
    edges = np.linspace(-HIST_HALF_WIDTH, HIST_HALF_WIDTH, n_bins + 1)
    counts = np.zeros((scales.size, n_bins), dtype=np.int64)
    n_total = np.zeros(scales.size, dtype=np.int64)
    sigma = np.zeros(scales.size)
    kurt = np.zeros(scales.size)
    for j, tau in enumerate(scales):
        lag_index(tau, dt)
        d = np.concatenate([increments(p, tau) for p in paths])
        sd = float(np.std(d))
        if not sd > 0:
            raise ArithmeticError(f"degenerate increment variance at tau={tau!r}")
        z = (d - d.mean()) / sd
        counts[j], _ = np.histogram(z, bins=edges)
        n_total[j] = z.size
        sigma[j] = sd
        kurt[j] = float(np.mean(z**4))
    return HistogramSet(scales, edges, counts, n_total, sigma, kurt)
