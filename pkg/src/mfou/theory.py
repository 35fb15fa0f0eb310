"""Closed-form and quadrature predictions for fOU / MfOU statistics.

Conventions: ``t_large`` is the OU time scale T, ``tau`` a lag in the same
time unit. Functions returning ``(value, error)`` carry an absolute error
estimate that is always strictly positive.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

EULER_GAMMA = 0.57721566490153286
TAIL_CUTOFF = 40.0  # in units of T

_QUAD = dict(epsabs=1e-13, epsrel=1e-11, limit=400)


def gamma_fn(z):
    """Euler Gamma function (``scipy.special.gamma``, Cephes; ~1e-15 relative on (0, 3])."""
    return special.gamma(z)


def _check_hurst(hurst):
    if not 0 < hurst < 1:
        raise ValueError(f"hurst={hurst} outside (0,1)")


def _positive_error(err, value):
    return max(float(err), 4 * np.finfo(float).eps * abs(value), np.finfo(float).tiny)


def _quad(f, a, b, **kw):
    opts = dict(_QUAD)
    opts.update(kw)
    return integrate.quad(f, a, b, **opts)


# fOU second-order statistics -------------------------------------------------

def fou_variance(hurst: float, t_large: float) -> float:
    """T^{2H} Gamma(H+1/2)^2 / (2 sin(pi H))."""
    _check_hurst(hurst)
    return t_large ** (2 * hurst) * gamma_fn(hurst + 0.5) ** 2 / (2 * math.sin(math.pi * hurst))


def covariance_bracket(u: float, r: float) -> float:
    """1/2 e^{-(r+u)} - sign(r-u)/2 e^{-|r-u|}, with lags in units of T."""
    sign = 1.0 if r > u else (-1.0 if r < u else 0.0)
    return 0.5 * math.exp(-(r + u)) - 0.5 * sign * math.exp(-abs(r - u))


def _power_weighted_bracket(alpha: float, r: float):
    """int_0^inf bracket(u; r) u^{alpha - 1} du for alpha = 2H > 0.

    u = s^{1/alpha} turns u^{alpha-1} du into ds/alpha. Beyond u = r + 40 the
    bracket equals cosh(r) e^{-u}; that remainder is added in closed form.
    """
    p = 1.0 / alpha

    def f(s):
        return covariance_bracket(s**p, r)

    value = err = 0.0
    u_cut = r + TAIL_CUTOFF
    knots = [0.0] + ([r**alpha] if r > 0 else []) + [u_cut**alpha]
    for a, b in zip(knots[:-1], knots[1:]):
        v, e = _quad(f, a, b)
        value += v
        err += e
    value /= alpha
    err /= alpha
    tail = math.cosh(r) * gamma_fn(alpha) * special.gammaincc(alpha, u_cut)
    return value + tail, err


def fou_covariance_time(hurst: float, t_large: float, tau: float) -> tuple[float, float]:
    """Covariance at lag tau from the time-domain integral representation."""
    _check_hurst(hurst)
    if tau < 0:
        raise ValueError("tau must be non-negative")
    r = tau / t_large
    pref = gamma_fn(hurst + 0.5) ** 2 / (2 * math.sin(math.pi * hurst) * gamma_fn(2 * hurst))
    scale = pref * t_large ** (2 * hurst)
    v, e = _power_weighted_bracket(2 * hurst, r)
    value = scale * v
    return value, _positive_error(scale * e, value)


def spectral_density(hurst: float, t_large: float, omega):
    """T^2 Gamma(H+1/2)^2 |2 pi w|^{1-2H} / (1 + 4 pi^2 w^2 T^2)."""
    omega = np.asarray(omega, dtype=float)
    x = 2 * np.pi * np.abs(omega)
    return (t_large**2 * gamma_fn(hurst + 0.5) ** 2 * x ** (1 - 2 * hurst)
            / (1 + (x * t_large) ** 2))


def fou_covariance_spectral(hurst: float, t_large: float, tau: float) -> tuple[float, float]:
    """Covariance at lag tau as the Fourier integral of :func:`spectral_density`.

    With x = 2 pi w T the even integrand reduces to

        Gamma(H+1/2)^2 T^{2H} / pi  int_0^inf cos(x tau/T) x^{1-2H} / (1+x^2) dx,

    split into [0, 1] (algebraic endpoint weight) and [1, inf) (Fourier
    weight, QAWF) when tau > 0.
    """
    _check_hurst(hurst)
    if tau < 0:
        raise ValueError("tau must be non-negative")
    r = tau / t_large
    a = 1 - 2 * hurst
    v1, e1 = integrate.quad(lambda x: math.cos(r * x) / (1 + x * x), 0.0, 1.0,
                            weight="alg", wvar=(a, 0.0), epsabs=1e-13, epsrel=1e-11, limit=400)
    if r > 0:
        v2, e2 = integrate.quad(lambda x: x**a / (1 + x * x), 1.0, np.inf,
                                weight="cos", wvar=r, epsabs=1e-13, limlst=200)
    else:
        v2, e2 = _quad(lambda x: x**a / (1 + x * x), 1.0, np.inf)
    scale = gamma_fn(hurst + 0.5) ** 2 * t_large ** (2 * hurst) / math.pi
    value = scale * (v1 + v2)
    return value, _positive_error(scale * (e1 + e2), value)


# log-correlated base field -------------------------------------------------------

def xtilde_covariance(t_large: float, tau: float) -> tuple[float, float]:
    """Covariance of the H = 0 field at lag tau > 0 (divergent at tau = 0).

    Integrand bracket(u) / u, handled with the logarithmic map u = r e^v so
    that du/u = dv.
    """
    if tau == 0:
        raise ValueError("the log-correlated field has infinite variance (tau = 0)")
    r = abs(tau) / t_large

    def f(v):
        return covariance_bracket(r * math.exp(v), r)

    v_lo, e_lo = _quad(f, -np.inf, 0.0)
    u_cut = r + TAIL_CUTOFF
    v_hi, e_hi = _quad(f, 0.0, math.log(u_cut / r))
    tail = math.cosh(r) * special.exp1(u_cut)
    value = v_lo + v_hi + tail
    return value, _positive_error(e_lo + e_hi, value)


def log_plus(x: float) -> float:
    return max(math.log(x), 0.0)


def g_at_zero() -> float:
    """int_0^inf ln(h) e^{-h} dh (equals minus the Euler-Mascheroni constant)."""
    head, _ = integrate.quad(lambda h: math.exp(-h), 0.0, 1.0, weight="alg-loga", wvar=(0.0, 0.0),
                             epsabs=1e-14, epsrel=1e-12)
    tail, _ = _quad(lambda h: math.log(h) * math.exp(-h), 1.0, np.inf)
    return head + tail


def g_function(t_large: float, tau: float) -> float:
    """Bounded remainder g(tau) = C(tau) - ln_+(T/|tau|); g(0) from :func:`g_at_zero`."""
    if tau == 0:
        return g_at_zero()
    c, _ = xtilde_covariance(t_large, abs(tau))
    return c - log_plus(t_large / abs(tau))


# increment-moment constants ----------------------------------------------------

def c2(hurst: float, t_large: float) -> float:
    """T^{2H} Gamma(H+1/2)^2 / (sin(pi H) Gamma(2H+1))."""
    _check_hurst(hurst)
    return (t_large ** (2 * hurst) * gamma_fn(hurst + 0.5) ** 2
            / (math.sin(math.pi * hurst) * gamma_fn(2 * hurst + 1)))


def increment_kernel_sq(u: float, hurst: float) -> float:
    """[(1-u)^{H-1/2} 1_{u<=1} - (-u)^{H-1/2} 1_{u<=0}]^2."""
    if u >= 1:
        # u = 1 is a measure-zero (possibly singular) point
        return 0.0
    if u >= 0:
        return (1.0 - u) ** (2 * hurst - 1)
    v = -u
    if v == 0:
        return 1.0 if hurst > 0.5 else math.inf
    # (1+v)^a - v^a written without cancellation at large v
    a = hurst - 0.5
    d = v**a * math.expm1(a * math.log1p(1.0 / v))
    return d * d


def _negative_side_mass(hurst: float) -> tuple[float, float]:
    """int_0^inf [(1+v)^{H-1/2} - v^{H-1/2}]^2 dv."""
    if hurst == 0.5:
        return 0.0, 0.0
    c = 0.5 - hurst

    def f(v):
        # the bracket squared with v^{2H-1} factored out
        return (1.0 - (v / (1.0 + v)) ** c) ** 2

    if hurst < 0.5:
        head, e1 = integrate.quad(f, 0.0, 1.0, weight="alg", wvar=(2 * hurst - 1, 0.0),
                                  epsabs=1e-14, epsrel=1e-12, limit=400)
    else:
        head, e1 = _quad(lambda v: increment_kernel_sq(-v, hurst), 0.0, 1.0)
    tail, e2 = _quad(lambda v: increment_kernel_sq(-v, hurst), 1.0, np.inf)
    return head + tail, e1 + e2


def c2_integral(hurst: float, t_large: float) -> tuple[float, float]:
    """c2 from its integral form, int_R [bracket]^2 du times T^{2H}."""
    _check_hurst(hurst)
    pos, e_pos = integrate.quad(lambda u: 1.0, 0.0, 1.0, weight="alg", wvar=(0.0, 2 * hurst - 1))
    neg, e_neg = _negative_side_mass(hurst)
    scale = t_large ** (2 * hurst)
    value = scale * (pos + neg)
    return value, _positive_error(scale * (e_pos + e_neg), value)


def c4_half_closed(gamma_sq: float, t_large: float) -> float:
    """H = 1/2 fourth-order constant T^2 e^{4 g2 g(0)} / ((1 - 4 g2)(1 - 2 g2))."""
    if not 0 <= gamma_sq < 0.25:
        raise ValueError("gamma_sq must lie in [0, 1/4)")
    return (t_large**2 * math.exp(-4 * gamma_sq * EULER_GAMMA)
            / ((1 - 4 * gamma_sq) * (1 - 2 * gamma_sq)))


def check_moment_range(hurst: float, gamma_sq: float, n: int):
    _check_hurst(hurst)
    if n < 1:
        raise ValueError("n must be >= 1")
    if gamma_sq < 0:
        raise ValueError("gamma_sq must be non-negative")
    bound = 0.25 if n == 1 else min(0.25, hurst / (n - 1))
    if not gamma_sq < bound:
        raise ValueError(f"moment of order {2 * n} needs gamma_sq < {bound:g} (got {gamma_sq:g})")


def _autocorrelation(s: float, hurst: float, tol: float) -> tuple[float, float]:
    """A(s) = int B(m) B(m + s) dm for s >= 0, split at the singular points of B."""
    def f(m):
        return increment_kernel_sq(m, hurst) * increment_kernel_sq(m + s, hurst)

    top = 1.0 - s
    # B is singular at 0 and 1, so the integrand is singular at -s, 0, 1 - s, 1
    singular = [-s, 0.0, top, 1.0]
    pts = {p for p in singular if p <= top}
    # neighbouring singular points can be very close (s -> 0 or s -> 1): grade
    # geometrically away from each one at the scale of its nearest neighbour
    for p in singular:
        d = min((abs(p - q) for q in singular if q != p), default=1.0)
        if 0 < d < 1:
            steps = d * 2.0 ** np.arange(0, int(math.ceil(math.log2(1.0 / d))) + 1)
            pts.update(x for x in np.concatenate([p - steps, p + steps]).tolist() if x <= top)
    pts = sorted(pts)
    value, err = _quad(f, -np.inf, pts[0], epsrel=tol, epsabs=tol * 1e-3)
    for a, b in zip(pts[:-1], pts[1:]):
        if b > a:
            v, e = _quad(f, a, b, epsrel=tol, epsabs=tol * 1e-3)
            value += v
            err += e
    return value, err


def _pair_integral(hurst: float, gamma_sq: float, tol: float) -> tuple[float, float]:
    """int int B(u1) B(u2) |u1 - u2|^{-4 g2} du1 du2 = 2 int_0^inf s^{-4 g2} A(s) ds.

    A(s) is finite at 0 for H > 1/4 and grows like s^{4H-1} otherwise. The
    map s = sigma^p with p = 1/(1 - 4 g2 - max(0, 1 - 4H)) cancels the
    combined power singularity at the origin.
    """
    beta = 4 * gamma_sq
    kappa = 1.0 - beta - max(0.0, 1.0 - 4 * hurst)
    p = 1.0 / kappa
    expo = p - 1.0 - p * beta  # Jacobian times s^{-beta}, as a power of sigma

    def outer(sigma):
        a, _ = _autocorrelation(sigma**p, hurst, tol * 1e-2)
        return p * sigma**expo * a

    # inner noise can trip quadpack's roundoff detector; the coarse/fine
    # comparison in c2n_quadrature accounts for it
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        v1, e1 = _quad(outer, 0.0, 1.0, epsrel=tol, epsabs=tol * 1e-2)
        v2, e2 = _quad(outer, 1.0, np.inf, epsrel=tol, epsabs=tol * 1e-2)
    return 2 * (v1 + v2), 2 * (e1 + e2)


def c2n_quadrature(hurst: float, gamma_sq: float, n: int, t_large: float,
                   tol: float = 1e-8, mc_samples: int = 400_000, seed: int = 0) -> tuple[float, float]:
    """Constant c_{H,gamma,2n} of the 2n-th increment moment, for n <= 3.

    n = 1 uses the one-dimensional integral form, n = 2 a nested adaptive
    quadrature in difference/midpoint coordinates (error = reported outer
    error plus the change against a 100x coarser tolerance), n = 3 a
    multiple-importance-sampling Monte Carlo estimate (error = one standard
    error).
    """
    check_moment_range(hurst, gamma_sq, n)
    if n == 1:
        return c2_integral(hurst, t_large)
    if n > 3:
        raise ValueError("constants are only available for n <= 3")
    prefactor = t_large ** (2 * n * hurst) * math.exp(-2 * n * (n - 1) * gamma_sq * EULER_GAMMA)
    if n == 2:
        fine, e_fine = _pair_integral(hurst, gamma_sq, tol)
        coarse, _ = _pair_integral(hurst, gamma_sq, tol * 100)
        value = prefactor * fine
        return value, _positive_error(prefactor * (e_fine + abs(fine - coarse)), value)
    value, stderr = _triple_integral_mc(hurst, gamma_sq, mc_samples, seed)
    return prefactor * value, _positive_error(prefactor * stderr, prefactor * value)


# Monte Carlo for n = 3 ---------------------------------------------------------

class _MarginalProposal:
    """Density proportional-ish to B(u), sampled exactly by inversion.

    On [0, 1] it is exactly (1-u)^{2H-1} normalized; on u < 0 (v = -u) a
    two-piece power law v^a (v < 1), v^{2H-3} (v >= 1), a = min(2H-1, 0),
    which bounds B(-v)/q(v) at both ends.
    """

    def __init__(self, hurst: float):
        self.h = hurst
        self.pos_mass = 1.0 / (2 * hurst)
        self.neg_mass = 0.0 if hurst == 0.5 else max(_negative_side_mass(hurst)[0], 0.0)
        self.w_neg = self.neg_mass / (self.pos_mass + self.neg_mass)
        self.a = min(2 * hurst - 1, 0.0)
        self.m_in = 1.0 / (self.a + 1)          # int_0^1 v^a
        self.m_out = 1.0 / (2 - 2 * hurst)      # int_1^inf v^{2H-3}
        self.z_neg = self.m_in + self.m_out

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        h = self.h
        u = np.empty(size)
        neg = rng.random(size) < self.w_neg
        k = int(neg.sum())
        w = rng.random(size - k)
        u[~neg] = 1.0 - w ** (1.0 / (2 * h))
        if k:
            inner = rng.random(k) < self.m_in / self.z_neg
            w = rng.random(k)
            v = np.where(inner, w ** (1.0 / (self.a + 1)), (1.0 - w) ** (-1.0 / (2 - 2 * h)))
            u[neg] = -v
        return u

    def pdf(self, u: np.ndarray) -> np.ndarray:
        h = self.h
        out = np.zeros_like(u)
        pos = (u >= 0) & (u < 1)
        out[pos] = (1 - self.w_neg) * 2 * h * (1 - u[pos]) ** (2 * h - 1)
        if self.w_neg > 0:
            neg = u < 0
            v = -u[neg]
            dens = np.where(v < 1, v**self.a, v ** (2 * h - 3)) / self.z_neg
            out[neg] = self.w_neg * dens
        return out


def _kernel_sq_vec(u: np.ndarray, hurst: float) -> np.ndarray:
    out = np.zeros_like(u)
    pos = (u >= 0) & (u < 1)
    out[pos] = (1 - u[pos]) ** (2 * hurst - 1)
    neg = u < 0
    v = -u[neg]
    a = hurst - 0.5
    out[neg] = (v**a * np.expm1(a * np.log1p(1.0 / v))) ** 2
    return out


def _triple_integral_mc(hurst, gamma_sq, n_samples, seed, delta=0.25, alpha=0.5):
    """MC estimate of int_{R^3} prod B(u_i) prod_{i<j} |u_i - u_j|^{-4 g2}.

    Mixture proposal (balance heuristic, deterministic allocation): a product
    of marginals, and a diagonal component that draws an anchor point from
    the marginal and places the other two within delta of it with density
    ~|s|^{-4 g2}, symmetrized over the anchor so every pair is covered.
    """
    beta = 4 * gamma_sq
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(3,)))
    prop = _MarginalProposal(hurst)

    def k_pdf(s):
        inside = np.abs(s) < delta
        out = np.zeros_like(s)
        out[inside] = (1 - beta) / (2 * delta ** (1 - beta)) * np.abs(s[inside]) ** (-beta)
        return out

    def k_sample(size):
        mag = delta * rng.random(size) ** (1.0 / (1 - beta))
        return np.where(rng.random(size) < 0.5, -mag, mag)

    n_diag = int(alpha * n_samples)
    n_prod = n_samples - n_diag
    prod = prop.sample(rng, 3 * n_prod).reshape(n_prod, 3)
    anchor = prop.sample(rng, n_diag)
    diag = np.repeat(anchor[:, None], 3, axis=1)
    diag[:, 1] += k_sample(n_diag)
    diag[:, 2] += k_sample(n_diag)
    # random relabel so the anchor is uniformly any of the three coordinates
    perm = rng.permuted(np.tile(np.arange(3), (n_diag, 1)), axis=1)
    diag = np.take_along_axis(diag, perm, axis=1)
    u = np.vstack([prod, diag])

    q1 = [prop.pdf(u[:, i]) for i in range(3)]
    q_prod = q1[0] * q1[1] * q1[2]
    q_diag = np.zeros(len(u))
    for a in range(3):
        b, c = [i for i in range(3) if i != a]
        q_diag += q1[a] * k_pdf(u[:, b] - u[:, a]) * k_pdf(u[:, c] - u[:, a])
    q_diag /= 3
    q = (1 - alpha) * q_prod + alpha * q_diag

    f = _kernel_sq_vec(u[:, 0], hurst) * _kernel_sq_vec(u[:, 1], hurst) * _kernel_sq_vec(u[:, 2], hurst)
    if beta > 0:
        with np.errstate(divide="ignore"):
            f = f * (np.abs(u[:, 0] - u[:, 1]) * np.abs(u[:, 0] - u[:, 2])
                     * np.abs(u[:, 1] - u[:, 2])) ** (-beta)
    w = np.where(f > 0, f / np.where(q > 0, q, 1.0), 0.0)
    return float(w.mean()), float(w.std(ddof=1) / math.sqrt(len(w)))


# scaling predictions ------------------------------------------------------------

def gaussian_moment_factor(n: int) -> float:
    """(2n)! / (2^n n!)."""
    return math.factorial(2 * n) / (2**n * math.factorial(n))


def s2n_exponent(hurst: float, gamma_sq: float, n: int) -> float:
    return 2 * n * hurst - 2 * n * (n - 1) * gamma_sq


def s2n_constant(hurst: float, gamma_sq: float, n: int, t_large: float) -> float:
    return c2(hurst, t_large) if n == 1 else c2n_quadrature(hurst, gamma_sq, n, t_large)[0]


def s2n_prediction(hurst: float, gamma_sq: float, n: int, t_large: float, tau) -> float:
    """Small-scale law c_{H,g,2n} (2n)!/(2^n n!) (tau/T)^{2nH - 2n(n-1) g2}."""
    check_moment_range(hurst, gamma_sq, n)
    tau = np.asarray(tau, dtype=float)
    if np.any(tau <= 0):
        raise ValueError("tau must be positive")
    c = s2n_constant(hurst, gamma_sq, n, t_large)
    out = c * gaussian_moment_factor(n) * (tau / t_large) ** s2n_exponent(hurst, gamma_sq, n)
    return float(out) if out.ndim == 0 else out


def flatness_amplitude(hurst: float, gamma_sq: float, t_large: float = 1.0) -> float:
    """c_{H,g,4} / c_{H,g,2}^2 (dimensionless)."""
    check_moment_range(hurst, gamma_sq, 2)
    if gamma_sq == 0:
        return 1.0
    return c2n_quadrature(hurst, gamma_sq, 2, t_large)[0] / c2(hurst, t_large) ** 2


def flatness_prediction(hurst: float, gamma_sq: float, t_large: float, tau) -> float:
    """(c4 / c2^2) (tau/T)^{-4 g2}."""
    tau = np.asarray(tau, dtype=float)
    out = flatness_amplitude(hurst, gamma_sq, t_large) * (tau / t_large) ** (-4 * gamma_sq)
    return float(out) if out.ndim == 0 else out


def chaos_correlator(points, gamma_sq: float, t_large: float) -> float:
    """Limit of E[prod_i M^2(u_i)]: prod over pairs of exp(4 g2 [ln_+(T/|d|) + g(d)])."""
    pts = [float(p) for p in points]
    n = len(pts)
    if n >= 2 and not gamma_sq < min(0.25, 1 / (2 * (n - 1))):
        raise ValueError("gamma_sq outside the range where the correlator is locally integrable")
    if gamma_sq == 0 or n < 2:
        return 1.0
    log_total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            d = abs(pts[i] - pts[j])
            if d == 0:
                raise ValueError("coincident points make the correlator singular")
            log_total += 4 * gamma_sq * (log_plus(t_large / d) + g_function(t_large, d))
    return math.exp(log_total)


# report ------------------------------------------------------------------------

@dataclass
class TheoryReport:
    hurst: float
    gamma_sq: float
    t_large: float
    variance: float
    covariance_samples: list = field(default_factory=list)  # (tau, value, error)
    c2: float = math.nan
    c4: float | None = None
    c2n: dict = field(default_factory=dict)            # order -> (value, error)
    s2n_scaling: dict = field(default_factory=dict)    # order -> (exponent, amplitude)
    flatness_exponent: float = 0.0
    flatness_amplitude: float | None = None
    skipped: dict = field(default_factory=dict)        # order -> reason


def theory_report(hurst: float, gamma_sq: float, t_large: float, orders=(2, 4),
                  taus=None) -> TheoryReport:
    """Evaluate every prediction for one (H, gamma^2, T).

    ``s2n_scaling[order]`` holds the exponent and the prefactor A of
    S_order(tau) ~ A tau^exponent (tau in absolute time units).
    """
    if taus is None:
        taus = [0.0, 0.1 * t_large, 0.5 * t_large, t_large, 2 * t_large, 5 * t_large]
    rep = TheoryReport(hurst=hurst, gamma_sq=gamma_sq, t_large=t_large,
                       variance=fou_variance(hurst, t_large), c2=c2(hurst, t_large))
    rep.covariance_samples = [(tau, *fou_covariance_time(hurst, t_large, tau)) for tau in taus]
    for order in orders:
        if order % 2 or order < 2:
            rep.skipped[order] = "only even orders >= 2 have predictions"
            continue
        n = order // 2
        try:
            check_moment_range(hurst, gamma_sq, n)
        except ValueError as exc:
            rep.skipped[order] = str(exc)
            continue
        if n > 3:
            rep.skipped[order] = "constants only available up to order 6"
            continue
        val, err = (c2(hurst, t_large), c2_integral(hurst, t_large)[1]) if n == 1 \
            else c2n_quadrature(hurst, gamma_sq, n, t_large)
        rep.c2n[order] = (val, err)
        expo = s2n_exponent(hurst, gamma_sq, n)
        rep.s2n_scaling[order] = (expo, val * gaussian_moment_factor(n) * t_large ** (-expo))
    if 4 in rep.c2n:
        rep.c4 = rep.c2n[4][0]
        rep.flatness_exponent = -4 * gamma_sq if gamma_sq else 0.0
        rep.flatness_amplitude = rep.c4 / rep.c2**2
    return rep
