"""Quadratically weighted (bimodal) Gumbel distribution.

A random variable X follows the bimodal Gumbel law BG(mu, sigma, delta) when
its density is a Gumbel density reshaped by a quadratic weight,

    f(x) = [(1 - delta*x)^2 + 1] * f_G(x; mu, sigma) / Z,

where f_G is the Gumbel density with location mu and scale sigma and

    Z = 1 + delta^2 sigma^2 pi^2 / 6 + (delta*mu + delta*sigma*gamma - 1)^2

normalizes the weight (gamma is the Euler-Mascheroni constant).  delta = 0
recovers the plain Gumbel distribution; nonzero delta can split the density
into two modes.

This module provides the parameter types, the normalizer, density / log
density / distribution function, weighted Gumbel distribution functions,
raw moments and moment summaries, and the moment generating function with
its polynomial-weighted generalization E[X^m exp(tX)].
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateWeightError
from .special import (
    CONSTANTS,
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    gamma_deriv,
    incomplete_log_moment,
    log_moment_constant,
    upper_incomplete_gamma,
)

__all__ = [
    "BgParams",
    "GumbelParams",
    "MomentSet",
    "normalizer",
    "gumbel_pdf",
    "gumbel_log_pdf",
    "gumbel_cdf",
    "gumbel_ppf",
    "gumbel_moment",
    "bg_pdf",
    "bg_log_pdf",
    "bg_cdf",
    "weighted_gumbel_cdf",
    "mixture_weights",
    "bg_moment",
    "bg_moment_set",
    "bg_mgf",
    "bg_exp_moment",
]

_EG = CONSTANTS.euler_gamma
_PI = CONSTANTS.pi

# exp(-(x - mu)/sigma) exceeds 700 left of this standardized point; the
# distribution function there is below 1e-300 and is reported as 0.
_LEFT_TAIL_W = -math.log(700.0)


@dataclass(frozen=True)
class GumbelParams:
    """Location/scale pair of a Gumbel distribution."""

    mu: float
    sigma: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "sigma", float(self.sigma))
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)):
            raise ValueError("parameters must be finite")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class BgParams:
    """Parameter triple (mu, sigma, delta) of the bimodal Gumbel distribution."""

    mu: float
    sigma: float
    delta: float

    def __post_init__(self) -> None:
        for name in ("mu", "sigma", "delta"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (
            math.isfinite(self.mu)
            and math.isfinite(self.sigma)
            and math.isfinite(self.delta)
        ):
            raise ValueError("parameters must be finite")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    @property
    def gumbel(self) -> GumbelParams:
        """The underlying Gumbel location/scale pair."""
        return GumbelParams(self.mu, self.sigma)


@dataclass(frozen=True)
class MomentSet:
    """First moments of a BG distribution.

    ``skewness`` and ``kurtosis`` are the standardized third and fourth
    moments (kurtosis is reported plain, not excess).
    """

    mean: float
    second_raw: float
    third_raw: float
    variance: float
    skewness: float
    kurtosis: float


def normalizer(p: BgParams) -> float:
    """Weight-normalizing constant Z = 1 + d^2 s^2 pi^2/6 + (d*mu + d*s*gamma - 1)^2."""
    return (
        1.0
        + p.delta**2 * p.sigma**2 * _PI**2 / 6.0
        + (p.delta * p.mu + p.delta * p.sigma * _EG - 1.0) ** 2
    )


# ----------------------------------------------------------------------
# Plain Gumbel building blocks
# ----------------------------------------------------------------------

def gumbel_log_pdf(p: GumbelParams, x: float | np.ndarray) -> float | np.ndarray:
    w = (np.asarray(x, dtype=float) - p.mu) / p.sigma
    with np.errstate(over="ignore"):
        out = -w - np.exp(-w) - math.log(p.sigma)
    return out if out.ndim else float(out)


def gumbel_pdf(p: GumbelParams, x: float | np.ndarray) -> float | np.ndarray:
    out = np.exp(gumbel_log_pdf(p, x))
    return out if np.ndim(out) else float(out)


def gumbel_cdf(p: GumbelParams, x: float | np.ndarray) -> float | np.ndarray:
    w = (np.asarray(x, dtype=float) - p.mu) / p.sigma
    with np.errstate(over="ignore"):
        out = np.exp(-np.exp(-w))
    return out if out.ndim else float(out)


def gumbel_ppf(p: GumbelParams, q: float | np.ndarray) -> float | np.ndarray:
    q = np.asarray(q, dtype=float)
    if np.any((q <= 0) | (q >= 1)):
        raise ValueError("quantile levels must lie strictly inside (0, 1)")
    out = p.mu - p.sigma * np.log(-np.log(q))
    return out if out.ndim else float(out)


def gumbel_moment(p: GumbelParams, k: int) -> float:
    """Raw moment E[Y^k] of a Gumbel variable, k = 0..6.

    Expands (mu - sigma ln v)^k binomially against the log-moment constants
    I(i; 0, inf).
    """
    if not 0 <= k <= 6:
        raise ValueError(f"gumbel_moment supports k = 0..6, got {k}")
    return float(
        sum(
            math.comb(k, i) * p.mu ** (k - i) * p.sigma**i * log_moment_constant(i)
            for i in range(k + 1)
        )
    )


# ----------------------------------------------------------------------
# Density and distribution function
# ----------------------------------------------------------------------

def bg_log_pdf(p: BgParams, x: float | np.ndarray) -> float | np.ndarray:
    """Log density; finite (no overflow) for |x - mu| / sigma up to 700."""
    xv = np.asarray(x, dtype=float)
    w = (xv - p.mu) / p.sigma
    u = 1.0 - p.delta * xv
    with np.errstate(over="ignore"):
        out = np.log1p(u * u) - w - np.exp(-w) - math.log(p.sigma * normalizer(p))
    return out if out.ndim else float(out)


def bg_pdf(p: BgParams, x: float | np.ndarray) -> float | np.ndarray:
    """Density of the BG distribution; strictly positive for all finite x."""
    out = np.exp(bg_log_pdf(p, x))
    return out if np.ndim(out) else float(out)


def _cdf_scalar(p: BgParams, x: float, spec: QuadratureSpec) -> float:
    w = (x - p.mu) / p.sigma
    if w < _LEFT_TAIL_W:
        # exp(-w) > 700: the true value is below 1e-300.
        return 0.0
    z = math.exp(-w)
    if z == 0.0:
        return 1.0
    ee = math.exp(-z)
    dm = p.delta * p.mu
    t1 = (2.0 - dm * (2.0 - dm)) * ee
    t2 = p.delta**2 * p.sigma**2 * incomplete_log_moment(2, z, math.inf, spec)
    t3 = (
        2.0
        * p.delta
        * (1.0 - dm)
        * ((x - p.mu) * ee - p.sigma * upper_incomplete_gamma(0.0, z))
    )
    val = (t1 + t2 - t3) / normalizer(p)
    return min(max(val, 0.0), 1.0)


def bg_cdf(
    p: BgParams,
    x: float | np.ndarray,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float | np.ndarray:
    """Distribution function of the BG law.

    Evaluated in closed form up to the single quadrature I(2; ., inf); the
    delta = 0 case reduces exactly to the Gumbel distribution function.
    """
    if np.ndim(x) == 0:
        return _cdf_scalar(p, float(x), spec)
    xv = np.asarray(x, dtype=float)
    return np.array([_cdf_scalar(p, float(v), spec) for v in xv.ravel()]).reshape(xv.shape)


def weighted_gumbel_cdf(
    p: GumbelParams,
    k: int,
    x: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Distribution function of the Y^k-weighted Gumbel law, k = 0, 1, 2.

    Returns E[Y^k 1_{Y <= x}] / E[Y^k].  k = 0 is the plain Gumbel
    distribution function.  For k = 1 the weight takes both signs, so the
    returned function is a signed mixture component and may leave [0, 1];
    it is still the exact ingredient of the three-part mixture identity.
    """
    if k not in (0, 1, 2):
        raise ValueError(f"weighted_gumbel_cdf supports k = 0, 1, 2, got {k}")
    den = gumbel_moment(p, k)
    if abs(den) < 1e-12:
        raise DegenerateWeightError(
            f"E[Y^{k}] = {den!r} is numerically zero; the weighted law is undefined"
        )
    w = (x - p.mu) / p.sigma
    if w < _LEFT_TAIL_W:
        return 0.0
    z = math.exp(-w)
    if z == 0.0:
        return 1.0
    ee = math.exp(-z)
    i0 = ee
    # I(1; z, inf) = -exp(-z) ln z - Gamma(0, z), with ln z = -w.
    i1 = ee * w - upper_incomplete_gamma(0.0, z)
    if k == 0:
        num = i0
    elif k == 1:
        num = p.mu * i0 + p.sigma * i1
    else:
        i2 = incomplete_log_moment(2, z, math.inf, spec)
        num = p.mu**2 * i0 + 2.0 * p.mu * p.sigma * i1 + p.sigma**2 * i2
    return num / den


def mixture_weights(p: BgParams) -> tuple[float, float, float]:
    """Probabilities (p1, p2, p3) of the three-part weighted-Gumbel mixture.

    p1 = 2/Z, p2 = -2 delta (mu + sigma gamma) / Z and
    p3 = delta^2 [sigma^2 pi^2/6 + (mu + sigma gamma)^2] / Z sum to one for
    every parameter triple; all three are nonnegative exactly when
    delta * (mu + sigma gamma) < 0.
    """
    z = normalizer(p)
    m = p.mu + p.sigma * _EG
    p1 = 2.0 / z
    p2 = -2.0 * m * p.delta / z
    p3 = (p.sigma**2 * _PI**2 / 6.0 + m * m) * p.delta**2 / z
    return p1, p2, p3


def _quantile(
    p: BgParams,
    q: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Numerical quantile by bracketed root finding on the distribution function.

    Internal helper (used by sampling and test oracles); accuracy follows the
    bracketing tolerance, not a public contract.
    """
    if not 0.0 < q < 1.0:
        raise ValueError("quantile level must lie strictly inside (0, 1)")
    lo, hi = p.mu - p.sigma, p.mu + p.sigma
    step = p.sigma
    while _cdf_scalar(p, lo, spec) > q:
        step *= 2.0
        lo -= step
    step = p.sigma
    while _cdf_scalar(p, hi, spec) < q:
        step *= 2.0
        hi += step
    return float(brentq(lambda t: _cdf_scalar(p, t, spec) - q, lo, hi, xtol=1e-12))


# ----------------------------------------------------------------------
# Moments
# ----------------------------------------------------------------------

def bg_moment(p: BgParams, k: int) -> float:
    """Raw moment E[X^k] for k = 0..4 via the binomial/log-moment expansion.

    E[X^k] * Z = delta^2 s^(k+2) I(k+2) - delta s^(k+1) [2 - delta mu (k+2)] I(k+1)
                 + sum_i s^i mu^(k-i) [2 C(k,i) - 2 delta mu C(k+1,i)
                                       + delta^2 mu^2 C(k+2,i)] I(i),

    where I(i) = I(i; 0, inf) and s = sigma.
    """
    if not 0 <= k <= 4:
        raise ValueError(f"bg_moment supports k = 0..4, got {k}")
    if k == 0:
        return 1.0
    mu, sg, dl = p.mu, p.sigma, p.delta
    lead = dl**2 * sg ** (k + 2) * log_moment_constant(k + 2) - dl * sg ** (k + 1) * (
        2.0 - dl * mu * (k + 2)
    ) * log_moment_constant(k + 1)
    tail = sum(
        sg**i
        * mu ** (k - i)
        * (
            2.0 * math.comb(k, i)
            - 2.0 * dl * mu * math.comb(k + 1, i)
            + dl**2 * mu**2 * math.comb(k + 2, i)
        )
        * log_moment_constant(i)
        for i in range(k + 1)
    )
    return (lead + tail) / normalizer(p)


def _mean_closed(p: BgParams) -> float:
    mu, sg, dl = p.mu, p.sigma, p.delta
    i3 = log_moment_constant(3)
    i2 = log_moment_constant(2)
    num = (
        dl**2 * sg**3 * i3
        - dl * sg**2 * (2.0 - 3.0 * dl * mu) * i2
        + mu * (2.0 - dl * mu * (2.0 - dl * mu))
        + sg * (2.0 - dl * mu * (4.0 - 3.0 * dl * mu)) * _EG
    )
    return num / normalizer(p)


def _second_raw_closed(p: BgParams) -> float:
    mu, sg, dl = p.mu, p.sigma, p.delta
    i4, i3, i2 = log_moment_constant(4), log_moment_constant(3), log_moment_constant(2)
    num = (
        dl**2 * sg**4 * i4
        - 2.0 * dl * sg**3 * (1.0 - 2.0 * dl * mu) * i3
        + mu**2 * (2.0 - dl * mu * (2.0 - dl * mu))
        + 2.0 * sg * mu * (2.0 - dl * mu * (3.0 - 2.0 * dl * mu)) * _EG
        + 2.0 * sg**2 * (1.0 - 3.0 * dl * mu * (1.0 - dl * mu)) * i2
    )
    return num / normalizer(p)


def _third_raw_closed(p: BgParams) -> float:
    mu, sg, dl = p.mu, p.sigma, p.delta
    i5, i4, i3, i2 = (
        log_moment_constant(5),
        log_moment_constant(4),
        log_moment_constant(3),
        log_moment_constant(2),
    )
    num = (
        dl**2 * sg**5 * i5
        - dl * sg**4 * (2.0 - 5.0 * dl * mu) * i4
        + mu**3 * (2.0 - dl * mu * (2.0 - dl * mu))
        + sg * mu**2 * (6.0 - dl * mu * (8.0 - 5.0 * dl * mu)) * _EG
        + 2.0 * sg**2 * mu * (3.0 - dl * mu * (6.0 - 5.0 * dl * mu)) * i2
        + 2.0 * sg**3 * (1.0 - dl * mu * (4.0 - 5.0 * dl * mu)) * i3
    )
    return num / normalizer(p)


def bg_moment_set(p: BgParams) -> MomentSet:
    """Mean, raw second/third moments, variance, skewness and kurtosis.

    The mean and second/third raw moments come from the explicit closed
    forms; skewness and kurtosis standardize the raw moments through the
    binomial expansion E[(X - m)/s]^n = s^-n sum_k C(n,k) (-m)^(n-k) E[X^k],
    with E[X^4] taken from :func:`bg_moment`.
    """
    m1 = _mean_closed(p)
    m2 = _second_raw_closed(p)
    m3 = _third_raw_closed(p)
    m4 = bg_moment(p, 4)
    var = m2 - m1 * m1
    sd = math.sqrt(var)
    moments = (1.0, m1, m2, m3, m4)

    def standardized(n: int) -> float:
        total = sum(
            math.comb(n, j) * (-m1) ** (n - j) * moments[j] for j in range(n + 1)
        )
        return total / sd**n

    return MomentSet(
        mean=m1,
        second_raw=m2,
        third_raw=m3,
        variance=var,
        skewness=standardized(3),
        kurtosis=standardized(4),
    )


# ----------------------------------------------------------------------
# Moment generating function and polynomial-weighted exponential moments
# ----------------------------------------------------------------------

def _exp_moment_raw(p: BgParams, m: int, t: float) -> float:
    """E[X^m exp(tX)] via gamma derivatives; valid whenever 1 - sigma*t > 0."""
    mu, sg, dl = p.mu, p.sigma, p.delta
    a = 1.0 - sg * t
    lead = (-1.0) ** m * math.exp(t * mu) * (
        dl**2 * sg ** (m + 2) * gamma_deriv(m + 2, a)
        + dl * sg ** (m + 1) * (2.0 - dl * mu * (m + 2)) * gamma_deriv(m + 1, a)
    )
    tail = sum(
        (-1.0) ** i
        * sg**i
        * mu ** (m - i)
        * (
            2.0 * math.comb(m, i)
            - 2.0 * dl * mu * math.comb(m + 1, i)
            + dl**2 * mu**2 * math.comb(m + 2, i)
        )
        * gamma_deriv(i, a)
        for i in range(m + 1)
    )
    return (lead + math.exp(t * mu) * tail) / normalizer(p)


def bg_mgf(p: BgParams, t: float) -> float:
    """Moment generating function E[exp(tX)].

    Defined for t < 0; when delta = 0 the Gumbel form exp(mu t) Gamma(1 - sigma t)
    applies on the wider range t < 1/sigma.
    """
    if p.delta == 0.0:
        if t >= 1.0 / p.sigma:
            raise ValueError(f"mgf of the Gumbel case requires t < 1/sigma, got t={t}")
        return math.exp(p.mu * t) * gamma_deriv(0, 1.0 - p.sigma * t)
    if t >= 0.0:
        raise ValueError(f"mgf requires t < 0, got t={t}")
    mu, sg, dl = p.mu, p.sigma, p.delta
    a = 1.0 - sg * t
    gam = gamma_deriv(0, a)
    bracket = (
        2.0
        - 2.0 * mu * dl
        + mu**2 * dl**2
        + 2.0 * sg * dl * (1.0 - mu * dl) * (gamma_deriv(1, a) / gam)
        + sg**2 * dl**2 * gamma_deriv(2, a) / gam
    )
    return math.exp(mu * t) * gam * bracket / normalizer(p)


def bg_exp_moment(p: BgParams, m: int, t: float) -> float:
    """Polynomial-weighted exponential moment E[X^m exp(tX)] for m = 0, 1, 2.

    The stated domain is t < 0 with t <= -m/sigma (the boundary point
    t = -m/sigma is included; the underlying gamma-derivative representation
    converges there).  m = 0 coincides with :func:`bg_mgf`.
    """
    if m not in (0, 1, 2):
        raise ValueError(f"bg_exp_moment supports m = 0, 1, 2, got {m}")
    if t >= 0.0 or t > -m / p.sigma:
        raise ValueError(
            f"bg_exp_moment requires t < 0 and t <= -m/sigma, got m={m}, t={t}"
        )
    return _exp_moment_raw(p, m, t)
