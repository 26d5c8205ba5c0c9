"""Scalar special functions and quadrature shared by every other module.

The central object is the incomplete log-moment integral

    I(k; a, b) = (-1)^k * integral_a^b ln(v)^k exp(-v) dv,   0 <= a < b <= inf,

which appears in the distribution function, the weighted distribution
functions and every raw moment of the quadratically weighted Gumbel model.
Substituting v = exp(-s) turns it into a smooth moment integral of the
standard Gumbel density,

    I(k; a, b) = integral_{-ln b}^{-ln a} s^k exp(-s - exp(-s)) ds,

which removes the logarithmic endpoint singularity at v = 0 and maps the
exponential tail onto a doubly-exponential one.  All quadrature in this
module runs on that transformed domain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special as sc
from scipy.integrate import quad

from .errors import DivergentIntegralError, QuadratureError

__all__ = [
    "Constants",
    "CONSTANTS",
    "QuadratureSpec",
    "DEFAULT_QUADRATURE",
    "upper_incomplete_gamma",
    "incomplete_log_moment",
    "log_moment_constant",
    "digamma",
    "trigamma",
    "gamma_deriv",
]


@dataclass(frozen=True)
class Constants:
    """Mathematical constants used in closed-form moment expressions."""

    euler_gamma: float = 0.5772156649015328606
    pi: float = math.pi
    zeta3: float = 1.2020569031595942854
    zeta5: float = 1.0369277551433699263


CONSTANTS = Constants()

_EG = CONSTANTS.euler_gamma
_PI = CONSTANTS.pi
_Z3 = CONSTANTS.zeta3
_Z5 = CONSTANTS.zeta5

# I(k; 0, inf) for k = 0..6, assembled from gamma / pi / zeta constants.
_LOG_MOMENT_CONSTANTS = (
    1.0,
    _EG,
    _EG**2 + _PI**2 / 6.0,
    2.0 * _Z3 + _EG**3 + _EG * _PI**2 / 2.0,
    8.0 * _EG * _Z3 + _EG**4 + _EG**2 * _PI**2 + 3.0 * _PI**4 / 20.0,
    20.0 * _EG**2 * _Z3
    + 10.0 * _PI**2 * _Z3 / 3.0
    + 24.0 * _Z5
    + _EG**5
    + 5.0 * _EG**3 * _PI**2 / 3.0
    + 3.0 * _EG * _PI**4 / 4.0,
    20.0 * _EG * (2.0 * _EG**2 + _PI**2) * _Z3
    + 40.0 * _Z3**2
    + 144.0 * _EG * _Z5
    + _EG**6
    + 5.0 * _EG**4 * _PI**2 / 2.0
    + 9.0 * _EG**2 * _PI**4 / 4.0
    + 61.0 * _PI**6 / 168.0,
)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and subdivision budget for adaptive quadrature."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("abs_tol and rel_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_QUADRATURE = QuadratureSpec()

# Below s = -38 the transformed integrand exp(-s - exp(-s)) underflows to 0;
# above s = 60 + 12k the factor s^k exp(-s) is < 1e-40.
_S_FLOOR = -38.0


def upper_incomplete_gamma(a: float, x: float) -> float:
    """Upper incomplete gamma function Gamma(a, x) = int_x^inf t^(a-1) e^-t dt.

    Supports a = 0, where Gamma(0, x) equals the exponential integral E1(x),
    and nonnegative a in general.  Gamma(0, 0) diverges.
    """
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if a == 0.0:
        if x == 0.0:
            raise DivergentIntegralError("Gamma(0, 0) diverges")
        return float(sc.exp1(x))
    if a < 0:
        raise ValueError(f"a must be >= 0, got {a}")
    # Regularized complement times Gamma(a); exact for the integer orders
    # this package needs and accurate for any a > 0.
    return float(sc.gammaincc(a, x) * sc.gamma(a))


def _transformed_bounds(k: int, a: float, b: float) -> tuple[float, float]:
    """Map (a, b) in v-space to clipped integration bounds in s-space."""
    s_hi = -math.log(a) if a > 0.0 else math.inf
    s_lo = -math.log(b) if math.isfinite(b) else -math.inf
    s_lo = max(s_lo, _S_FLOOR)
    s_hi = min(s_hi, 60.0 + 12.0 * k)
    return s_lo, s_hi


def incomplete_log_moment(
    k: int,
    a: float,
    b: float = math.inf,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Incomplete log-moment integral I(k; a, b) = (-1)^k int_a^b ln(v)^k e^-v dv.

    Closed forms are used for k = 0 and k = 1:

        I(0; a, inf) = exp(-a)
        I(1; a, inf) = -exp(-a) ln(a) - Gamma(0, a),  with I(1; 0, inf) = euler_gamma

    and finite upper limits are handled as differences of the upper forms.
    Orders k >= 2 fall back to adaptive quadrature on the Gumbel-transformed
    domain (see module docstring), controlled by ``spec``.
    """
    if k < 0 or int(k) != k:
        raise ValueError(f"k must be a nonnegative integer, got {k}")
    if a < 0 or not a < b:
        raise ValueError(f"require 0 <= a < b, got a={a}, b={b}")
    k = int(k)

    if k == 0:
        upper = 0.0 if not math.isfinite(b) else math.exp(-b)
        return math.exp(-a) - upper
    if k == 1:
        return _log_moment_order1(a) - (_log_moment_order1(b) if math.isfinite(b) else 0.0)

    s_lo, s_hi = _transformed_bounds(k, a, b)
    if s_lo >= s_hi:
        return 0.0

    def integrand(s: float) -> float:
        return s**k * math.exp(-s - math.exp(-s))

    # Interior break points help the subdivision find the bulk quickly
    # (quad needs the subdivision budget to exceed the break-point count).
    pts = [p for p in (0.0, 1.0, float(k), float(3 * k + 5)) if s_lo < p < s_hi]
    if len(pts) >= spec.max_subdivisions:
        pts = []
    result = quad(
        integrand,
        s_lo,
        s_hi,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        points=pts or None,
        full_output=1,
    )
    value, abserr = result[0], result[1]
    tol = max(spec.abs_tol, spec.rel_tol * abs(value))
    if len(result) > 3 or abserr > 100.0 * tol:
        raise QuadratureError(
            f"I({k}; {a}, {b}) did not converge to tolerance", value, abserr
        )
    return float(value)


def _log_moment_order1(a: float) -> float:
    """I(1; a, inf), with the a -> 0 limit handled without evaluating ln(0)."""
    if a == 0.0:
        return _EG
    return -math.exp(-a) * math.log(a) - upper_incomplete_gamma(0.0, a)


def log_moment_constant(k: int) -> float:
    """Closed-form value of I(k; 0, inf) for k = 0..6."""
    if not 0 <= k <= 6:
        raise ValueError(f"closed-form log-moment constants cover k = 0..6, got {k}")
    return _LOG_MOMENT_CONSTANTS[k]


def digamma(x: float) -> float:
    """Digamma function psi(x) = Gamma'(x) / Gamma(x) for x > 0."""
    if x <= 0:
        raise ValueError(f"digamma requires x > 0, got {x}")
    return float(sc.digamma(x))


def trigamma(x: float) -> float:
    """Trigamma function psi'(x) for x > 0."""
    if x <= 0:
        raise ValueError(f"trigamma requires x > 0, got {x}")
    return float(sc.polygamma(1, x))


def gamma_deriv(i: int, x: float) -> float:
    """i-th derivative of the gamma function at x > 0, for i = 0..4.

    Uses the polygamma representation
        Gamma'   = Gamma * psi
        Gamma''  = Gamma * (psi^2 + psi')
        Gamma''' = Gamma * (psi^3 + 3 psi psi' + psi'')
        Gamma'''' = Gamma * (psi^4 + 6 psi^2 psi' + 3 psi'^2 + 4 psi psi'' + psi''')
    """
    if x <= 0:
        raise ValueError(f"gamma_deriv requires x > 0, got {x}")
    if not 0 <= i <= 4:
        raise ValueError(f"gamma derivatives implemented for order 0..4, got {i}")
    gam = float(sc.gamma(x))
    if i == 0:
        return gam
    psi = float(sc.digamma(x))
    if i == 1:
        return gam * psi
    p1 = float(sc.polygamma(1, x))
    if i == 2:
        return gam * (psi**2 + p1)
    p2 = float(sc.polygamma(2, x))
    if i == 3:
        return gam * (psi**3 + 3.0 * psi * p1 + p2)
    p3 = float(sc.polygamma(3, x))
    return gam * (psi**4 + 6.0 * psi**2 * p1 + 3.0 * p1**2 + 4.0 * psi * p2 + p3)
