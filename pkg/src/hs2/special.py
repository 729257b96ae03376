"""Special-function kernel: log-Gamma, sphere measure, Lieb's constant and bubble normalization."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

# Lanczos series with g = 671/128 and 14 terms (Numerical Recipes, 3rd ed.);
# full double precision for x > 0.
_LANCZOS_G = 5.24218750000000000
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_COEF = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_SQRT_2PI = 2.5066282746310005


def log_gamma(x: float) -> float:
    """Natural log of the Gamma function for x > 0."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    if x < 0.5:
        # Lanczos loses digits close to the pole; shift with Gamma(x+1) = x Gamma(x).
        return log_gamma(x + 1.0) - math.log(x)
    y = x
    tmp = x + _LANCZOS_G
    tmp = (x + 0.5) * math.log(tmp) - tmp
    ser = _LANCZOS_C0
    for c in _LANCZOS_COEF:
        y += 1.0
        ser += c / y
    return tmp + math.log(_SQRT_2PI * ser / x)


def log_beta(a: float, b: float) -> float:
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def sphere_measure(N: int) -> float:
    """Surface measure of the unit sphere in R^N, 2 pi^(N/2) / Gamma(N/2)."""
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    return math.exp(math.log(2.0) + 0.5 * N * math.log(math.pi) - log_gamma(0.5 * N))


@dataclass(frozen=True)
class DimensionPair:
    N: int
    s: float

    @property
    def a(self) -> float:
        """Auxiliary exponent (N - s)/(2 - s); always > 1."""
        return (self.N - self.s) / (2.0 - self.s)


def _check(N, s) -> DimensionPair:
    if int(N) != N or N < 3:
        raise DomainError(f"N must be an integer >= 3, got {N!r}")
    if not 0.0 < s < 2.0:
        raise DomainError(f"s must lie in (0, 2), got {s}")
    return DimensionPair(int(N), float(s))


def _log_radial_beta(dp: DimensionPair) -> float:
    # log of  (1/(2-s)) * omega_{N-1} * Gamma(a)^2 / Gamma(2a)
    a = dp.a
    return (
        -math.log(2.0 - dp.s)
        + math.log(sphere_measure(dp.N))
        + 2.0 * log_gamma(a)
        - log_gamma(2.0 * a)
    )


def mu_s(N: int, s: float) -> float:
    """Lieb's sharp Hardy-Sobolev constant on R^N."""
    dp = _check(N, s)
    expo = (2.0 - dp.s) / (dp.N - dp.s)
    return (dp.N - 2) * (dp.N - dp.s) * math.exp(expo * _log_radial_beta(dp))


def bubble_norm_k0(N: int, s: float) -> float:
    """Normalization k0 making the weighted L^p norm of U(1,1) equal to one."""
    dp = _check(N, s)
    p = 2.0 * (dp.N - dp.s) / (dp.N - 2)
    return math.exp(-_log_radial_beta(dp) / p)
