"""Radial profiles (bubbles, their tau-derivative, bumps) and the integrals built on them.

All integrals over R^N of radial functions reduce to
``omega_{N-1} * int_0^inf F(r) r^(N-1-sigma) dr`` and go through
:func:`hs2.numerics.weighted_integral`.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .numerics import DEFAULT_TOL, weighted_integral
from .params import HSParams
from .special import bubble_norm_k0, mu_s, sphere_measure

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RadialProfile:
    """A radial function with its analytic first (and optionally second) derivative.

    ``decay`` is the exponent d in u ~ r^-d at infinity (``inf`` for compact support).
    """

    value: ArrayFn
    deriv: ArrayFn
    decay: float
    regular_at_zero: bool = True
    second: ArrayFn | None = None
    breakpoints: tuple = ()
    label: str = ""

    def eval(self, r):
        r = np.asarray(r, dtype=float)
        return self.value(r), self.deriv(r)

    def __call__(self, r):
        return self.value(np.asarray(r, dtype=float))

    def scaled(self, c: float) -> "RadialProfile":
        c = float(c)
        if c == 0.0:
            return zero_profile()
        sec = self.second
        return RadialProfile(
            value=lambda r: c * self.value(r),
            deriv=lambda r: c * self.deriv(r),
            decay=self.decay,
            regular_at_zero=self.regular_at_zero,
            second=None if sec is None else (lambda r: c * sec(r)),
            breakpoints=self.breakpoints,
            label=f"{c:g}*{self.label}",
        )

    def __mul__(self, c):
        return self.scaled(c)

    __rmul__ = __mul__

    def __add__(self, other: "RadialProfile") -> "RadialProfile":
        return combine((1.0, self), (1.0, other))

    def to_csv(self, radii) -> str:
        """Sampled table with columns r, u, du (debugging aid)."""
        r = np.asarray(radii, dtype=float)
        u, du = self.eval(r)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "u", "du"])
        for row in zip(r, u, du):
            w.writerow([f"{x:.17g}" for x in row])
        return buf.getvalue()


def zero_profile() -> RadialProfile:
    z = lambda r: np.zeros_like(np.asarray(r, dtype=float))
    return RadialProfile(z, z, math.inf, True, z, (), "0")


def combine(*terms) -> RadialProfile:
    """Linear combination sum(c_i * u_i) of profiles given as (c_i, u_i) pairs."""
    terms = [(float(c), u) for c, u in terms if float(c) != 0.0]
    if not terms:
        return zero_profile()
    has_second = all(u.second is not None for _, u in terms)
    bps = tuple(sorted({b for _, u in terms for b in u.breakpoints}))
    return RadialProfile(
        value=lambda r: sum(c * u.value(r) for c, u in terms),
        deriv=lambda r: sum(c * u.deriv(r) for c, u in terms),
        decay=min(u.decay for _, u in terms),
        regular_at_zero=all(u.regular_at_zero for _, u in terms),
        second=(lambda r: sum(c * u.second(r) for c, u in terms)) if has_second else None,
        breakpoints=bps,
        label=" + ".join(f"{c:g}*{u.label}" for c, u in terms),
    )


def _yw(z):
    """Return (z/(1+z), 1/(1+z)), stable for z = 0 and z = inf."""
    w = 1.0 / (1.0 + z)
    with np.errstate(invalid="ignore"):
        y = np.where(np.isinf(z), 1.0, z * w)
    return y, w


def _z_profile(N: int, s: float, tau: float, scale: float, kind: str, label: str):
    """Profiles of the form scale * F(z), z = (tau r)^(2-s).

    With D = r d/dr = m z d/dz (m = 2-s):  u' = Du / r,  u'' = (D^2 u - Du) / r^2.
    """
    m = 2.0 - s
    q = (N - 2) / m

    def z_of(r):
        with np.errstate(over="ignore"):
            return (tau * r) ** m

    if kind == "bubble":
        def F(y, w):
            return w ** q

        def zF1(y, w):  # z F'(z)
            return -q * y * w ** q

        def z2F2(y, w):  # z^2 F''(z)
            return q * (q + 1.0) * y * y * w ** q
    else:  # tau-derivative direction: F = (1 - z)(1 + z)^(-q-1)
        def F(y, w):
            return (w - y) * w ** q

        def zF1(y, w):
            return -y * w ** q * ((q + 2.0) * w - q * y)

        def z2F2(y, w):
            return y * y * w ** q * (((q + 2.0) ** 2 + q) * w - q * (q + 1.0) * y)

    def value(r):
        y, w = _yw(z_of(r))
        return scale * F(y, w)

    def deriv(r):
        y, w = _yw(z_of(r))
        return scale * m * zF1(y, w) / r

    def second(r):
        y, w = _yw(z_of(r))
        return scale * ((m * m - m) * zF1(y, w) + m * m * z2F2(y, w)) / (r * r)

    return RadialProfile(value, deriv, float(N - 2), s <= 1.0, second, (), label)


def bubble(params: HSParams, k: float = 1.0, tau: float = 1.0) -> RadialProfile:
    """The extremal U(k, tau) = k k0 (1 + |tau x|^(2-s))^(-(N-2)/(2-s)) tau^((N-2)/2)."""
    if not tau > 0:
        raise DomainError(f"tau must be > 0, got {tau}")
    if k == 0:
        raise DomainError("k must be nonzero")
    N, s = params.N, params.s
    scale = k * bubble_norm_k0(N, s) * tau ** ((N - 2) / 2.0)
    return _z_profile(N, s, tau, scale, "bubble", f"U({k:g},{tau:g})")


def bubble_dtau(params: HSParams, tau: float = 1.0) -> RadialProfile:
    """d/dtau of U(1, tau): the second-eigenvalue direction of the linearized problem."""
    if not tau > 0:
        raise DomainError(f"tau must be > 0, got {tau}")
    N, s = params.N, params.s
    scale = bubble_norm_k0(N, s) * 0.5 * (N - 2) * tau ** ((N - 4) / 2.0)
    return _z_profile(N, s, tau, scale, "dtau", f"dU/dtau({tau:g})")


def bump(lo: float = 0.5, hi: float = 2.0, height: float = 1.0) -> RadialProfile:
    """C^1 polynomial bump ((r-lo)(hi-r))^2 supported on [lo, hi], peak ``height``."""
    if not 0 < lo < hi:
        raise DomainError("bump support must satisfy 0 < lo < hi")
    peak = (0.5 * (hi - lo)) ** 4
    c = height / peak

    def inside(r):
        return (r > lo) & (r < hi)

    def value(r):
        P = (r - lo) * (hi - r)
        return np.where(inside(r), c * P * P, 0.0)

    def deriv(r):
        P = (r - lo) * (hi - r)
        dP = (hi + lo) - 2.0 * r
        return np.where(inside(r), 2.0 * c * P * dP, 0.0)

    def second(r):
        P = (r - lo) * (hi - r)
        dP = (hi + lo) - 2.0 * r
        return np.where(inside(r), 2.0 * c * (dP * dP - 2.0 * P), 0.0)

    return RadialProfile(value, deriv, math.inf, True, second, (lo, hi), f"bump[{lo:g},{hi:g}]")


def radial_integral(F, N: int, sigma: float = 0.0, tol: float = DEFAULT_TOL,
                    breakpoints=()) -> float:
    """Integral over R^N of F(|x|) |x|^-sigma."""
    res = weighted_integral(F, N - 1 - sigma, tol, breakpoints=breakpoints)
    return sphere_measure(N) * res.value


def dirichlet_energy(u: RadialProfile, N: int, weight_shift: float = 0.0,
                     tol: float = DEFAULT_TOL) -> float:
    """Integral of |x|^-weight_shift |grad u|^2 over R^N."""
    return radial_integral(lambda r: u.deriv(r) ** 2, N, weight_shift, tol, u.breakpoints)


def gradient_inner(u: RadialProfile, v: RadialProfile, N: int, weight_shift: float = 0.0,
                   tol: float = DEFAULT_TOL) -> float:
    """Integral of |x|^-weight_shift grad u . grad v over R^N."""
    bps = tuple(sorted(set(u.breakpoints) | set(v.breakpoints)))
    return radial_integral(lambda r: u.deriv(r) * v.deriv(r), N, weight_shift, tol, bps)


def weighted_power(u: RadialProfile, params: HSParams, sigma: float | None = None,
                   tol: float = DEFAULT_TOL) -> float:
    """Integral of |x|^-sigma |u|^p (sigma defaults to s)."""
    sigma = params.s if sigma is None else sigma
    p = params.p
    return radial_integral(lambda r: np.abs(u.value(r)) ** p, params.N, sigma, tol,
                           u.breakpoints)


def s_norm(u: RadialProfile, params: HSParams, tol: float = DEFAULT_TOL) -> float:
    """(integral of |x|^-s |u|^p)^(1/p)."""
    return weighted_power(u, params, tol=tol) ** (1.0 / params.p)


def mixed_term(u: RadialProfile, v: RadialProfile, params: HSParams,
               sigma: float | None = None, tol: float = DEFAULT_TOL) -> float:
    """Integral of |x|^-sigma |u|^alpha |v|^beta (sigma defaults to s)."""
    sigma = params.s if sigma is None else sigma
    a, b = params.alpha, params.beta
    bps = tuple(sorted(set(u.breakpoints) | set(v.breakpoints)))
    return radial_integral(
        lambda r: np.abs(u.value(r)) ** a * np.abs(v.value(r)) ** b,
        params.N, sigma, tol, bps)


class Eigen(enum.Enum):
    FIRST = 1
    SECOND = 2


def eigenvalue(params: HSParams, eigen: Eigen) -> float:
    m = mu_s(params.N, params.s)
    return m if eigen is Eigen.FIRST else (params.p - 1.0) * m


def pde_residual(w: RadialProfile, params: HSParams, eigen: Eigen, radii,
                 lam: float | None = None) -> float:
    """Max relative residual of -u'' - (N-1)u'/r = Lambda r^-s U(1,1)^(p-2) u over ``radii``.

    ``lam`` overrides the eigenvalue implied by ``eigen``.
    """
    r = np.asarray(radii, dtype=float)
    if np.any(r <= 0):
        raise DomainError("radii must be positive")
    if w.second is None:
        raise DomainError("profile has no analytic second derivative")
    Lam = eigenvalue(params, eigen) if lam is None else lam
    V = bubble(params).value(r)
    lhs = -w.second(r) - (params.N - 1) * w.deriv(r) / r
    rhs = Lam * r ** (-params.s) * V ** (params.p - 2.0) * w.value(r)
    scale = np.abs(lhs) + np.abs(rhs)
    return float(np.max(np.abs(lhs - rhs) / scale))
