"""The radial change of variables u~(r) = ell^(1/2) u(r^(1/ell)) and the weighted inequality it yields.

For radial u the transform carries the weighted Dirichlet energy
int |x|^(-(N-2)(1-ell)) |grad u|^2 onto the plain energy of u~, and the weighted norm
int |x|^(-(N-s)(1-ell)-s) |u|^p onto ell^(-p/2-1) int |x|^-s |u~|^p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coupling import best_constant
from .deficit import DeficitReport, deficit_pair
from .errors import DomainError
from .numerics import DEFAULT_TOL
from .params import HSParams
from .radial import (RadialProfile, _yw, dirichlet_energy, mixed_term, weighted_power,
                     zero_profile)
from .special import bubble_norm_k0

SLACK = 1e-7


def _check_ell(ell: float) -> float:
    ell = float(ell)
    if not 0.0 < ell <= 1.0:
        raise DomainError(f"ell must lie in (0, 1], got {ell}")
    return ell


def ell_transform(u: RadialProfile, ell: float) -> RadialProfile:
    """u~(r) = ell^(1/2) u(r^(1/ell)), with the chain-rule derivative."""
    ell = _check_ell(ell)
    if ell == 1.0:
        return u
    c = math.sqrt(ell)
    inv = 1.0 / ell

    def value(r):
        return c * u.value(r ** inv)

    def deriv(r):
        return c * inv * r ** (inv - 1.0) * u.deriv(r ** inv)

    return RadialProfile(value, deriv, u.decay * inv, u.regular_at_zero, None,
                         tuple(b ** ell for b in u.breakpoints), f"T{ell:g}[{u.label}]")


def ell_weights(params: HSParams, ell: float) -> tuple:
    """(energy weight, norm weight) exponents sigma in |x|^-sigma."""
    N, s = params.N, params.s
    return (N - 2) * (1.0 - ell), (N - s) * (1.0 - ell) + s


def ell_family_member(params: HSParams, ell: float, c: float = 1.0,
                      lam: float = 1.0) -> RadialProfile:
    """c (1 + (lam r)^((2-s) ell))^(-(N-2)/(2-s)) lam^((N-2) ell/2), an extremal of the weighted inequality."""
    ell = _check_ell(ell)
    if not lam > 0:
        raise DomainError("lam must be > 0")
    N, s = params.N, params.s
    m = (2.0 - s) * ell
    q = (N - 2) / (2.0 - s)
    scale = c * lam ** ((N - 2) * ell / 2.0)

    def z_of(r):
        with np.errstate(over="ignore"):
            return (lam * r) ** m

    def value(r):
        _, w = _yw(z_of(r))
        return scale * w ** q

    def deriv(r):
        y, w = _yw(z_of(r))
        return -scale * q * m * y * w ** q / r

    return RadialProfile(value, deriv, float(N - 2) * ell, True, None, (),
                         f"M{ell:g}({c:g},{lam:g})")


def ell_family_image(params: HSParams, ell: float, c: float = 1.0, lam: float = 1.0):
    """(k, tau) with ell_transform(ell_family_member(c, lam)) = U(k, tau)."""
    return math.sqrt(ell) * c / bubble_norm_k0(params.N, params.s), lam ** ell


@dataclass(frozen=True)
class CorollaryReport:
    ell: float
    weighted: DeficitReport  # delta_ell(u, v) from weighted integrals of (u, v)
    transformed: DeficitReport  # delta(u~, v~) from plain integrals of the images

    @property
    def delta_ell(self) -> float:
        return self.weighted.deficit

    @property
    def delta_transformed(self) -> float:
        return self.transformed.deficit

    @property
    def gap(self) -> float:
        return self.delta_ell - self.delta_transformed

    @property
    def comparison_holds(self) -> bool:
        return self.delta_transformed <= self.delta_ell + SLACK

    @property
    def nonnegative(self) -> bool:
        return self.delta_ell >= -SLACK

    def as_dict(self) -> dict:
        return {"ell": self.ell, "delta_ell": self.delta_ell,
                "delta_transformed": self.delta_transformed, "gap": self.gap,
                "comparison_holds": self.comparison_holds, "nonnegative": self.nonnegative,
                "weighted": self.weighted.as_dict(), "transformed": self.transformed.as_dict()}


def ell_deficit(u: RadialProfile, v: RadialProfile | None, ell: float, params: HSParams,
                S: float | None = None, tol: float = DEFAULT_TOL) -> DeficitReport:
    """delta_ell(u, v): weighted energies minus S ell^(2/p+1) (weighted combination)^(2/p)."""
    P = params
    ell = _check_ell(ell)
    v = zero_profile() if v is None else v
    S = best_constant(P) if S is None else S
    se, sn = ell_weights(P, ell)
    Eu = dirichlet_energy(u, P.N, se, tol)
    Ev = dirichlet_energy(v, P.N, se, tol)
    terms = (P.lam * weighted_power(u, P, sn, tol),
             P.mu * weighted_power(v, P, sn, tol),
             P.kappa * P.p * mixed_term(u, v, P, sn, tol))
    combo = math.fsum(terms)
    deficit = Eu + Ev - S * ell ** (2.0 / P.p + 1.0) * combo ** (2.0 / P.p)
    return DeficitReport(Eu, Ev, terms, S, deficit)


def corollary_check(u: RadialProfile, v: RadialProfile | None, ell: float, params: HSParams,
                    tol: float = DEFAULT_TOL) -> CorollaryReport:
    """Compare delta_ell(u, v) with delta(u~, v~) for radial u, v."""
    ell = _check_ell(ell)
    S = best_constant(params)
    v = zero_profile() if v is None else v
    weighted = ell_deficit(u, v, ell, params, S, tol)
    transformed = deficit_pair(ell_transform(u, ell), ell_transform(v, ell), params, S, tol)
    return CorollaryReport(ell, weighted, transformed)
