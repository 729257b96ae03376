"""Adaptive Gauss-Kronrod quadrature on half-lines and golden-section search."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, NonIntegrable, OptimizationFailure

# 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525225300,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[1:10:2] = _WG
GAUSS_WEIGHTS[11:20:2] = _WG[::-1]

_EPS = np.finfo(float).eps
DEFAULT_TOL = 1e-10
PANEL_BUDGET = 10_000


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    panels_used: int

    def __float__(self) -> float:
        return self.value


def _gk21(f, a, b):
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = center[:, None] + half[:, None] * NODES[None, :]
    with np.errstate(all="ignore"):
        fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise ConvergenceFailure(f"integrand is not finite at x={bad!r}")
    kron = half * (fx @ KRONROD_WEIGHTS)
    gauss = half * (fx @ GAUSS_WEIGHTS)
    absint = np.abs(half) * (np.abs(fx) @ KRONROD_WEIGHTS)
    # QUADPACK heuristic: inflates the estimate on panels where K and G disagree
    # relative to the integrand's variation (non-smooth panels), shrinks it otherwise.
    mean = (fx @ KRONROD_WEIGHTS)[:, None] * 0.5
    resasc = np.abs(half) * (np.abs(fx - mean) @ KRONROD_WEIGHTS)
    raw = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * raw / resasc) ** 1.5)
    err = np.where((resasc > 0) & (raw > 0), scaled, raw)
    err = np.maximum(err, 50.0 * _EPS * absint)
    return kron, err, absint


def integrate(f, a: float, b: float, tol: float = DEFAULT_TOL, *, breakpoints=(),
              max_panels: int = PANEL_BUDGET) -> QuadratureResult:
    """Globally adaptive Gauss-Kronrod (G10/K21) on a finite interval.

    ``f`` must be vectorized over numpy arrays. Every panel whose error exceeds the
    average share of the tolerance is bisected until the summed error estimate
    drops below ``tol`` (or the round-off floor of the integrand).
    """
    edges = sorted({float(a), float(b), *(float(c) for c in breakpoints if a < c < b)})
    lo = np.array(edges[:-1])
    hi = np.array(edges[1:])
    val, err, absint = _gk21(f, lo, hi)
    while True:
        n = lo.size
        floor = 50.0 * _EPS * absint.sum()
        target = max(tol, floor)
        total = err.sum()
        if total <= target:
            break
        width_ok = (hi - lo) > 1e-14 * np.maximum(np.abs(lo), np.abs(hi)) + 1e-300
        splittable = (err > 50.0 * _EPS * absint * 1.0000001) & width_ok
        pick = (err > target / n) & splittable
        if not pick.any():
            if np.any(~width_ok & (err > target / n)):
                raise ConvergenceFailure(
                    f"tolerance {tol:g} not met: panels collapsed (error {total:.3g})")
            # round-off limited: nothing left that bisection can improve
            break
        if n + int(pick.sum()) > max_panels:
            raise ConvergenceFailure(
                f"tolerance {tol:g} not met within {max_panels} panels (error {total:.3g})"
            )
        mid = 0.5 * (lo[pick] + hi[pick])
        new_lo = np.concatenate([lo[pick], mid])
        new_hi = np.concatenate([mid, hi[pick]])
        nv, ne, na = _gk21(f, new_lo, new_hi)
        keep = ~pick
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        absint = np.concatenate([absint[keep], na])
    return QuadratureResult(float(math.fsum(val)), float(err.sum()), int(lo.size))


def weighted_integral(f, weight_exponent: float, tol: float = DEFAULT_TOL, *,
                      exponent_at_zero: float | None = None,
                      decay_at_infinity: float | None = None,
                      breakpoints=(), max_panels: int = PANEL_BUDGET) -> QuadratureResult:
    """Compute the half-line integral of f(r) r**weight_exponent over (0, inf).

    The range is split at r = 1; the tail (1, inf) is mapped onto (0, 1) by r -> 1/r.
    ``exponent_at_zero`` (f ~ r**e near 0) and ``decay_at_infinity`` (f ~ r**-d)
    are optional declarations checked for integrability before any work is done.
    """
    w = float(weight_exponent)
    if exponent_at_zero is not None and not exponent_at_zero + w > -1.0:
        raise NonIntegrable(
            f"integrand ~ r^{exponent_at_zero + w:g} at 0 is not integrable")
    if decay_at_infinity is not None and not w - decay_at_infinity < -1.0:
        raise NonIntegrable(
            f"integrand ~ r^{w - decay_at_infinity:g} at infinity is not integrable")

    inner_bp = [c for c in breakpoints if 0.0 < c < 1.0]
    outer_bp = [1.0 / c for c in breakpoints if c > 1.0 and math.isfinite(c)]

    def inner(r):
        return f(r) * r ** w

    def outer(x):
        r = 1.0 / x
        return f(r) * r ** (w + 2.0)

    budget = max_panels // 2
    left = integrate(inner, 0.0, 1.0, 0.5 * tol, breakpoints=inner_bp, max_panels=budget)
    right = integrate(outer, 0.0, 1.0, 0.5 * tol, breakpoints=outer_bp, max_panels=budget)
    return QuadratureResult(
        left.value + right.value,
        left.abs_error_estimate + right.abs_error_estimate,
        left.panels_used + right.panels_used,
    )


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f, a: float, b: float, tol: float = 1e-10, max_iter: int = 500):
    """Minimize a unimodal f on [a, b]; returns (x, f(x))."""
    a, b = min(a, b), max(a, b)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def scan_then_golden(f, lo: float, hi: float, n_scan: int = 25, tol: float = 1e-10):
    """Coarse scan of f on [lo, hi] followed by golden-section refinement.

    Raises :class:`OptimizationFailure` when the best scan point is a bracket end.
    """
    xs = np.linspace(lo, hi, n_scan)
    fs = np.array([f(x) for x in xs])
    i = int(np.argmin(fs))
    if i == 0 or i == n_scan - 1:
        raise OptimizationFailure(
            f"minimum found at the bracket boundary x={xs[i]:g} of [{lo:g}, {hi:g}]")
    return golden_section(f, xs[i - 1], xs[i + 1], tol)
