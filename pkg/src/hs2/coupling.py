"""The scalar coupling function g(t), its minimizers, and the stability case table.

    g(t) = (1 + t^2) / (lambda + mu t^p + kappa p t^beta)^(2/p)

Derivatives use the factorization g' = h r with
h(t) = 2t / D(t)^(2/p+1) and r(t) = lambda - mu t^(p-2) + kappa alpha t^beta - kappa beta t^(beta-2).
Values at t = 0 come from the small-t power series of g, which reproduces the
one-sided limits (including the signed infinities) for every parameter regime.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from math import comb, factorial

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, InconsistentClassification, NumericalWarning, SpecialCase
from .params import HSParams
from .special import mu_s

INFINITY = math.inf

DEGENERACY_TOL = 1e-8
MINIMUM_TOL = 1e-10
TABLE_TOL = 1e-10
ROOT_RESIDUAL_TOL = 1e-12


def _falling(a: float, k: int) -> float:
    out = 1.0
    for j in range(k):
        out *= a - j
    return out


def _power_sum(terms, t, k: int):
    """k-th derivative of sum(c * t**e) for t > 0."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    for c, e in terms:
        f = _falling(e, k)
        if c == 0.0 or f == 0.0:
            continue
        out = out + c * f * t ** (e - k)
    return out


def _D_terms(P: HSParams):
    return [(P.lam, 0.0), (P.mu, P.p), (P.kappa * P.p, P.beta)]


def _r_terms(P: HSParams):
    return [(P.lam, 0.0), (-P.mu, P.p - 2.0), (P.kappa * P.alpha, P.beta),
            (-P.kappa * P.beta, P.beta - 2.0)]


def stationarity_residual(P: HSParams, t, order: int = 0):
    """r(t) (or its derivative); positive interior zeros are the critical points of g."""
    return _power_sum(_r_terms(P), t, order)


def _h_derivs(P: HSParams, t):
    """h, h', h'', h''' at t > 0."""
    c = 2.0 / P.p + 1.0
    D0, D1, D2, D3 = (_power_sum(_D_terms(P), t, k) for k in range(4))
    E0 = D0 ** (-c)
    E1 = -c * D0 ** (-c - 1.0) * D1
    E2 = c * (c + 1.0) * D0 ** (-c - 2.0) * D1 ** 2 - c * D0 ** (-c - 1.0) * D2
    E3 = (-c * (c + 1.0) * (c + 2.0) * D0 ** (-c - 3.0) * D1 ** 3
          + 3.0 * c * (c + 1.0) * D0 ** (-c - 2.0) * D1 * D2
          - c * D0 ** (-c - 1.0) * D3)
    return (2.0 * t * E0,
            2.0 * E0 + 2.0 * t * E1,
            4.0 * E1 + 2.0 * t * E2,
            6.0 * E2 + 2.0 * t * E3)


def h_factor(P: HSParams, t):
    return _h_derivs(P, np.asarray(t, dtype=float))[0]


def _g_positive(P: HSParams, t, order: int):
    t = np.asarray(t, dtype=float)
    if order == 0:
        D = _power_sum(_D_terms(P), t, 0)
        return (1.0 + t * t) / D ** (2.0 / P.p)
    h = _h_derivs(P, t)
    r = [stationarity_residual(P, t, k) for k in range(order)]
    n = order - 1
    return sum(comb(n, j) * h[j] * r[n - j] for j in range(n + 1))


def series_at_zero(P: HSParams, max_exponent: float = 4.0):
    """Small-t expansion of g as a merged list of (coefficient, exponent), exponents <= max_exponent."""
    A, B = P.mu / P.lam, P.kappa * P.p / P.lam
    nu = -2.0 / P.p
    raw = []
    # (1 + x)^nu with x = A t^p + B t^beta; x^n has exponent >= n*beta > n
    n_max = int(math.floor(max_exponent / min(P.beta, P.p))) + 1
    for n in range(n_max + 1):
        binom = _falling(nu, n) / factorial(n)
        for j in range(n + 1):
            coef = binom * comb(n, j) * A ** j * B ** (n - j)
            e = P.p * j + P.beta * (n - j)
            raw.append((coef, e))
            raw.append((coef, e + 2.0))  # factor (1 + t^2)
    raw = [(c * P.lam ** nu, e) for c, e in raw if e <= max_exponent + 1e-9]
    raw.sort(key=lambda ce: ce[1])
    merged: list[list[float]] = []
    for c, e in raw:
        if merged and abs(merged[-1][1] - e) <= 1e-12:
            merged[-1][0] += c
        else:
            merged.append([c, e])
    scale = max(abs(c) for c, _ in merged)
    return [(c, e) for c, e in merged if abs(c) > 1e-14 * scale]


def _limit_at_zero(P: HSParams, order: int) -> float:
    terms = series_at_zero(P, max(4.0, float(order)))
    divergent = []
    finite = 0.0
    for c, e in terms:
        near_int = abs(e - round(e)) <= 1e-12
        if near_int and round(e) == order:
            finite += c * factorial(order)
        elif e < order and not near_int:
            divergent.append((e, c * _falling(e, order)))
    if divergent:
        _, lead = min(divergent)
        return math.copysign(math.inf, lead)
    return finite


def g_eval(params: HSParams, t: float, order: int = 0, reflected: bool = False) -> float:
    """g(t) or its derivative of order 1..4; ``reflected`` evaluates g~(t) = g(1/t) instead.

    At t = 0 one-sided limits are returned, +-inf where the derivative diverges.
    ``t = inf`` is accepted for order 0 only.
    """
    if order not in (0, 1, 2, 3, 4):
        raise DomainError(f"order must be in 0..4, got {order}")
    P = params.swapped() if reflected else params
    t = float(t)
    if t < 0 or math.isnan(t):
        raise DomainError(f"t must be >= 0, got {t}")
    if math.isinf(t):
        if order != 0:
            raise DomainError("derivatives at infinity: evaluate the reflected function at 0")
        return P.mu ** (-2.0 / P.p)
    if t == 0.0:
        if order == 0:
            return P.lam ** (-2.0 / P.p)
        return _limit_at_zero(P, order)
    return float(_g_positive(P, t, order))


def g_reflected(params: HSParams, t: float, order: int = 0) -> float:
    """g~(t) = g(1/t) = (1 + t^2)/(mu + lambda t^p + kappa p t^alpha)^(2/p) and derivatives."""
    return g_eval(params, t, order, reflected=True)


def g_values(params: HSParams, t) -> np.ndarray:
    """Vectorized g on an array of t in [0, inf]."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    pos = (t > 0) & np.isfinite(t)
    out[pos] = _g_positive(params, t[pos], 0)
    out[t == 0] = params.lam ** (-2.0 / params.p)
    out[np.isinf(t)] = params.mu ** (-2.0 / params.p)
    return out


def g_increment(params: HSParams, t0: float, t1: float) -> float:
    """g(t1) - g(t0) for finite t0, t1, integrated from g' = h r when the gap is small.

    Integrating the factored derivative avoids the cancellation of subtracting two
    nearly equal values of g, which matters when the increment is O((t1-t0)^4).
    """
    if abs(t1 - t0) > 0.5:
        return g_eval(params, t1) - g_eval(params, t0)
    x, w = np.polynomial.legendre.leggauss(30)
    mid, half = 0.5 * (t0 + t1), 0.5 * (t1 - t0)
    t = mid + half * x
    dg = h_factor(params, t) * stationarity_residual(params, t)
    return float(half * (w @ dg))


def is_constant_case(P: HSParams) -> bool:
    """(alpha, beta, lambda, mu) = (2, 2, 2 kappa, 2 kappa): g is identically (2 kappa)^(-2/p)."""
    tol = 1e-12
    return (P.kappa > 0 and abs(P.alpha - 2) <= tol and abs(P.beta - 2) <= tol
            and abs(P.lam - 2 * P.kappa) <= tol and abs(P.mu - 2 * P.kappa) <= tol)


@dataclass(frozen=True)
class MinimizerPoint:
    t: float
    g_value: float
    degenerate: bool
    second_derivative: float  # g''(t), or g~''(0) when t = inf
    residual: float  # |r(t)| for interior points, 0 at the endpoints

    @property
    def is_interior(self) -> bool:
        return 0.0 < self.t < math.inf


@dataclass(frozen=True)
class MinimizerSet:
    points: tuple

    @property
    def g_inf(self) -> float:
        return min(pt.g_value for pt in self.points)

    @property
    def ts(self) -> list:
        return [pt.t for pt in self.points]

    @property
    def degenerate(self) -> list:
        return [pt for pt in self.points if pt.degenerate]

    def contains(self, t: float, tol: float = 1e-8) -> bool:
        for pt in self.points:
            if math.isinf(t) or math.isinf(pt.t):
                if math.isinf(t) and math.isinf(pt.t):
                    return True
            elif abs(pt.t - t) <= tol * max(1.0, abs(t)):
                return True
        return False

    def reflected(self) -> "MinimizerSet":
        def inv(t):
            return math.inf if t == 0 else (0.0 if math.isinf(t) else 1.0 / t)
        return MinimizerSet(tuple(sorted(
            (MinimizerPoint(inv(p.t), p.g_value, p.degenerate, p.second_derivative, p.residual)
             for p in self.points), key=lambda q: q.t)))


def _roots_of_r(P: HSParams, lo: float, hi: float, per_decade: int):
    decades = math.log10(hi) - math.log10(lo)
    n = int(round(decades * per_decade)) + 1
    grid = np.logspace(math.log10(lo), math.log10(hi), n)
    vals = stationarity_residual(P, grid)
    f = lambda x: float(stationarity_residual(P, x))
    roots = [float(x) for x in grid[vals == 0.0]]
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    for i in idx:
        roots.append(_polish(P, brentq(f, grid[i], grid[i + 1], xtol=1e-300,
                                       rtol=4 * np.finfo(float).eps, maxiter=500)))
    return sorted(roots)


def _polish(P: HSParams, t: float) -> float:
    """Sharpen a root of odd multiplicity >= 3, where bisection on r stalls near eps^(1/3).

    Near such a root r' nearly vanishes and r'' changes sign, so its zero is a far better
    estimate of the root than the bisection result.
    """
    scale = max(abs(c) * t ** e for c, e in _r_terms(P))
    if abs(float(stationarity_residual(P, t, 1))) * t > 1e-6 * scale:
        return t
    f2 = lambda x: float(stationarity_residual(P, x, 2))
    lo, hi = t * (1 - 1e-3), t * (1 + 1e-3)
    if f2(lo) * f2(hi) >= 0:
        return t
    t2 = brentq(f2, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    r_old = abs(float(stationarity_residual(P, t)))
    return t2 if abs(float(stationarity_residual(P, t2))) <= max(r_old, 1e-13 * scale) else t


def find_minimizers(params: HSParams, grid=(1e-6, 1e6), per_decade: int = 1000) -> MinimizerSet:
    """All global minimizers of g on [0, inf] with degeneracy data (kappa > 0 only)."""
    P = params
    if not P.kappa > 0:
        raise DomainError("find_minimizers requires kappa > 0")
    if is_constant_case(P):
        raise SpecialCase("CONSTANT_G", "g is constant: every t in [0, inf] is a minimizer")
    cands = [(0.0, g_eval(P, 0.0)), (math.inf, g_eval(P, math.inf))]
    for t in _roots_of_r(P, grid[0], grid[1], per_decade):
        cands.append((t, g_eval(P, t)))
    g_min = min(g for _, g in cands)
    points = []
    for t, g in cands:
        if g - g_min > MINIMUM_TOL:
            continue
        if t == 0.0:
            g2, res = g_eval(P, 0.0, 2), 0.0
        elif math.isinf(t):
            g2, res = g_reflected(P, 0.0, 2), 0.0
        else:
            g2 = g_eval(P, t, 2)
            res = abs(float(stationarity_residual(P, t)))
            # judge the residual against the largest term of r, not its cancelled sum
            scale = max(abs(c) * t ** e for c, e in _r_terms(P))
            if res > ROOT_RESIDUAL_TOL * max(1.0, scale):
                warnings.warn(f"root t={t!r} polished only to |r|={res:.3g}", NumericalWarning)
        points.append(MinimizerPoint(t, g, abs(g2) <= DEGENERACY_TOL, g2, res))
    points.sort(key=lambda q: q.t)
    interior = [q.t for q in points if q.is_interior]
    for a, b in zip(interior, interior[1:]):
        if b - a < 1e-6:
            warnings.warn(f"minimizers {a!r} and {b!r} closer than 1e-6", NumericalWarning)
    return MinimizerSet(tuple(points))


def best_constant(params: HSParams, minimizers: MinimizerSet | None = None) -> float:
    """Sharp constant S of the bivariate inequality."""
    P = params
    m = mu_s(P.N, P.s)
    if P.kappa <= 0:
        return max(P.lam, P.mu) ** (-2.0 / P.p) * m
    if is_constant_case(P):
        return (2.0 * P.kappa) ** (-2.0 / P.p) * m
    ms = minimizers if minimizers is not None else find_minimizers(P)
    return ms.g_inf * m


def degenerate_case_params(alpha: float, beta: float, kappa: float = 1.0):
    """(lambda, mu, t0) for which t0 = sqrt((2-beta)/(2-alpha)) is a degenerate minimizer."""
    if not (1.0 < alpha < 2.0 and 1.0 < beta < 2.0):
        raise DomainError(f"alpha and beta must lie in (1, 2), got {alpha}, {beta}")
    if not kappa > 0:
        raise DomainError("kappa must be > 0")
    p = alpha + beta
    t0 = math.sqrt((2.0 - beta) / (2.0 - alpha))
    lam = 2.0 * kappa * alpha / (p - 2.0) * t0 ** (beta - 2.0)
    mu = 2.0 * kappa * beta / (p - 2.0) * t0 ** (2.0 - alpha)
    return lam, mu, t0


CASE_LABELS = ("I", "II.1", "II.2", "II.3", "II.4", "CONSTANT_G", "KAPPA_NONPOSITIVE")


@dataclass(frozen=True)
class Classification:
    case_label: str
    iota: float | None  # None where the exponent is not applicable
    minimizers: MinimizerSet | None
    best_constant: float


def _close(a: float, b: float, tol: float = TABLE_TOL) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _table_row(P: HSParams, ms: MinimizerSet) -> str:
    a, b, lam, mu, k = P.alpha, P.beta, P.lam, P.mu, P.kappa
    ts = ms.ts
    if 1 < a < 2 and 1 < b < 2:
        lam0, mu0, t0 = degenerate_case_params(a, b, k)
        if (_close(lam, lam0) and _close(mu, mu0) and len(ts) == 1
                and abs(ts[0] - t0) <= 1e-6):
            return "II.1"
    if _close(b, 2) and a >= 2 - TABLE_TOL and _close(lam, 2 * k) and mu < lam and ts == [0.0]:
        return "II.2"
    if _close(a, 2) and b >= 2 - TABLE_TOL and _close(mu, 2 * k) and lam < mu and ts == [math.inf]:
        return "II.3"
    if (_close(min(a, b), 2) and max(a, b) > 2 + TABLE_TOL and _close(lam, 2 * k)
            and _close(mu, 2 * k) and ts == [0.0, math.inf]):
        return "II.4"
    raise InconsistentClassification(
        f"degenerate minimizers {[q.t for q in ms.degenerate]} but no table row matches {P}")


def classify(params: HSParams) -> Classification:
    """Stability case and exponent iota for the given parameters."""
    P = params
    if P.kappa <= 0:
        return Classification("KAPPA_NONPOSITIVE", None, None, best_constant(P))
    if is_constant_case(P):
        return Classification("CONSTANT_G", None, None, best_constant(P))
    ms = find_minimizers(P)
    S = best_constant(P, ms)
    if not ms.degenerate:
        return Classification("I", 1.0, ms, S)
    return Classification(_table_row(P, ms), 0.5, ms, S)
