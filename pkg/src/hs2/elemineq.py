"""Randomized checks of the elementary inequalities behind the stability estimates.

Each inequality asserts that some constant C makes ``lhs <= base + C * residual``
hold everywhere. The constant is estimated by a grid sup-search (with a 5% margin)
and then tested against heavy-tailed random samples.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import DomainError

MARGIN = 1.05
L1_BOX, L1_GRID = 10.0, 400
L2_BOX, L2_GRID = 20.0, 400
_EPS = np.finfo(float).eps
ROUNDING = 64.0 * _EPS


class IneqCase(enum.Enum):
    L1_GE2 = "L1_GE2"
    L1_LT2 = "L1_LT2"
    L2_BOTH_GE2 = "L2_BOTH_GE2"
    L2_A2_B_GT2 = "L2_A2_B_GT2"
    L2_BOTH_EQ2 = "L2_BOTH_EQ2"
    L2_MIXED = "L2_MIXED"
    L2_B_EQ2 = "L2_B_EQ2"
    L2_BOTH_LT2 = "L2_BOTH_LT2"


@dataclass(frozen=True)
class IneqResult:
    case: IneqCase
    m: float
    constant: float
    violations: int
    samples: int
    exponents: tuple  # (iota,) or (alpha, beta)

    def as_dict(self) -> dict:
        return {"case": self.case.value, "m": self.m, "constant": self.constant,
                "violations": self.violations, "samples": self.samples,
                "exponents": list(self.exponents)}


def heavy_tailed(rng: np.random.Generator, n: int) -> np.ndarray:
    """tan of uniform angles in (-pi/2, pi/2): standard Cauchy samples."""
    return np.tan(np.pi * (rng.random(n) - 0.5))


def _grid(box: float, n: int):
    g = np.linspace(-box, box, n)
    return np.meshgrid(g, g, indexing="ij")


def _log_grid(lo: float = 1e-8, hi: float = 1e8, n: int = 161):
    """Signed log-spaced product grid plus the axes.

    Without the x = z = 1 normalization's homogeneity the sup can sit at infinity or
    along a coordinate axis (e.g. y -> 0 with w fixed), which no bounded box resolves.
    """
    mag = np.geomspace(lo, hi, n)
    g = np.concatenate([-mag[::-1], [0.0], mag])
    return np.meshgrid(g, g, indexing="ij")


# ---------------------------------------------------------------- one variable

def _l1_parts(iota: float, m: float, x, y):
    """(lhs, linear term, quadratic coefficient) of the one-variable inequality."""
    ax = np.abs(x)
    lhs = np.abs(x + y) ** iota - ax ** iota
    lin = iota * np.sign(x) * ax ** (iota - 1.0) * y
    return lhs, lin, iota * (iota - 1.0) / 2.0 + m


def _l1_required(iota: float, m: float, x, y):
    """Smallest C1 >= 0 making the inequality hold at (x, y); 0 where y = 0."""
    lhs, lin, c = _l1_parts(iota, m, x, y)
    ay = np.abs(y)
    with np.errstate(divide="ignore", invalid="ignore"):
        if iota >= 2.0:
            req = (lhs - lin - c * np.abs(x) ** (iota - 2.0) * y * y) / ay ** iota
        else:
            T = (lhs - lin) * (x * x + y * y) / (c * y * y)
            req = (np.maximum(T, 0.0) ** (1.0 / iota) - np.abs(x)) / ay
    return np.where(ay > 0, np.maximum(req, 0.0), 0.0)


def _l1_violations(iota: float, m: float, C1: float, x, y) -> int:
    lhs, lin, c = _l1_parts(iota, m, x, y)
    ax, ay = np.abs(x), np.abs(y)
    if iota >= 2.0:
        quad = c * ax ** (iota - 2.0) * y * y
        rhs = lin + quad + C1 * ay ** iota
        scale = np.abs(x + y) ** iota + ax ** iota + np.abs(lin) + quad + C1 * ay ** iota
    else:
        with np.errstate(invalid="ignore", divide="ignore"):
            quad = np.where(ay > 0, c * (ax + C1 * ay) ** iota * y * y / (x * x + y * y), 0.0)
        rhs = lin + quad
        scale = np.abs(x + y) ** iota + ax ** iota + np.abs(lin) + quad
    return int(np.count_nonzero(lhs > rhs + ROUNDING * scale))


def lemma1_check(iota: float, m: float, samples: int = 100_000, seed: int = 0) -> IneqResult:
    """Estimate C1 for |x+y|^iota - |x|^iota <= ... and count violations on random samples."""
    if not iota > 1:
        raise DomainError(f"iota must be > 1, got {iota}")
    if not m > 0:
        raise DomainError(f"m must be > 0, got {m}")
    X, Y = _grid(L1_BOX, L1_GRID)
    C1 = MARGIN * float(np.max(_l1_required(iota, m, X, Y)))
    rng = np.random.default_rng(seed)
    x, y = heavy_tailed(rng, samples), heavy_tailed(rng, samples)
    case = IneqCase.L1_GE2 if iota >= 2 else IneqCase.L1_LT2
    return IneqResult(case, m, C1, _l1_violations(iota, m, C1, x, y), samples, (iota,))


# ---------------------------------------------------------------- two variables

def _check_regime(case: IneqCase, a: float, b: float) -> None:
    tol = 1e-12
    ok = {
        IneqCase.L2_BOTH_GE2: a >= 2 and b >= 2,
        IneqCase.L2_A2_B_GT2: abs(a - 2) <= tol and b > 2,
        IneqCase.L2_BOTH_EQ2: abs(a - 2) <= tol and abs(b - 2) <= tol,
        IneqCase.L2_MIXED: 1 < a < 2 <= b,
        IneqCase.L2_B_EQ2: 1 < a < 2 and abs(b - 2) <= tol,
        IneqCase.L2_BOTH_LT2: 1 < a < 2 and 1 < b < 2,
    }.get(case)
    if ok is None:
        raise DomainError(f"{case} is not a two-variable case")
    if not ok:
        raise DomainError(f"(alpha, beta)=({a}, {b}) is outside the regime of {case.value}")


def _l2_parts(case: IneqCase, a: float, b: float, m: float, y, w):
    """(lhs, base, residual, scale) of the two-variable inequality at x = z = 1."""
    ay, aw = np.abs(y), np.abs(w)
    lhs = np.abs(1.0 + y) ** a * np.abs(1.0 + w) ** b - 1.0
    ca, cb = a * (a - 1.0) / 2.0 + m, b * (b - 1.0) / 2.0 + m
    if case is IneqCase.L2_A2_B_GT2:
        qy, qw, qyw = 1.0, cb, 2.0 * b
    elif case is IneqCase.L2_BOTH_EQ2:
        qy, qw, qyw = 1.0, 1.0, 4.0
    elif case is IneqCase.L2_B_EQ2:
        qy, qw, qyw = ca, 1.0, 2.0 * a
    else:
        qy, qw, qyw = ca, cb, a * b
    parts = (a * y, b * w, qy * y * y, qw * w * w, qyw * y * w)
    base = sum(parts)
    if case is IneqCase.L2_BOTH_GE2:
        res = aw ** b + ay ** a + ay * aw ** 2 + ay ** 2 * aw + ay ** a * aw ** b
    elif case is IneqCase.L2_A2_B_GT2:
        res = aw ** b + ay * aw ** 2 + ay ** 2 * aw + ay ** 2 * aw ** b
    elif case is IneqCase.L2_BOTH_EQ2:
        res = ay * aw ** 2 + ay ** 2 * aw + ay ** 2 * aw ** 2
    elif case is IneqCase.L2_MIXED:
        res = aw ** b + ay * aw ** 2 + ay ** (a + 1) * aw + ay ** (a + 1) + ay ** a * aw ** b
    elif case is IneqCase.L2_B_EQ2:
        res = ay * aw ** 2 + ay ** (a + 1) + ay ** (a + 1) * aw + ay ** a * aw ** 2
    else:
        res = (aw ** (b + 1) + ay ** (a + 1) + ay * aw ** ((b + 1) / 2)
               + ay ** ((a + 1) / 2) * aw + ay ** a * aw ** b)
    scale = lhs + 2.0 + sum(np.abs(t) for t in parts)
    return lhs, base, res, scale


def lemma2_check(case: IneqCase, alpha: float, beta: float, m: float,
                 samples: int = 100_000, seed: int = 0) -> IneqResult:
    """Estimate C2 for the two-variable inequality (x = z = 1) and count violations.

    The sup-search covers the box [-20, 20]^2 and a signed log-spaced grid
    reaching 1e-8 and 1e8 in each coordinate.
    """
    case = IneqCase(case)
    _check_regime(case, alpha, beta)
    if not m > 0:
        raise DomainError(f"m must be > 0, got {m}")
    sup = 0.0
    for Y, W in (_grid(L2_BOX, L2_GRID), _log_grid()):
        lhs, base, res, scale = _l2_parts(case, alpha, beta, m, Y, W)
        # gaps below the rounding level are noise and never count as violations below
        real = (res > 0) & (lhs - base > ROUNDING * scale)
        with np.errstate(divide="ignore", invalid="ignore"):
            req = np.where(real, (lhs - base) / res, 0.0)
        sup = max(sup, float(np.max(req)))
    C2 = MARGIN * sup
    rng = np.random.default_rng(seed)
    y, w = heavy_tailed(rng, samples), heavy_tailed(rng, samples)
    lhs, base, res, scale = _l2_parts(case, alpha, beta, m, y, w)
    slack = ROUNDING * (scale + C2 * res)
    bad = int(np.count_nonzero(lhs > base + C2 * res + slack))
    return IneqResult(case, m, C2, bad, samples, (alpha, beta))


REPRESENTATIVE = {
    IneqCase.L2_BOTH_GE2: (2.5, 3.0),
    IneqCase.L2_A2_B_GT2: (2.0, 3.0),
    IneqCase.L2_BOTH_EQ2: (2.0, 2.0),
    IneqCase.L2_MIXED: (1.5, 2.5),
    IneqCase.L2_B_EQ2: (1.5, 2.0),
    IneqCase.L2_BOTH_LT2: (1.4, 1.6),
}
L1_EXPONENTS = (3.0, 2.0, 1.5)


def convex_hull_check(alpha: float, beta: float) -> bool:
    """True when the three absorbed exponent pairs lie in the hull of the five resident ones."""
    if not (1 < alpha < 2 and 1 < beta < 2):
        raise DomainError("the hull check applies to alpha, beta in (1, 2)")
    a, b = alpha, beta
    verts = np.array([[a + 1, 0.0], [0.0, b + 1], [a, b], [(a + 1) / 2, 1.0], [1.0, (b + 1) / 2]])
    targets = [((a + 1) / 2, b), ((a + 1) / 2, (b + 1) / 2), (a, (b + 1) / 2)]
    A_eq = np.vstack([verts.T, np.ones(len(verts))])
    for pt in targets:
        sol = linprog(np.zeros(len(verts)), A_eq=A_eq, b_eq=[pt[0], pt[1], 1.0],
                      bounds=[(0, None)] * len(verts), method="highs")
        if sol.status != 0:
            return False
    return True
