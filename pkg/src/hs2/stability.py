"""Epsilon sweeps along bubble-proportional trial families and log-log slope fits.

Along (u, v) = (w, (t0 + eps) w) the deficit scales like eps^2 at a nondegenerate
minimizer and like eps^4 at a degenerate one, while the distance to the manifold
scales like eps^2 in both cases; the ratio of slopes recovers the exponent iota.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .coupling import classify, degenerate_case_params, find_minimizers
from .deficit import deficit_pair, trial_deficit, trial_distance
from .errors import DomainError
from .params import HSParams, make_params
from .radial import bubble

DEFAULT_EPS_GRID = tuple(np.geomspace(1e-1, 1e-3, 12))
# The quadrature spot check subtracts O(1) energies to resolve deficits as small as
# ~1e-6, so it needs a tighter absolute tolerance than the library default.
SPOT_CHECK_TOL = 1e-12


def fit_loglog(xs, ys):
    """Least-squares line through (ln x, ln y); returns (slope, intercept, max_residual)."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size != y.size or x.size < 4:
        raise DomainError("fit_loglog needs at least 4 matching points")
    if np.any(x <= 0) or np.any(y <= 0) or not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DomainError("fit_loglog needs positive finite data")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = np.max(np.abs(slope * lx + intercept - ly))
    return float(slope), float(intercept), float(resid)


def _case_instances() -> dict:
    lam, mu, t0 = degenerate_case_params(1.4, 1.6, 1.0)
    return {
        "I": (make_params(3, 1.0, 2.0, 2.0, 1.0, 1.0, 1.0), 1.0),
        "II.1": (make_params(3, 1.5, 1.4, 1.6, lam, mu, 1.0), t0),
        "II.2": (make_params(3, 1.0, 2.0, 2.0, 2.0, 1.0, 1.0), 0.0),
        "II.3": (make_params(3, 1.0, 2.0, 2.0, 1.0, 2.0, 1.0), math.inf),
        "II.4": (make_params(3, 0.5, 3.0, 2.0, 2.0, 2.0, 1.0), 0.0),
    }


CASE_INSTANCES = _case_instances()


@dataclass(frozen=True)
class SweepReport:
    params_echo: HSParams
    t0: float
    case_label: str
    epsilons: tuple
    deficits: tuple
    distances: tuple
    slope_deficit: float
    slope_distance: float
    fit_residuals: tuple  # max log-space residual of the (deficit, distance) fits
    classification_iota: float | None
    spot_check: dict = field(default_factory=dict)

    @property
    def iota_estimate(self) -> float:
        return self.slope_distance / self.slope_deficit

    @property
    def stability_ratio(self) -> float | None:
        """max distance / deficit^iota along the sweep: a lower bound on any admissible C."""
        if self.classification_iota is None:
            return None
        return max(d / f ** self.classification_iota for d, f in zip(self.distances, self.deficits))

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["epsilon", "deficit", "distance"])
        for row in zip(self.epsilons, self.deficits, self.distances):
            wr.writerow([f"{x:.17g}" for x in row])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "case": self.case_label,
            "params": self.params_echo.as_dict(),
            "t0": "inf" if math.isinf(self.t0) else self.t0,
            "slope_deficit": self.slope_deficit,
            "slope_distance": self.slope_distance,
            "iota_estimate": self.iota_estimate,
            "classification_iota": self.classification_iota,
            "fit_residuals": list(self.fit_residuals),
            "stability_ratio": self.stability_ratio,
            "spot_check": self.spot_check,
            "smallest_deficit": min(self.deficits),
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)


def stability_sweep(params: HSParams, t0: float, eps_grid=DEFAULT_EPS_GRID,
                    spot_check: bool = True) -> SweepReport:
    """Deficits and distances along (w, (t0 + eps) w), w = U(1,1).

    For t0 = inf the family (eps w, w) is used, computed through the reflected parameters.
    The deficits come from the closed form; with ``spot_check`` the largest-eps point is
    recomputed by quadrature and the relative discrepancy is stored in the report.
    """
    eps = np.asarray(eps_grid, dtype=float)
    if eps.size < 4 or np.any(eps <= 0) or np.any(eps > 0.3) or np.any(np.diff(eps) >= 0):
        raise DomainError("eps grid must be strictly decreasing values in (0, 0.3], >= 4 points")
    minset = find_minimizers(params)
    if not minset.contains(t0, 1e-8):
        raise DomainError(f"t0={t0!r} is not a minimizer of g (minimizers: {minset.ts})")
    cls = classify(params)

    P, ms, t = params, minset, float(t0)
    if math.isinf(t):
        P, ms, t = params.swapped(), minset.reflected(), 0.0
    deficits = [trial_deficit(P, 1.0, t + e, t) for e in eps]
    distances = [trial_distance(P, 1.0, t + e, ms) for e in eps]
    if min(deficits) <= 0 or min(distances) <= 0:
        raise DomainError("nonpositive deficit or distance along the sweep: t0 is not isolated")

    check = {}
    if spot_check:
        w = bubble(P)
        quad = deficit_pair(w, w.scaled(t + eps[0]), P, tol=SPOT_CHECK_TOL).deficit
        check = {"epsilon": float(eps[0]), "closed_form": deficits[0], "quadrature": quad,
                 "relative_error": abs(quad - deficits[0]) / abs(deficits[0])}

    sd, _, rd = fit_loglog(eps, deficits)
    sx, _, rx = fit_loglog(eps, distances)
    return SweepReport(params, float(t0), cls.case_label, tuple(float(e) for e in eps),
                       tuple(deficits), tuple(distances), sd, sx, (rd, rx), cls.iota, check)
