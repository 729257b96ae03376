"""Acceptance suite: each check returns a pass/fail verdict with the observed figures."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .coupling import best_constant, classify, find_minimizers, g_eval, g_values
from .deficit import TrialPair, deficit_pair, manifold_distance, trial_distance
from .elemineq import L1_EXPONENTS, REPRESENTATIVE, convex_hull_check, lemma1_check, lemma2_check
from .params import make_params
from .radial import (Eigen, bubble, bubble_dtau, bump, combine, dirichlet_energy, pde_residual,
                     s_norm, weighted_power)
from .special import mu_s
from .stability import CASE_INSTANCES, stability_sweep
from .transform import corollary_check, ell_deficit, ell_family_member

DIMENSION_PAIRS = ((3, 0.5), (3, 1.0), (3, 1.5), (4, 1.0), (5, 0.5))
M_VALUES = (0.01, 0.1, 1.0)
ELLS = (0.3, 0.5, 0.9)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] #{self.number:>2} {self.name}: {self.detail}"


def _dummy_params(N: int, s: float):
    """Any admissible parameter tuple with the given (N, s); only N, s and p matter."""
    p = 2.0 * (N - s) / (N - 2)
    return make_params(N, s, p / 2, p / 2, 1.0, 1.0, 1.0)


def lieb_constant() -> tuple:
    worst = 0.0
    for N, s in DIMENSION_PAIRS:
        P = _dummy_params(N, s)
        w = bubble(P)
        rq = dirichlet_energy(w, N) / s_norm(w, P) ** 2
        worst = max(worst, abs(mu_s(N, s) - rq) / mu_s(N, s))
    return worst <= 1e-8, f"max relative gap formula vs Rayleigh quotient {worst:.2e} (tol 1e-8)"


def normalization() -> tuple:
    worst = 0.0
    for N, s in DIMENSION_PAIRS:
        P = _dummy_params(N, s)
        worst = max(worst, abs(weighted_power(bubble(P), P) - 1.0))
    return worst <= 1e-8, f"max |s-norm^p - 1| = {worst:.2e} (tol 1e-8)"


def eigen_residuals() -> tuple:
    radii = np.geomspace(1e-3, 1e3, 60)
    worst = 0.0
    for N, s in DIMENSION_PAIRS:
        P = _dummy_params(N, s)
        worst = max(worst, pde_residual(bubble(P), P, Eigen.FIRST, radii),
                    pde_residual(bubble_dtau(P), P, Eigen.SECOND, radii))
    return worst <= 1e-6, f"max relative residual {worst:.2e} (tol 1e-6)"


def kappa_nonpositive() -> tuple:
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(10):
        lam, mu = rng.uniform(0.1, 5.0, 2)
        kappa = -rng.uniform(0.0, 3.0)
        P = make_params(3, 1.0, 2.0, 2.0, lam, mu, kappa)
        exact = max(lam, mu) ** (-2.0 / P.p) * mu_s(3, 1.0)
        worst = max(worst, abs(best_constant(P) - exact) / exact)
        if classify(P).case_label != "KAPPA_NONPOSITIVE":
            return False, "classify did not report KAPPA_NONPOSITIVE"
    return worst <= 4 * np.finfo(float).eps, f"max relative gap {worst:.1e} (machine precision)"


def constant_g() -> tuple:
    # alpha = beta = 2 forces p = 4, which for N >= 3 and s in (0, 2) means N = 3, s = 1
    worst, labels = 0.0, set()
    t = np.concatenate([[0.0], np.geomspace(1e-3, 1e3, 99)])
    for kappa in (1.0, 0.37, 2.5):
        P = make_params(3, 1.0, 2.0, 2.0, 2 * kappa, 2 * kappa, kappa)
        worst = max(worst, float(np.max(np.abs(g_values(P, t) - (2 * kappa) ** (-2.0 / P.p)))))
        labels.add(classify(P).case_label)
    ok = worst <= 1e-12 and labels == {"CONSTANT_G"}
    return ok, f"max |g - (2 kappa)^(-2/p)| = {worst:.1e} over 100 points, labels {sorted(labels)}"


GOLDEN_SETS = {
    "I": [1.0],
    "II.1": [math.sqrt(0.4 / 0.6)],
    "II.2": [0.0],
    "II.3": [math.inf],
    "II.4": [0.0, math.inf],
}


def golden_table() -> tuple:
    notes = []
    ok = True
    for label, expected in GOLDEN_SETS.items():
        P, _ = CASE_INSTANCES[label]
        c = classify(P)
        got = c.minimizers.ts
        match = (c.case_label == label and len(got) == len(expected) and all(
            (math.isinf(a) and math.isinf(b)) or abs(a - b) <= 1e-8 for a, b in zip(got, expected)))
        ok &= match
        notes.append(f"{label}->{c.case_label}")
    P, t0 = CASE_INSTANCES["II.1"]
    d = [g_eval(P, t0, k) for k in (1, 2, 3, 4)]
    deriv_ok = max(abs(x) for x in d[:3]) <= 1e-8 and d[3] > 0
    ok &= deriv_ok
    notes.append(f"II.1 |g'|,|g''|,|g'''| <= {max(abs(x) for x in d[:3]):.1e}, g''''={d[3]:.4g}")
    return ok, "; ".join(notes)


def _random_params(rng, n: int):
    out = []
    while len(out) < n:
        s = rng.uniform(0.1, 1.9)
        p = 2.0 * (3 - s)
        alpha = rng.uniform(1.05, p - 1.05)
        out.append(make_params(3, s, alpha, p - alpha, *rng.uniform(0.2, 3.0, 2),
                               rng.uniform(0.1, 2.0)))
    return out


def stationarity_identities() -> tuple:
    rng = np.random.default_rng(7)
    cases = [CASE_INSTANCES[k][0] for k in ("I", "II.1")] + _random_params(rng, 40)
    worst_id, worst_ineq, n_int = 0.0, -math.inf, 0
    for P in cases:
        for t in find_minimizers(P).ts:
            if not 0 < t < math.inf:
                continue
            n_int += 1
            lhs = P.lam + P.mu * t ** P.p + P.kappa * P.p * t ** P.beta
            rhs = (1 + t * t) * (P.lam + P.kappa * P.alpha * t ** P.beta)
            worst_id = max(worst_id, abs(lhs - rhs) / max(1.0, abs(lhs)))
            second = (P.alpha * (2 - P.alpha) * P.kappa * t ** P.beta
                      + P.kappa * P.alpha * P.beta * t ** (P.beta - 2) - (P.p - 2) * P.lam)
            worst_ineq = max(worst_ineq, -second)
    ok = n_int > 0 and worst_id <= 1e-9 and worst_ineq <= 1e-9
    return ok, (f"{n_int} interior minimizers; identity gap {worst_id:.1e}, "
                f"worst second-order shortfall {max(worst_ineq, 0.0):.1e} (tol 1e-9)")


SWEEP_TARGETS = {"I": (2.0, 0.05, 2.0, 0.05), "II.1": (4.0, 0.10, 2.0, 0.05),
                 "II.2": (4.0, 0.10, 2.0, 0.05)}


def sharp_exponents() -> tuple:
    ok, notes = True, []
    for label, (sd, td, sx, tx) in SWEEP_TARGETS.items():
        P, t0 = CASE_INSTANCES[label]
        r = stability_sweep(P, t0)
        target_iota = 1.0 if label == "I" else 0.5
        this = (abs(r.slope_deficit - sd) <= td and abs(r.slope_distance - sx) <= tx
                and abs(r.iota_estimate - target_iota) <= 0.05)
        ok &= this
        notes.append(f"{label}: deficit {r.slope_deficit:.4f}, distance {r.slope_distance:.4f}, "
                     f"iota {r.iota_estimate:.4f}")
    return ok, "; ".join(notes)


def trial_distances() -> tuple:
    pairs = []
    for label in ("I", "II.1", "II.2", "II.4"):
        P, t0 = CASE_INSTANCES[label]
        for eps, tau in ((0.3, 1.0), (0.1, 0.5), (0.03, 2.0), (0.01, 3.0), (1e-3, 0.2)):
            pairs.append((P, TrialPair(1.0, t0 + eps, tau, t0)))
    worst = 0.0
    for P, tp in pairs:
        ms = find_minimizers(P)
        u, v = tp.profiles(P)
        num = manifold_distance(u, v, P, ms)
        worst = max(worst, abs(num - trial_distance(P, tp.a, tp.b, ms)))
    return worst <= 1e-8, f"{len(pairs)} trial pairs, max |numeric - closed form| {worst:.1e} (tol 1e-8)"


def _random_pair(P, rng, t0: float | None = None):
    """Nonnegative bubble-plus-bump pair; near (w, t0 w) when t0 is given."""
    a = rng.uniform(0.2, 2.0)
    b = a * t0 if t0 is not None else rng.uniform(0.0, 2.0)
    tau_v = 0.0 if t0 is not None else rng.uniform(-1, 1)
    tau_u = math.exp(rng.uniform(-1, 1))
    terms_u = [(a, bubble(P, 1.0, tau_u))]
    terms_v = [(b, bubble(P, 1.0, tau_u if t0 is not None else math.exp(tau_v)))]
    for terms in (terms_u, terms_v):
        lo = rng.uniform(0.2, 1.0)
        terms.append((rng.uniform(0.0, 0.5), bump(lo, lo * rng.uniform(1.5, 4.0))))
    return combine(*terms_u), combine(*terms_v)


def deficit_positivity() -> tuple:
    rng = np.random.default_rng(11)
    labels = ("I", "II.1", "II.2", "II.4")
    worst_neg = math.inf
    for i in range(50):
        P, t0 = CASE_INSTANCES[labels[i % len(labels)]]
        # alternate between perturbed minimizer pairs and unrelated pairs
        u, v = _random_pair(P, rng, t0 if i % 2 == 0 else None)
        worst_neg = min(worst_neg, deficit_pair(u, v, P).deficit)
    worst_zero = 0.0
    for label in ("I", "II.1", "II.2", "II.3", "II.4"):
        P, _ = CASE_INSTANCES[label]
        for t0 in find_minimizers(P).ts:
            for k, tau in ((1.0, 1.0), (0.7, 2.5)):
                w = bubble(P, k, tau)
                u, v = (w.scaled(0.0), w) if math.isinf(t0) else (w, w.scaled(t0))
                worst_zero = max(worst_zero, abs(deficit_pair(u, v, P).deficit))
    ok = worst_neg >= -1e-7 and worst_zero <= 1e-7
    return ok, (f"min deficit over 50 random pairs {worst_neg:.3e}; "
                f"max |deficit| on minimizers {worst_zero:.1e} (tol 1e-7)")


def corollary_transform() -> tuple:
    rng = np.random.default_rng(13)
    P, t0 = CASE_INSTANCES["I"]
    worst_gap, worst_member, all_hold = 0.0, 0.0, True
    for ell in ELLS:
        for _ in range(4):
            u, v = _random_pair(P, rng)
            rep = corollary_check(u, v, ell, P)
            all_hold &= rep.comparison_holds and rep.nonnegative
            worst_gap = max(worst_gap, abs(rep.gap))
        for c, lam in ((1.0, 1.0), (0.6, 2.0), (1.7, 0.4)):
            w = ell_family_member(P, ell, c, lam)
            worst_member = max(worst_member, abs(ell_deficit(w, w.scaled(t0), ell, P).deficit))
    ok = all_hold and worst_gap <= 1e-7 and worst_member <= 1e-7
    return ok, (f"comparison holds: {all_hold}; max |delta_ell - delta(transformed)| "
                f"{worst_gap:.1e}; max |delta_ell| on extremals {worst_member:.1e} (tol 1e-7)")


def elementary_inequalities() -> tuple:
    bad, runs = 0, 0
    for iota in L1_EXPONENTS:
        for m in M_VALUES:
            bad += lemma1_check(iota, m, 100_000, seed=runs).violations
            runs += 1
    for case, (a, b) in REPRESENTATIVE.items():
        for m in M_VALUES:
            bad += lemma2_check(case, a, b, m, 100_000, seed=runs).violations
            runs += 1
    hull = all(convex_hull_check(a, b) for a, b in ((1.4, 1.6), (1.1, 1.9), (1.5, 1.5), (1.9, 1.2)))
    return bad == 0 and hull, f"{runs} runs x 1e5 samples, {bad} violations; convex hull {hull}"


CRITERIA = (
    (1, "Lieb constant vs Rayleigh quotient", lieb_constant),
    (2, "bubble normalization", normalization),
    (3, "eigen-residuals", eigen_residuals),
    (4, "kappa<=0 best constant", kappa_nonpositive),
    (5, "constant-g detection", constant_g),
    (6, "classification golden table", golden_table),
    (7, "stationarity identities", stationarity_identities),
    (8, "sharp exponents", sharp_exponents),
    (9, "trial-family distance formula", trial_distances),
    (10, "deficit positivity and zeros", deficit_positivity),
    (11, "corollary transform", corollary_transform),
    (12, "elementary inequalities", elementary_inequalities),
)


def run_criterion(number: int) -> CriterionResult:
    for n, name, fn in CRITERIA:
        if n == number:
            t = time.perf_counter()
            passed, detail = fn()
            return CriterionResult(n, name, bool(passed), detail, time.perf_counter() - t)
    raise KeyError(number)


def run_all() -> list:
    return [run_criterion(n) for n, _, _ in CRITERIA]
