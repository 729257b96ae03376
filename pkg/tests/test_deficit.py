import math

import numpy as np
import pytest

from hs2.coupling import find_minimizers, g_eval
from hs2.deficit import (TrialPair, deficit_pair, deficit_single, manifold_distance,
                         manifold_distance_report, sigma_projection, trial_deficit,
                         trial_deficit_direct, trial_distance)
from hs2.errors import DomainError
from hs2.radial import bubble, bump, combine, gradient_inner
from hs2.special import mu_s


def test_zero_on_minimizers(case_params):
    P, t0 = case_params["I"]
    w = bubble(P)
    assert abs(deficit_pair(w, w.scaled(t0), P).deficit) < 1e-7


def test_pair_with_zero_second_component(case_params):
    P, t0 = case_params["I"]
    w = bubble(P)
    rep = deficit_pair(w, None, P)
    m = mu_s(P.N, P.s)
    closed = m * (g_eval(P, 0.0) - g_eval(P, t0)) * P.lam ** (2 / P.p)
    assert rep.deficit > 0 and abs(rep.deficit - closed) < 1e-10
    assert abs(rep.deficit - trial_deficit(P, 1.0, 0.0, t0)) < 1e-10


def test_single_function_deficit(case_params):
    P, _ = case_params["I"]
    assert abs(deficit_single(bubble(P, 2.0, 0.7), P).deficit) < 1e-9
    u = combine((1.0, bubble(P)), (0.3, bump()))
    assert deficit_single(u, P).deficit > 0


def test_two_homogeneity(case_params):
    P, _ = case_params["II.1"]
    u = combine((1.0, bubble(P)), (0.2, bump()))
    v = bubble(P, 0.6, 1.5)
    d1 = deficit_pair(u, v, P).deficit
    d3 = deficit_pair(u.scaled(3.0), v.scaled(3.0), P).deficit
    assert abs(d3 - 9 * d1) <= 1e-9 * abs(d3)


@pytest.mark.parametrize("label", ["I", "II.1", "II.2", "II.4"])
def test_trial_closed_form_matches_quadrature(case_params, label):
    P, t0 = case_params[label]
    w = bubble(P)
    for eps in (0.3, 0.1):
        b = t0 + eps
        quad = deficit_pair(w, w.scaled(b), P, tol=1e-12).deficit
        closed = trial_deficit(P, 1.0, b, t0)
        assert abs(quad - closed) < 1e-8
        assert abs(trial_deficit_direct(P, 1.0, b, t0) - closed) < 1e-12


def test_relative_deficit_and_dict(case_params):
    P, _ = case_params["I"]
    rep = deficit_pair(bubble(P), bubble(P, 0.5), P)
    assert rep.relative_deficit == pytest.approx(rep.deficit / (rep.energy_u + rep.energy_v))
    assert set(rep.as_dict()) >= {"deficit", "energy_u", "snorm_terms", "best_constant"}


def test_sigma_projection_examples():
    t0 = 0.8
    assert sigma_projection(1.0, t0, t0) == pytest.approx(1.0)
    assert sigma_projection(2.5, 7.0, 0.0) == 2.5
    assert sigma_projection(1.0, t0 + 0.1, t0) == pytest.approx((1 + t0 ** 2 + t0 * 0.1) / (1 + t0 ** 2))
    assert sigma_projection(3.0, 0.4, math.inf) == 0.4


def test_sigma_projection_dominates_other_bubbles(case_params):
    P, t0 = case_params["I"]
    a, b = 1.0, t0 + 0.2
    w = bubble(P)
    sig = sigma_projection(a, b, t0)
    m = mu_s(P.N, P.s)
    rng = np.random.default_rng(5)
    for tau in np.exp(rng.uniform(-2, 2, 20)):
        w1 = bubble(P, 1.0, tau)
        ip = (a + t0 * b) * gradient_inner(w, w1, P.N)
        assert sig >= ip / ((1 + t0 ** 2) * m) - 1e-12


def test_distance_zero_on_manifold_and_trial_formula(case_params):
    P, t0 = case_params["I"]
    ms = find_minimizers(P)
    w = bubble(P, 1.0, 1.7)
    assert manifold_distance(w, w.scaled(t0), P, ms) < 1e-9
    eps = 0.05
    expected = eps ** 2 * mu_s(P.N, P.s) / (1 + t0 ** 2)
    assert abs(trial_distance(P, 1.0, t0 + eps, ms) - expected) < 1e-14
    assert abs(manifold_distance(w, w.scaled(t0 + eps), P, ms) - expected) < 1e-8


def test_distance_tau_independent(case_params):
    P, t0 = case_params["II.1"]
    ms = find_minimizers(P)
    vals = []
    for tau in (0.3, 1.0, 4.0):
        w = bubble(P, 1.0, tau)
        vals.append(manifold_distance(w, w.scaled(t0 + 0.1), P, ms))
    assert max(vals) - min(vals) < 1e-9


def test_distance_to_endpoint_minimizers(case_params):
    P, _ = case_params["II.4"]
    ms = find_minimizers(P)
    w = bubble(P)
    # (eps w, w) is closest to the t = inf branch (0, U)
    d = manifold_distance(w.scaled(0.1), w, P, ms)
    assert abs(d - 0.01 * mu_s(P.N, P.s)) < 1e-9
    assert abs(d - trial_distance(P, 0.1, 1.0, ms)) < 1e-9


def test_nonnegative_inputs_prefer_plus_branch(case_params):
    P, t0 = case_params["I"]
    ms = find_minimizers(P)
    u = combine((1.0, bubble(P)), (0.3, bump()))
    rep = manifold_distance_report(u, bubble(P, 0.8, 1.3), P, ms)
    assert rep.sign == 1 and rep.k > 0 and 0 < rep.normalized < 1


def test_far_inputs_are_upper_bounded_by_energy(case_params):
    P, _ = case_params["I"]
    ms = find_minimizers(P)
    u = bump(0.5, 2.0)
    rep = manifold_distance_report(u, None, P, ms)
    assert 0 < rep.normalized <= 1


def test_trial_pair_validation(case_params):
    with pytest.raises(DomainError):
        TrialPair(0.0, 0.0)
    with pytest.raises(DomainError):
        TrialPair(1.0, 1.0, tau=0.0)
    P, t0 = case_params["I"]
    u, v = TrialPair(1.0, 2.0, 0.5, t0).profiles(P)
    assert abs(v(0.3) - 2 * u(0.3)) < 1e-15
