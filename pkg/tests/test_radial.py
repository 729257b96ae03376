
import numpy as np
import pytest

from hs2.errors import DomainError
from hs2.params import make_params
from hs2.radial import (Eigen, bubble, bubble_dtau, bump, combine, dirichlet_energy,
                        gradient_inner, mixed_term, pde_residual, radial_integral, s_norm, weighted_power,
                        zero_profile)
from hs2.special import bubble_norm_k0, mu_s

PAIRS = [(3, 0.5), (3, 1.0), (3, 1.5), (4, 1.0), (5, 0.5)]


def dummy(N, s):
    p = 2.0 * (N - s) / (N - 2)
    return make_params(N, s, p / 2, p / 2, 1.0, 1.0, 1.0)


@pytest.fixture(params=PAIRS, ids=lambda x: f"N{x[0]}s{x[1]}")
def P(request):
    return dummy(*request.param)


def test_bubble_value_at_origin(P):
    assert abs(bubble(P)(1e-300) - bubble_norm_k0(P.N, P.s)) < 1e-15


def test_scale_covariance(P):
    r = np.geomspace(1e-3, 1e3, 30)
    for tau in (0.5, 2.0):
        lhs = bubble(P, 1.0, tau)(r)
        rhs = tau ** ((P.N - 2) / 2) * bubble(P)(tau * r)
        assert np.allclose(lhs, rhs, rtol=1e-14, atol=0)


def test_normalization_and_scaling(P):
    for tau in (0.5, 1.0, 2.0):
        assert abs(weighted_power(bubble(P, 1.0, tau), P) - 1.0) < 1e-8
    assert abs(s_norm(bubble(P, -2.5, 1.3), P) - 2.5) < 1e-8
    assert s_norm(zero_profile(), P) == 0.0


def test_energy_rayleigh_and_homogeneity(P):
    m = mu_s(P.N, P.s)
    e1 = dirichlet_energy(bubble(P), P.N)
    assert abs(e1 - m) <= 1e-8 * m
    assert abs(dirichlet_energy(bubble(P, 1.0, 3.0), P.N) - e1) <= 1e-9 * e1
    assert abs(dirichlet_energy(bubble(P, 2.0), P.N) - 4 * e1) <= 1e-9 * e1


def test_dtau_finite_difference(P):
    h = 1e-5
    r = np.array([0.1, 1.0, 10.0])
    fd = (bubble(P, 1.0, 1 + h)(r) - bubble(P, 1.0, 1 - h)(r)) / (2 * h)
    # d/dtau vanishes at r = 1, where the difference quotient is pure round-off (~eps/h)
    assert np.allclose(bubble_dtau(P)(r), fd, rtol=1e-6, atol=1e-10)


def test_dtau_orthogonal_and_second_eigenvalue(P):
    w, d = bubble(P), bubble_dtau(P)
    assert abs(gradient_inner(w, d, P.N)) < 1e-7
    wp2 = lambda r: w(r) ** (P.p - 2) * d(r) ** 2
    rq = dirichlet_energy(d, P.N) / radial_integral(wp2, P.N, P.s)
    assert abs(rq - (P.p - 1) * mu_s(P.N, P.s)) <= 1e-6 * rq


def test_derivatives_match_finite_differences(P):
    r = np.geomspace(1e-2, 1e2, 9)
    h = 1e-6 * r
    for u in (bubble(P), bubble_dtau(P)):
        fd1 = (u(r + h) - u(r - h)) / (2 * h)
        fd2 = (u.deriv(r + h) - u.deriv(r - h)) / (2 * h)
        assert np.allclose(u.deriv(r), fd1, rtol=1e-6, atol=1e-12)
        assert np.allclose(u.second(r), fd2, rtol=1e-5, atol=1e-10)


def test_eigen_residuals(P):
    radii = np.geomspace(1e-3, 1e3, 60)
    assert pde_residual(bubble(P), P, Eigen.FIRST, radii) <= 1e-6
    assert pde_residual(bubble_dtau(P), P, Eigen.SECOND, radii) <= 1e-6
    wrong = (P.p - 1) * mu_s(P.N, P.s)
    assert pde_residual(bubble(P), P, Eigen.FIRST, radii, lam=wrong) > 0.1


def test_decay_matches_declaration(P):
    w = bubble(P)
    a, b = [abs(w(R)) * R ** w.decay for R in (1e3, 1e4)]
    assert 0.5 < a / b < 2


def test_mixed_term_examples(P):
    w = bubble(P)
    assert abs(mixed_term(w, w, P) - 1.0) < 1e-8
    t = 0.7
    assert abs(mixed_term(w, w.scaled(t), P) - t ** P.beta) < 1e-8
    # Young's inequality with equal norms
    v = bubble(P, 1.0, 2.0)
    assert mixed_term(w, v, P) <= P.alpha / P.p + P.beta / P.p + 1e-12


def test_hardy_sobolev_inequality_random_perturbations():
    rng = np.random.default_rng(0)
    for _ in range(50):
        N, s = PAIRS[rng.integers(len(PAIRS))]
        P = dummy(N, s)
        eps = rng.uniform(0, 0.5)
        lo = rng.uniform(0.3, 1.0)
        u = combine((1.0, bubble(P)), (eps, bump(lo, lo * rng.uniform(1.5, 3))))
        assert dirichlet_energy(u, N) >= mu_s(N, s) * s_norm(u, P) ** 2 - 1e-7


def test_bump_shape_and_breakpoints():
    b = bump(0.5, 2.0, 3.0)
    assert b(1.25) == pytest.approx(3.0)
    assert b(0.4) == 0.0 and b(2.5) == 0.0
    assert b.breakpoints == (0.5, 2.0)
    with pytest.raises(DomainError):
        bump(2.0, 1.0)


def test_profile_algebra_and_csv():
    P = dummy(3, 1.0)
    w = bubble(P)
    u = w + w.scaled(2.0)
    r = np.array([0.5, 2.0])
    assert np.allclose(u(r), 3 * w(r))
    assert np.allclose((2 * w).deriv(r), 2 * w.deriv(r))
    text = w.to_csv([1.0, 2.0])
    assert text.splitlines()[0] == "r,u,du" and len(text.splitlines()) == 3


def test_bubble_rejects_bad_args():
    P = dummy(3, 1.0)
    with pytest.raises(DomainError):
        bubble(P, 1.0, 0.0)
    with pytest.raises(DomainError):
        bubble(P, 0.0, 1.0)
    with pytest.raises(DomainError):
        pde_residual(bubble(P), P, Eigen.FIRST, [0.0, 1.0])
