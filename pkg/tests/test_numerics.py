import math

import numpy as np
import pytest

from hs2.errors import ConvergenceFailure, NonIntegrable, OptimizationFailure
from hs2.numerics import (GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, golden_section, integrate,
                          scan_then_golden, weighted_integral)


def test_rule_exactness():
    for k in range(32):
        exact = (1 - (-1) ** (k + 1)) / (k + 1)
        assert abs(KRONROD_WEIGHTS @ NODES ** k - exact) < 1e-14
    for k in range(20):
        exact = (1 - (-1) ** (k + 1)) / (k + 1)
        assert abs(GAUSS_WEIGHTS @ NODES ** k - exact) < 1e-14


def test_integrate_smooth():
    res = integrate(np.sin, 0.0, math.pi)
    assert abs(res.value - 2.0) < 1e-13
    assert res.abs_error_estimate >= 0 and res.panels_used >= 1


def test_gamma_integral():
    res = weighted_integral(lambda r: np.exp(-r), 2.0)
    assert abs(res.value - 2.0) < 1e-10


@pytest.mark.parametrize("N,s", [(3, 0.5), (3, 1.0), (4, 1.0), (5, 1.5)])
def test_beta_integral(N, s):
    a = (N - s) / (2 - s)
    exact = math.gamma(a) ** 2 / ((2 - s) * math.gamma(2 * a))
    res = weighted_integral(lambda r: (1 + r ** (2 - s)) ** (-2 * a), N - 1 - s)
    assert abs(res.value - exact) < 1e-10


def test_singular_endpoint_error_is_conservative():
    res = integrate(lambda x: x ** -0.9, 0.0, 1.0, 1e-10)
    assert abs(res.value - 10.0) <= res.abs_error_estimate + 1e-10


def test_halving_tolerance_within_previous_estimate():
    f = lambda r: np.exp(-r) * np.sqrt(r)
    prev = None
    for tol in (1e-6, 5e-7, 2.5e-7, 1.25e-7):
        res = weighted_integral(f, 0.3, tol)
        if prev is not None:
            assert abs(res.value - prev.value) <= prev.abs_error_estimate + 1e-15
        prev = res


def test_nonintegrable_declared():
    with pytest.raises(NonIntegrable):
        weighted_integral(lambda r: r, -2.5, exponent_at_zero=0.0)
    with pytest.raises(NonIntegrable):
        weighted_integral(lambda r: r, 0.0, decay_at_infinity=0.5)


def test_budget_exhaustion():
    with pytest.raises(ConvergenceFailure):
        integrate(lambda x: np.sin(1.0 / x), 1e-8, 1.0, 1e-14, max_panels=50)


def test_nonfinite_integrand():
    with pytest.raises(ConvergenceFailure):
        integrate(lambda x: 1.0 / (x - 0.5) * np.where(x == x, np.inf, 0), 0.0, 1.0)


def test_golden_section():
    # location is resolvable only to ~sqrt(eps) where f is flat
    x, fx = golden_section(lambda t: (t - 0.3) ** 2 + 1, -1.0, 2.0)
    assert abs(x - 0.3) < 1e-7 and abs(fx - 1) < 1e-15
    x, _ = golden_section(lambda t: abs(t - 0.3), -1.0, 2.0)
    assert abs(x - 0.3) < 1e-10


def test_scan_boundary_failure():
    with pytest.raises(OptimizationFailure):
        scan_then_golden(lambda t: t, -1.0, 1.0)
    x, _ = scan_then_golden(lambda t: math.cosh(t - 0.7), -6.0, 6.0)
    assert abs(x - 0.7) < 1e-7
