import math

import numpy as np
import pytest

from hs2.errors import DomainError
from hs2.special import (DimensionPair, bubble_norm_k0, log_beta, log_gamma, mu_s,
                         sphere_measure)


@pytest.mark.parametrize("x", [0.5, 1.5, 3.7, 10.2])
def test_log_gamma_recurrence(x):
    lhs = math.exp(log_gamma(x + 1))
    rhs = x * math.exp(log_gamma(x))
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


def test_log_gamma_known_values():
    assert abs(log_gamma(0.5) - 0.5 * math.log(math.pi)) < 1e-14
    for n in range(1, 15):
        assert abs(log_gamma(n) - math.log(math.factorial(n - 1))) <= 1e-13 * max(1.0, math.log(math.factorial(n - 1)))


def test_log_gamma_matches_stdlib_over_range():
    # relative accuracy degrades only where ln Gamma itself crosses zero (x = 1, 2)
    xs = np.concatenate([np.geomspace(1e-6, 1e3, 400), [0.99, 1.0, 1.01, 2.0]])
    for x in xs:
        ref = math.lgamma(x)
        assert abs(log_gamma(x) - ref) <= 1e-13 * max(1.0, abs(ref))


def test_log_gamma_rejects_nonpositive():
    with pytest.raises(DomainError):
        log_gamma(0.0)
    with pytest.raises(DomainError):
        log_gamma(-1.5)


def test_log_beta_symmetric_and_exact():
    assert abs(log_beta(2.0, 3.0) - math.log(1.0 / 12.0)) < 1e-14
    assert abs(log_beta(0.3, 4.1) - log_beta(4.1, 0.3)) == 0.0


def test_sphere_measure():
    assert abs(sphere_measure(3) - 4 * math.pi) < 1e-13
    assert abs(sphere_measure(4) - 2 * math.pi ** 2) < 1e-13
    assert abs(sphere_measure(2) - 2 * math.pi) < 1e-13


def test_mu_s_closed_form_n3_s1():
    # a = 2: mu_s = 2 * (4 pi * Gamma(2)^2 / Gamma(4))^(1/2) = 2 sqrt(2 pi / 3)
    assert abs(mu_s(3, 1.0) - 2.0 * math.sqrt(2.0 * math.pi / 3.0)) < 1e-14


def test_mu_s_positive_and_finite():
    for s in (0.5, 1.5, 1.999):
        m = mu_s(3, s)
        assert math.isfinite(m) and m > 0


def test_k0_closed_form_n3_s1():
    # k0^4 * 4 pi * Gamma(2)^2/Gamma(4) = 1
    assert abs(bubble_norm_k0(3, 1.0) ** 4 * 4 * math.pi / 6 - 1) < 1e-14


@pytest.mark.parametrize("bad", [(2, 1.0), (3, 0.0), (3, 2.0), (3.5, 1.0)])
def test_dimension_checks(bad):
    with pytest.raises(DomainError):
        mu_s(*bad)


def test_dimension_pair_exponent():
    assert DimensionPair(3, 1.0).a == 2.0
    assert DimensionPair(5, 0.5).a > 1
