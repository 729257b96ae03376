import numpy as np
import pytest

from hs2.elemineq import (REPRESENTATIVE, IneqCase, _l1_required, _l2_parts, convex_hull_check,
                          heavy_tailed, lemma1_check, lemma2_check)
from hs2.errors import DomainError


def test_heavy_tailed_reaches_large_values():
    x = heavy_tailed(np.random.default_rng(0), 10_000)
    assert np.max(np.abs(x)) > 100 and np.all(np.isfinite(x))


@pytest.mark.parametrize("iota", [3.0, 2.0, 1.5])
def test_lemma1_no_violations(iota):
    res = lemma1_check(iota, 0.5, samples=20_000, seed=2)
    assert res.violations == 0 and res.constant >= 0
    assert res.case is (IneqCase.L1_GE2 if iota >= 2 else IneqCase.L1_LT2)


def test_lemma1_iota_two_needs_no_constant():
    # |x+y|^2 - |x|^2 = 2xy + y^2 exactly, so nothing is left for the constant to absorb
    assert lemma1_check(2.0, 0.5, samples=1000).constant == 0.0


def test_lemma1_trivial_at_y_zero():
    x = np.linspace(-5, 5, 11)
    assert np.all(_l1_required(3.0, 0.5, x, np.zeros_like(x)) <= 0)


def test_lemma1_constant_shrinks_with_m():
    # a larger m strengthens the quadratic term, leaving less for C1
    c = [lemma1_check(3.0, m, samples=1000).constant for m in (0.1, 0.5, 1.0)]
    assert c[0] >= c[1] >= c[2] > 0


@pytest.mark.parametrize("case", sorted(REPRESENTATIVE, key=lambda c: c.value))
def test_lemma2_no_violations(case):
    a, b = REPRESENTATIVE[case]
    res = lemma2_check(case, a, b, 0.5, samples=20_000, seed=4)
    assert res.violations == 0 and np.isfinite(res.constant)


def test_lemma2_trivial_at_origin():
    for case, (a, b) in REPRESENTATIVE.items():
        lhs, base, res, _ = _l2_parts(case, a, b, 0.5, np.zeros(1), np.zeros(1))
        assert lhs[0] == 0 and base[0] == 0 and res[0] == 0


def test_lemma2_regime_checks():
    with pytest.raises(DomainError):
        lemma2_check(IneqCase.L2_BOTH_GE2, 1.5, 3.0, 0.5)
    with pytest.raises(DomainError):
        lemma2_check(IneqCase.L1_GE2, 3.0, 3.0, 0.5)
    with pytest.raises(DomainError):
        lemma2_check(IneqCase.L2_BOTH_LT2, 1.4, 1.6, 0.0)
    with pytest.raises(DomainError):
        lemma1_check(1.0, 0.5)


@pytest.mark.parametrize("a,b", [(1.4, 1.6), (1.1, 1.9), (1.5, 1.5)])
def test_convex_hull(a, b):
    assert convex_hull_check(a, b)


def test_convex_hull_domain():
    with pytest.raises(DomainError):
        convex_hull_check(2.0, 1.5)
