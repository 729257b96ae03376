import math

import pytest

from hs2.stability import CASE_INSTANCES


@pytest.fixture(scope="session")
def case_params():
    """Preset parameter sets keyed by case label, each with its perturbed minimizer t0."""
    return CASE_INSTANCES


def close(a, b, rel=0.0, abs_=0.0):
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= max(abs_, rel * max(abs(a), abs(b)))
