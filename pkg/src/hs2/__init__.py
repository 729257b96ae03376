"""Numerical tools for the bivariate Hardy-Sobolev inequality.

Best constants, the coupling function and its minimizers, deficits, distances to
the minimizer manifold, stability sweeps, the radial change of variables and
checks of the supporting elementary inequalities.
"""

__version__ = "0.1.0"

from .coupling import best_constant, classify, find_minimizers, g_eval, g_reflected  # noqa: E402
from .params import HSParams, make_params  # noqa: E402
from .special import bubble_norm_k0, mu_s  # noqa: E402

__all__ = ["HSParams", "make_params", "mu_s", "bubble_norm_k0", "g_eval", "g_reflected",
           "find_minimizers", "classify", "best_constant"]
