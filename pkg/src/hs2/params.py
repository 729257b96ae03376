"""Validated parameter tuple (N, s, alpha, beta, lambda, mu, kappa)."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

from .errors import DomainError

EXPONENT_TOL = 1e-12


def critical_exponent(N: int, s: float) -> float:
    """Hardy-Sobolev exponent 2(N - s)/(N - 2)."""
    return 2.0 * (N - s) / (N - 2)


@dataclass(frozen=True)
class HSParams:
    N: int
    s: float
    alpha: float
    beta: float
    lam: float
    mu: float
    kappa: float

    @property
    def p(self) -> float:
        return critical_exponent(self.N, self.s)

    def swapped(self) -> "HSParams":
        """Parameters of the reflected problem t -> 1/t (alpha<->beta, lambda<->mu)."""
        return replace(self, alpha=self.beta, beta=self.alpha, lam=self.mu, mu=self.lam)

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "s": self.s,
            "alpha": self.alpha,
            "beta": self.beta,
            "lambda": self.lam,
            "mu": self.mu,
            "kappa": self.kappa,
            "p": self.p,
        }


def make_params(N, s, alpha, beta, lam, mu, kappa) -> HSParams:
    """Validate and build an :class:`HSParams`.

    Raises :class:`DomainError` naming the first offending field.
    """
    if isinstance(N, bool) or int(N) != N:
        raise DomainError(f"N must be an integer, got {N!r}")
    N = int(N)
    if N < 3:
        raise DomainError(f"N must be >= 3, got {N}")
    s, alpha, beta = float(s), float(alpha), float(beta)
    lam, mu, kappa = float(lam), float(mu), float(kappa)
    if not 0.0 < s < 2.0:
        raise DomainError(f"s must lie in (0, 2), got {s}")
    if not alpha > 1.0:
        raise DomainError(f"alpha must be > 1, got {alpha}")
    if not beta > 1.0:
        raise DomainError(f"beta must be > 1, got {beta}")
    if not lam > 0.0:
        raise DomainError(f"lambda must be > 0, got {lam}")
    if not mu > 0.0:
        raise DomainError(f"mu must be > 0, got {mu}")
    if not math.isfinite(kappa):
        raise DomainError(f"kappa must be finite, got {kappa}")
    p = critical_exponent(N, s)
    if abs(alpha + beta - p) > EXPONENT_TOL:
        raise DomainError(f"alpha + beta must equal p = 2(N-s)/(N-2) = {p!r}, got {alpha + beta!r}")
    return HSParams(N, s, alpha, beta, lam, mu, kappa)


def worker_count(default: int = 1) -> int:
    """Worker cap from the HS2_THREADS environment variable."""
    raw = os.environ.get("HS2_THREADS")
    if not raw:
        return default
    try:
        n = int(raw)
    except ValueError:
        return default
    return max(1, n)
