"""Exception types raised across the package."""


class HS2Error(Exception):
    """Base class for all package errors."""


class DomainError(HS2Error, ValueError):
    """An input lies outside the admissible parameter domain."""


class NumericalError(HS2Error, ArithmeticError):
    """Base class for numerical failures (CLI exit code 2)."""


class ConvergenceFailure(NumericalError):
    """Adaptive quadrature did not meet its tolerance within the panel budget."""


class NonIntegrable(DomainError):
    """Declared power-law behaviour makes the integral divergent."""


class OptimizationFailure(NumericalError):
    """A bracketed 1-D search ended on its bracket boundary."""


class InconsistentClassification(NumericalError):
    """A degenerate minimizer was found but no case of the table matches."""


class SpecialCase(HS2Error):
    """Raised for the constant coupling function, where the minimizer set is all of [0, inf]."""

    def __init__(self, label, message=None):
        self.label = label
        super().__init__(message or label)


class NumericalWarning(UserWarning):
    """Suspicious but non-fatal numerical outcome."""
