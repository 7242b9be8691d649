"""Exception hierarchy shared by all fuzzygb modules."""

from __future__ import annotations


class FuzzyGBError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(FuzzyGBError, ValueError):
    """Non-square input, dimension mismatch, or a matrix lacking required structure."""


class DomainError(FuzzyGBError, ValueError):
    """An argument lies outside the domain of the construction (e.g. N < 2)."""


class NumericError(FuzzyGBError, ArithmeticError):
    """The eigensolver failed to converge or produced non-finite output."""

    def __init__(self, message: str, iterations: int | None = None):
        super().__init__(message)
        self.iterations = iterations


class CertificationError(FuzzyGBError, ValueError):
    """A matrix expected to be hermitian failed certification."""


class DefinitenessError(FuzzyGBError, ArithmeticError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""


class ConditioningError(FuzzyGBError, ArithmeticError):
    """gamma-hat is singular (or too close to singular) to invert."""


class AdmissibilityError(FuzzyGBError, ArithmeticError):
    """Some w_k^2 came out negative: the (f^2, hbar, N) combination is not representable."""


class ClosureError(FuzzyGBError, ArithmeticError):
    """The recursion did not close: w_N^2 is not zero within tolerance."""


class ConstructionError(FuzzyGBError, ArithmeticError):
    """A constructed embedding violates the commutation relations it should satisfy."""


class ConsistencyError(FuzzyGBError, ArithmeticError):
    """An internal structural invariant failed (e.g. axisymmetric K-hat not diagonal)."""


class ConfigError(FuzzyGBError, ValueError):
    """Invalid sweep or CLI configuration."""
