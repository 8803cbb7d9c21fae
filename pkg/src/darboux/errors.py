"""Exception types shared across the package."""
from .quadrature import InvalidExponent, NonConvergence


class DomainError(ValueError):
    """Point outside the region where an operation is defined."""


class MissingDerivative(LookupError):
    """A function lacks an analytic derivative of the requested order."""


class DiagonalBlowup(DomainError):
    """Evaluation requested on or beyond the diagonal x + y = 1."""


class DegenerateFit(ArithmeticError):
    """Remainders sit below quadrature noise; no slope can be fitted."""


__all__ = [
    "DomainError",
    "MissingDerivative",
    "DiagonalBlowup",
    "DegenerateFit",
    "InvalidExponent",
    "NonConvergence",
]
