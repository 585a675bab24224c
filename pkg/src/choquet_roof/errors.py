"""Exception types shared across the package."""


class ChoquetRoofError(Exception):
    """Base class for package errors."""


class ValidationError(ChoquetRoofError, ValueError):
    """Input violates a structural invariant (shape, hermiticity, trace, ...)."""


class UnsupportedInputError(ChoquetRoofError, ValueError):
    """Input is valid but outside what an algorithm handles (e.g. rank-deficient barycenter)."""


class ConvergenceError(ChoquetRoofError, RuntimeError):
    """An iterative routine hit its iteration cap."""
