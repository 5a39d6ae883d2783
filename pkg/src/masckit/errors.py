"""Exception types shared across the package."""


class MasckitError(Exception):
    """Base class for all package errors."""


class InputError(MasckitError, ValueError):
    """Malformed or inconsistent input."""


class BudgetExceededError(MasckitError):
    """An exact enumeration would exceed the configured combinatorial cap."""


class NumericalBoundaryError(MasckitError):
    """A floating-point comparison landed inside the tie band, no verdict."""


class SolverError(MasckitError):
    """LP solver failure (infeasibility, iteration limit)."""
