"""Exception types shared across the package."""


class LatticeSepError(Exception):
    """Base class for all package-specific errors."""


class ConvergenceError(LatticeSepError):
    """An iterative numerical routine failed to converge within its budget."""


class BudgetError(LatticeSepError):
    """A requested computation exceeds a hard size or enumeration budget."""


class InternalCheckError(LatticeSepError):
    """An internal consistency check failed; indicates a bug, not bad input."""
