"""Exception types shared across the library."""


class MatdistError(Exception):
    """Base class for all library-specific errors."""


class ZeroMassValue(MatdistError):
    """Conditioning on a value that no atom attains."""


class SizeMismatch(MatdistError):
    """Two objects that must have equal dimensions do not."""


class BudgetExceeded(MatdistError):
    """An exact enumeration would exceed the configured budget.

    Attributes:
        required: number of tuples (or candidates) the enumeration would visit.
        budget: the configured ceiling.
    """

    def __init__(self, message, required=None, budget=None):
        super().__init__(message)
        self.required = required
        self.budget = budget


class DepthExceedsMatrix(MatdistError):
    """A prefix depth larger than the sampled matrix allows."""


class EmptyCell(MatdistError):
    """A joint class pair with no incident matrix cells."""


class AmbiguousCell(MatdistError):
    """A joint class pair whose majority value is below the homogeneity
    threshold; the prefix depth is too small to separate classes."""


class ParseError(MatdistError):
    """A function document that does not satisfy the input schema."""
