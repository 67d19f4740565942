"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class DegenerateInputError(ValueError):
    """The input is structurally degenerate (e.g. an all-zero weight vector)."""


class DegenerateUpdateError(RuntimeError):
    """An update collapsed the whole weight vector (total clipping)."""


class ComputationError(ArithmeticError):
    """A numerical evaluation produced a non-finite or invalid result.

    May carry a ``best`` attribute with the last usable iterate when the
    failure happened inside an iterative solver.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class DataError(ValueError):
    """A dataset file could not be parsed or failed validation."""
