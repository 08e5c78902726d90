"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class HMSError(Exception):
    """Base class for every error raised by this package."""


class NotFoundError(HMSError, KeyError):
    pass


class ValidationError(HMSError, ValueError):
    pass


class DegeneratePolytopeError(HMSError, ValueError):
    pass


class InvalidCoefficientsError(HMSError, ValueError):
    pass


class DomainError(HMSError, ValueError):
    pass


class IncompleteSearchError(HMSError):
    """Multistart search did not find the expected number of critical points.

    ``partial`` carries whatever distinct points were found.
    """

    def __init__(self, message: str, partial: list, expected: int):
        super().__init__(message)
        self.partial = partial
        self.expected = expected


class AmbiguousOrderingError(HMSError, ValueError):
    pass


class NumericError(HMSError, ArithmeticError):
    pass


class TracingFailedError(NumericError):
    pass


class ShapeError(HMSError, ValueError):
    pass


class ParallelLinesError(HMSError, ValueError):
    pass


class UndefinedIndexError(HMSError, ValueError):
    pass


class GradingMarginError(HMSError, ArithmeticError):
    """A phase difference fell within the safety margin of an integer."""


class EnumerationUnboundedError(HMSError):
    pass


class InvalidConfigError(HMSError, ValueError):
    pass


class BudgetExceededError(HMSError):
    """A bounded search ran out of node expansions before finishing."""

    def __init__(self, message: str, nodes: int):
        super().__init__(message)
        self.nodes = nodes
