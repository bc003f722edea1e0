"""Exception hierarchy shared by every module."""


class FareyError(Exception):
    """Base class for errors raised by fareygap."""


class DomainError(FareyError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(FareyError, IndexError):
    """A query exceeds the range a precomputed table covers."""


class ResourceLimitError(FareyError, MemoryError):
    """A request exceeds a configured size ceiling."""


class EmptyIntervalError(FareyError, ValueError):
    """Too few Farey fractions in an interval for the requested sum."""


class UndecidableError(FareyError, ArithmeticError):
    """A certified comparison stayed undecided at the maximum precision."""
