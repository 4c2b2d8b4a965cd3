"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class RecurGCDError(Exception):
    """Base class for all errors raised by recurgcd."""


class DomainError(RecurGCDError, ValueError):
    """An operation was applied outside its domain (zero height, L(P) = 0, ...)."""


class FieldMismatchError(RecurGCDError, ValueError):
    """Operands or places belong to different quadratic fields."""


class ConfigurationError(RecurGCDError, ValueError):
    """Bad place set, malformed experiment config, or an exceeded size bound."""


class UndecidableError(RecurGCDError):
    """A certified comparison could not be resolved at the maximal precision."""

    def __init__(self, message: str, precision: int):
        super().__init__(f"{message} (undecidable at precision {precision} bits)")
        self.precision = precision


class ParseError(RecurGCDError, ValueError):
    pass


class NotDivisibleError(RecurGCDError, ArithmeticError):
    pass


class ZeroRecurrenceError(RecurGCDError, ValueError):
    """All terms of a recurrence cancelled: the sequence is identically zero."""


class UnsupportedRelationError(RecurGCDError):
    """Multiplicative relations among the roots cannot be determined exactly."""


class TorsionError(RecurGCDError, ValueError):
    """The root group has torsion where a torsion-free group is required."""


class InvariantViolation(RecurGCDError, AssertionError):
    """An internal exact consistency check failed."""
