"""Shared sentinels and exception types."""

import math

#: Value used for an infinite order or Milnor number.
INFINITE = math.inf


class SingulabError(Exception):
    """Base class for all errors raised by this package."""


class VariableCountError(SingulabError, ValueError):
    """Operands live in polynomial rings with different numbers of variables."""


class ResourceLimitError(SingulabError):
    """A standard basis computation exceeded its reduction step cap."""

    def __init__(self, steps, limit):
        super().__init__(f"standard basis exceeded {limit} reduction steps (reached {steps})")
        self.steps = steps
        self.limit = limit


class PreconditionError(SingulabError, ValueError):
    """An operation was called outside the domain where its result is meaningful."""


class DomainError(SingulabError, ArithmeticError):
    """A map expression was evaluated outside its domain of definition."""


def is_infinite(value):
    return isinstance(value, float) and math.isinf(value)
