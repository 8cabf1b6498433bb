"""Exception hierarchy shared by all frobound modules."""

from __future__ import annotations


class FroboundError(Exception):
    """Base class for every error raised by the library."""


class InvalidRadicandError(FroboundError, ValueError):
    pass


class RadicandMismatchError(FroboundError, ValueError):
    pass


class DomainError(FroboundError, ValueError):
    pass


class DegenerateInputError(FroboundError, ValueError):
    pass


class UnsupportedShapeError(FroboundError, ValueError):
    pass


class RegimeMismatchError(FroboundError, ValueError):
    pass


class ConditionFailure(FroboundError):
    """A bound regime's hypothesis does not hold.

    ``condition`` is one of ``"a"``, ``"b"``, ``"c"``, ``"d"``; ``witness`` is
    an x = cos(theta) value where f is negative when condition (b) fails.
    ``fallback`` optionally carries a weaker certificate that is still valid.
    """

    def __init__(self, condition: str, message: str, witness=None, fallback=None):
        super().__init__(f"condition ({condition}) failed: {message}")
        self.condition = condition
        self.witness = witness
        self.fallback = fallback


class UnusablePolynomialError(FroboundError):
    pass


class InfeasibleError(FroboundError):
    pass


class UnboundedError(FroboundError):
    pass


class NonConvergenceError(FroboundError):
    def __init__(self, message: str, best=None, witnesses=()):
        super().__init__(message)
        self.best = best
        self.witnesses = tuple(witnesses)


class InternalAssertionError(FroboundError, AssertionError):
    """An identity that must hold by construction failed."""
