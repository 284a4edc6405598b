"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so each class carries the code it
should surface with.
"""
from __future__ import annotations


class EvenDicycleError(Exception):
    """Base class for all library errors."""

    exit_code = 3


class ParseError(EvenDicycleError, ValueError):
    """Malformed input text. ``line`` is 1-based, or None for global problems."""

    exit_code = 1

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class LoopError(ParseError):
    """An edge with tail equal to head."""


class CapExceeded(EvenDicycleError):
    """An enumeration produced more objects than the caller allowed.

    The objects found before the cap was hit are kept in ``partial``.
    """

    exit_code = 2

    def __init__(self, message: str, partial=None, cap: int | None = None):
        super().__init__(message)
        self.partial = [] if partial is None else list(partial)
        self.cap = cap


class GateExceeded(EvenDicycleError):
    """An exhaustive routine was called on an instance above its size gate."""

    exit_code = 2


class PreconditionError(EvenDicycleError, ValueError):
    """Input violates the documented precondition of an operation."""

    exit_code = 1


class VerificationFailure(EvenDicycleError):
    """A computed certificate failed its independent re-check."""

    exit_code = 3


class OracleFailure(EvenDicycleError):
    """A pluggable local oracle could not deliver either of its outcomes."""

    exit_code = 3
