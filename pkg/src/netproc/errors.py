"""Exception types shared across the package."""

from __future__ import annotations


class NetprocError(Exception):
    """Base class for all domain errors raised by this package."""


class FreshnessViolation(NetprocError):
    """A channel that was required to be fresh already occurs free."""


class ModeViolation(NetprocError):
    """A term uses constructs that are illegal under the requested rule set."""


class BoundExceeded(NetprocError):
    """An exact answer was demanded but an exploration bound was hit first."""


class ArityError(NetprocError):
    """A network builder was given the wrong number of channels."""


class DistinctnessError(NetprocError):
    """A network builder requires pairwise-distinct channels."""


class ParseError(NetprocError):
    """Input text does not match the term grammar."""

    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"line {line} col {col}: {message}")
        self.line = line
        self.col = col


class ScopeError(NetprocError):
    """An identifier is used in a position its binding sort does not allow."""
