"""Exception types raised by svdyn.

The CLI maps these onto exit codes: ``ResourceError`` exits 3, every other
``SvdynError`` except ``InvariantError`` exits 2.
"""
from fractions import Fraction
from typing import Any, Optional


class SvdynError(Exception):
    pass


class DomainError(SvdynError):
    """A coordinate lies outside the unit square or a piece is malformed."""


class ParseError(SvdynError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class RestrictionError(SvdynError):
    """Some x in the restriction interval has no value inside J."""

    def __init__(self, message: str, x: Fraction):
        super().__init__(message)
        self.x = x


class UsageError(SvdynError):
    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class ResourceError(SvdynError):
    def __init__(self, message: str, cap: int):
        super().__init__(message)
        self.cap = cap


class InvariantError(SvdynError):
    """Two procedures that must agree did not. Carries a diagnostic payload."""

    def __init__(self, message: str, diagnostics: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
