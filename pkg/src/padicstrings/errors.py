"""Exception hierarchy shared by every module.

The CLI maps :class:`ResourceLimitError` to exit code 3 and every other
:class:`PadicStringsError` to exit code 2.
"""

from __future__ import annotations


class PadicStringsError(Exception):
    """Base class for all errors raised by this package."""


class ArgumentError(PadicStringsError, ValueError):
    """An argument is malformed (non-prime modulus, bad kept set, ...)."""


class DomainError(PadicStringsError, ValueError):
    """A well-formed argument lies outside the domain of the operation."""


class UnsupportedFamilyError(PadicStringsError, TypeError):
    """The operation is not defined for this string family."""


class PoleError(DomainError):
    """Evaluation point too close to a pole of a geometric zeta function."""

    def __init__(self, message: str, nearest=None):
        super().__init__(message)
        self.nearest = nearest


class JumpPointError(DomainError):
    """The scale sits on a jump of the tube volume step function."""


class ResourceLimitError(PadicStringsError, MemoryError):
    """The requested computation exceeds the configured size bound."""
