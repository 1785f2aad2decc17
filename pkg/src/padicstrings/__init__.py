"""Exact p-adic, real and adelic fractal strings: zeta functions, complex
dimensions, tube volumes and Minkowski contents."""

from .errors import (
    ArgumentError,
    DomainError,
    JumpPointError,
    PadicStringsError,
    PoleError,
    ResourceLimitError,
    UnsupportedFamilyError,
)

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "DomainError",
    "JumpPointError",
    "PadicStringsError",
    "PoleError",
    "ResourceLimitError",
    "UnsupportedFamilyError",
    "__version__",
]
