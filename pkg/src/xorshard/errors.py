"""Exception hierarchy for the package.

Every error raised by xorshard derives from :class:`XorshardError`, so a
caller can catch one type at a pipeline boundary.  Decode and share-file
problems are split into distinct subclasses because callers (and the CLI)
treat them differently.
"""

from __future__ import annotations

__all__ = [
    "XorshardError",
    "BudgetError",
    "LayoutError",
    "RandomnessError",
    "DecodeError",
    "MissingShareError",
    "HeaderMismatchError",
    "PayloadLengthError",
    "ShareFormatError",
    "BadMagicError",
    "UnsupportedVersionError",
    "DigestMismatchError",
    "TruncatedShareError",
    "DispersalError",
    "StateSpaceError",
]


class XorshardError(Exception):
    """Base class for all errors raised by this package."""


class BudgetError(XorshardError, ValueError):
    """Invalid leakage budget or scheme parameters."""


class LayoutError(XorshardError):
    """Slot assignment produced an inconsistent plan (internal bug guard)."""


class RandomnessError(XorshardError):
    """The randomness source failed to produce key material."""


class DecodeError(XorshardError):
    """Base class for reconstruction failures."""


class MissingShareError(DecodeError):
    """Not all server shares are present."""


class HeaderMismatchError(DecodeError):
    """Share headers disagree with each other or with the plan."""


class PayloadLengthError(DecodeError):
    """A share payload does not match its declared slot count and part size."""


class ShareFormatError(XorshardError):
    """Base class for share-file parsing failures."""


class BadMagicError(ShareFormatError):
    """The file does not start with the share magic bytes."""


class UnsupportedVersionError(ShareFormatError):
    """The file declares a format version this code does not read."""


class DigestMismatchError(ShareFormatError):
    """The stored digest does not match the file contents."""


class TruncatedShareError(ShareFormatError):
    """The file is shorter than its header promises."""


class DispersalError(XorshardError):
    """Writing or reading a share file failed; carries the server index."""

    def __init__(self, server_index: int, message: str):
        super().__init__(f"server {server_index}: {message}")
        self.server_index = server_index


class StateSpaceError(XorshardError):
    """The exact entropy audit was asked to enumerate too many states."""
