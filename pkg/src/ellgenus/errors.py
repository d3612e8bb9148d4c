"""Exception hierarchy shared by every module.

Each class maps onto one CLI exit status, see :mod:`ellgenus.cli`.
"""

from __future__ import annotations


class EllGenusError(Exception):
    """Base class for all library errors."""

    exit_code = 2


class InvalidInput(EllGenusError, ValueError):
    exit_code = 2


class CapacityError(EllGenusError):
    """A denominator or cyclotomic-order cap would be exceeded."""

    exit_code = 3


class UnsupportedScale(EllGenusError):
    exit_code = 4


class RationalityFailure(EllGenusError):
    """A cyclotomic value that was required to be rational is not.

    The offending element is kept on ``.element`` for diagnostics.
    """

    exit_code = 2

    def __init__(self, element, message: str | None = None):
        self.element = element
        super().__init__(message or f"not rational: {element!r}")


class TruncationError(EllGenusError):
    """Input series is not deep enough for the requested order."""

    exit_code = 2


class StabilizationError(EllGenusError):
    exit_code = 2
