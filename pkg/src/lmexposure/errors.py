"""Exception hierarchy shared across the package.

Two broad families, mirrored by distinct CLI exit codes: problems with the
bytes we were given (``InputFormatError``) and problems discovered while
computing on otherwise well-formed inputs (``ComputationError``).
"""

from __future__ import annotations


class LmExposureError(Exception):
    """Base class for all package errors."""


class InputFormatError(LmExposureError):
    """A file or record does not conform to its documented format."""

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(prefix + message)


class ComputationError(LmExposureError):
    """An operation's precondition or invariant was violated at run time."""
