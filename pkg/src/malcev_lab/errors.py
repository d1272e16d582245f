"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class MalcevLabError(Exception):
    """Base class for library errors."""


class UsageError(MalcevLabError, ValueError):
    """Invalid arguments or violated preconditions."""


class ParseError(UsageError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class ResourceError(MalcevLabError):
    """A configured cap (closure rows, enumeration budget, series count) was exceeded."""

    def __init__(self, message: str, cap: int | None = None):
        self.cap = cap
        super().__init__(message)


class InvalidCongruenceError(UsageError):
    """A partition is not compatible with the operations of the algebra."""


class UnsupportedAlgebraError(UsageError):
    """The algebra lacks a property the requested procedure needs (e.g. a Mal'cev polynomial)."""
