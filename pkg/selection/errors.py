"""
Exception types shared by the selection toolkit.

Every precondition failure raises a ``DomainError``; graph file problems raise
a ``GraphParseError`` subclass carrying the offending line; exhaustive
computations that would exceed a configured limit raise ``SizeGuardError``
with the work they would have needed.
"""
from typing import Optional


class SelectionError(Exception):
    """Base class for toolkit errors."""


class DomainError(SelectionError, ValueError):
    """An argument lies outside the domain of an operation."""


class UnsupportedBoundError(SelectionError):
    """A bound was requested outside the range its theorem covers."""


class SizeGuardError(SelectionError):
    """An exhaustive computation would exceed a configured size guard."""

    def __init__(self, guard: str, limit: int, required: int, what: str = ""):
        self.guard = guard
        self.limit = limit
        self.required = required
        detail = f" for {what}" if what else ""
        super().__init__(
            f"Refusing exhaustive run{detail}: needs {required} units of work, "
            f"guard {guard} allows {limit}"
        )


class GraphParseError(SelectionError, ValueError):
    """A graph file could not be parsed."""

    reason = "invalid graph"

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        where = f"line {line_number}: " if line_number is not None else ""
        super().__init__(f"{where}{self.reason}: {message}")


class MalformedLineError(GraphParseError):
    reason = "malformed line"


class SelfLoopError(GraphParseError):
    reason = "self-loop"


class DuplicateEdgeError(GraphParseError):
    reason = "duplicate edge"


class VertexRangeError(GraphParseError):
    reason = "vertex out of range"
