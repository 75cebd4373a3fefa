"""
Exception hierarchy shared by every syncmdp module.

The CLI maps these onto exit codes, so keep the split between
"bad input", "cap reached" and "internal inconsistency" intact.
"""
from typing import Optional


class SyncError(Exception):
    """Base class for all syncmdp errors."""


class ModelError(SyncError, ValueError):
    """Invalid MDP, distribution or state set."""


class ModelParseError(ModelError):
    """Model file error with a source position."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class QueryError(SyncError, ValueError):
    """Query that is malformed or outside the supported fragment."""


class InconclusiveError(SyncError):
    """
    A configured exploration cap was reached before an answer was found.

    Never treat this as a negative verdict.
    """

    def __init__(self, cap_name: str, cap_value: int, detail: Optional[str] = None):
        self.cap_name = cap_name
        self.cap_value = cap_value
        message = f"{cap_name}={cap_value} reached"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class OracleSizeError(SyncError):
    """The brute-force oracle refuses models above its state cap."""


class StrategyError(SyncError):
    """A strategy has no move where it needs one."""
