"""
errors.py - Exception hierarchy shared by the engines and the bundle runner.

Every error carries a severity that the runner maps onto a process exit code.
"""

from typing import Optional


class MovstabError(Exception):
    """Base class for all errors raised by the toolkit."""

    exit_code = 1

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.path = path

    def __str__(self):
        if self.path:
            return f"{self.path}: {self.message}"
        return self.message


class SchemaError(MovstabError):
    """Malformed bundle or query input. `path` names the offending JSON field."""

    exit_code = 2


class PreconditionError(MovstabError):
    """An operation was called outside its documented preconditions."""

    exit_code = 3


class LatticeError(PreconditionError):
    """Incompatible lattices, bad matrices or non-integral lattice data."""


class InvariantViolation(MovstabError):
    """An internal post-condition failed; indicates a bug or contradictory data."""

    exit_code = 4
