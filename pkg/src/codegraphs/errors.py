"""Exception types shared across the package."""

from __future__ import annotations


class CodeGraphError(Exception):
    """Base class for errors raised by this package."""


class InvalidRealizationError(CodeGraphError, ValueError):
    """A realization violates the normal-realization rules."""

    def __init__(self, report):
        self.report = report
        lines = "; ".join(str(issue) for issue in report.issues)
        super().__init__(f"invalid realization: {lines}")


class PreconditionError(CodeGraphError, ValueError):
    """An operation was asked to act where its precondition does not hold."""


class DocumentError(CodeGraphError, ValueError):
    """A realization document could not be parsed."""
