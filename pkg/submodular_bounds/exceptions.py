"""Errors raised by the submodular bounds toolkit.

Every error carries the process exit code the command line front end uses for it.
"""

from typing import ClassVar

from .const import (
    EXIT_INEQUALITY_VIOLATION,
    EXIT_PARSE,
    EXIT_PRECONDITION,
    EXIT_RESOURCE_GUARD,
)


class SubmodularBoundsError(Exception):
    exit_code: ClassVar[int] = 1


class InputParseError(SubmodularBoundsError):
    """Input could not be parsed or failed schema validation."""

    exit_code = EXIT_PARSE


class PreconditionError(SubmodularBoundsError, ValueError):
    """An operation was called outside its domain."""

    exit_code = EXIT_PRECONDITION


class OverlapError(PreconditionError):
    """Arguments that must be disjoint share an index."""


class UncoveredIndexError(PreconditionError):
    def __init__(self, index: int):
        super().__init__(f"index {index} is not covered by any edge")
        self.index = index


class ClassificationError(PreconditionError):
    """A weighting does not have the class an operation requires."""

    def __init__(self, message: str, index: int | None = None, incident_sum=None):
        super().__init__(message)
        self.index = index
        self.incident_sum = incident_sum


class NotQuasiregularError(PreconditionError):
    pass


class NotRegularError(PreconditionError):
    pass


class MonotonicityError(PreconditionError):
    """The prefix values f([1]) <= f([2]) <= ... fail under the given order."""


class InfeasibleProgramError(PreconditionError):
    pass


class NotPositiveDefiniteError(PreconditionError):
    pass


class AbsoluteContinuityError(PreconditionError):
    pass


class ResourceGuardError(SubmodularBoundsError):
    """An exhaustive computation would exceed its configured guard."""

    exit_code = EXIT_RESOURCE_GUARD


class InequalityViolation(SubmodularBoundsError):
    """An inequality that must hold for valid input failed."""

    exit_code = EXIT_INEQUALITY_VIOLATION
