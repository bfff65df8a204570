"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: InvalidInputError and subclasses
exit 2, BudgetExceededError exits 3, failed verification reports exit 1.
"""


class MisforgeError(Exception):
    """Base class for all package errors."""


class BudgetExceededError(MisforgeError):
    """An enumeration or search exceeded its configured budget."""


class InvalidInputError(MisforgeError):
    """Arguments or file contents outside the supported domain."""


class TooSmallError(InvalidInputError):
    """A requested size is below the smallest constructible instance."""


class SizeRelationViolatedError(InvalidInputError):
    """Recursive size requirement fails at some level."""

    def __init__(self, level: int, n: int, required: int):
        self.level = level
        self.n = n
        self.required = required
        super().__init__(
            f"level {level}: n={n} violates size relation (needs n >= {required})"
        )


class DimensionMismatchError(InvalidInputError):
    """Graph family shape does not match the outer graph."""


class InvalidSequenceError(InvalidInputError):
    """A search sequence has the wrong length or an out-of-range entry."""


class ScheduleError(InvalidInputError):
    """A sampling schedule is malformed."""


class FormatError(InvalidInputError):
    """A serialized file failed to parse or is internally inconsistent."""


class NotAnMisError(MisforgeError):
    """The supplied vertex set is not a maximal independent set."""


class InconsistentMisError(MisforgeError):
    """An MIS restriction fits neither copy; the instance is corrupt."""
