"""Custom exceptions for the differential spectrum toolkit.

All exceptions inherit from DiffSpectrumError. The four category bases map
one-to-one onto the CLI exit codes, so callers can catch by category.

Exception Hierarchy:
    DiffSpectrumError (base)
    ├── InvalidInputError - rejected arguments (exit 2)
    │   ├── InvalidPrimeError - p is not an acceptable prime
    │   ├── UnsupportedInputError - outside the supported domain (p = 2, (3, 1), ...)
    │   ├── NonResidueError - square root of a nonsquare requested
    │   ├── ZeroArgumentError - zero where a nonzero element is required
    │   └── FieldDivisionError - inverse of zero in F_{p^n}
    ├── CapExceededError - size cap or memory budget exceeded (exit 3)
    ├── MismatchError - two independent computations disagree (exit 4)
    └── InternalConsistencyError - proof obligation failed (exit 5)
        ├── DivisibilityViolationError - an exact division left a remainder
        └── BranchNotExhaustiveError - case split did not fire exactly once

Examples:
    Catching a category::

        try:
            report = closed_spectrum(3, 1)
        except InvalidInputError as e:
            print(f"rejected: {e}")
"""


class DiffSpectrumError(Exception):
    """Base exception for all toolkit errors.

    Attributes:
        context: Optional diagnostic context for the error.
    """

    def __init__(self, message: str, context: dict[str, object] | None = None) -> None:
        """Initialize with message and optional context.

        Args:
            message: Error message.
            context: Optional diagnostic context.
        """
        super().__init__(message)
        self.context = context or {}

    def __str__(self) -> str:
        """Return string representation with context if available."""
        base_msg = super().__str__()
        if self.context:
            context_str = " | ".join(f"{k}={v}" for k, v in self.context.items())
            return f"{base_msg} [{context_str}]"
        return base_msg


class InvalidInputError(DiffSpectrumError):
    """Raised when arguments are outside what an operation accepts."""

    pass


class InvalidPrimeError(InvalidInputError):
    """Raised when a characteristic is not an acceptable prime."""

    pass


class UnsupportedInputError(InvalidInputError):
    """Raised for inputs outside the supported domain, such as p = 2 or (p, n) = (3, 1)."""

    pass


class NonResidueError(InvalidInputError):
    """Raised when a square root of a nonsquare is requested."""

    pass


class ZeroArgumentError(InvalidInputError):
    """Raised when zero is passed where a nonzero element is required."""

    pass


class FieldDivisionError(InvalidInputError):
    """Raised on inversion of zero in a finite field."""

    pass


class CapExceededError(DiffSpectrumError):
    """Raised when a field is too large for explicit construction or memory."""

    pass


class MismatchError(DiffSpectrumError):
    """Raised when two independent computations of the same quantity disagree."""

    pass


class InternalConsistencyError(DiffSpectrumError):
    """Raised when an internal invariant fails.

    These indicate a transcription or implementation bug, never bad input.
    """

    pass


class DivisibilityViolationError(InternalConsistencyError):
    """Raised when a division that must be exact leaves a remainder."""

    pass


class BranchNotExhaustiveError(InternalConsistencyError):
    """Raised when a case split does not select exactly one case."""

    pass
