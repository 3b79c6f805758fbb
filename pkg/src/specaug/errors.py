"""Exception types shared across the package."""


class SpecAugError(Exception):
    """Base class for all errors raised by this library."""


class FormatError(SpecAugError, ValueError):
    """A file is structurally malformed (bad magic, truncated header, ...)."""


class UnsupportedFormatError(FormatError):
    """A file is well-formed but uses an encoding this library does not read."""


class EmptyInputError(SpecAugError, ValueError):
    """An input is empty or too short for the requested operation."""


class NormalizationError(SpecAugError, ValueError):
    """A zero-mean contract was violated.

    Raised when normalizing an already-normalized spectrogram, or when a
    masking operation receives unnormalized input (the zero fill value is
    only mean-equivalent on zero-mean data).
    """


class SplineSingularError(SpecAugError, ValueError):
    """The polyharmonic system could not be solved to interpolation accuracy."""

    def __init__(self, message: str, condition_number: float | None = None):
        if condition_number is not None:
            message = f"{message} (condition number {condition_number:.3e})"
        super().__init__(message)
        self.condition_number = condition_number


class UnknownPolicyError(SpecAugError, LookupError):
    """Requested policy preset name does not exist."""
