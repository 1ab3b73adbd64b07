"""Exception types shared across the package.

Every error raised on purpose derives from DtwaveError so callers (and the
command line tool) can distinguish validation and numeric failures from
programming bugs.
"""


class DtwaveError(Exception):
    """Base class for all errors raised by dtwave."""


class InvalidLengthError(DtwaveError, ValueError):
    """A length precondition failed (odd signal, bad divisibility, ...)."""


class UnsupportedSizeError(DtwaveError, ValueError):
    """Sizes are structurally incompatible (filter longer than signal, ...)."""


class InvalidArgumentError(DtwaveError, ValueError):
    """An argument is outside its documented range."""


class StructureError(DtwaveError, ValueError):
    """A container or file does not have the expected structure."""


class NumericError(DtwaveError, ArithmeticError):
    """A computation produced a non-finite value."""


class DegenerateInputError(DtwaveError, ValueError):
    """The input makes the requested quantity undefined (zero norm, ...)."""
