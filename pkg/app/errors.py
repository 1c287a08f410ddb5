"""Exceptions raised by the pascal-forms library."""


class PascalFormsError(Exception):
    """Base class for every error raised by the library."""


class ParameterRangeError(PascalFormsError, ValueError):
    """A size, order or index parameter is outside its legal range."""


class DimensionMismatchError(PascalFormsError, ValueError):
    """Matrix operands or blocks have incompatible sizes."""


class NotPrimeError(PascalFormsError, ValueError):
    """A modulus failed the primality check."""


class SequenceTooShortError(PascalFormsError, ValueError):
    """A sequence prefix is shorter than the matrix or convolution being built."""


class NotUnitriangularError(PascalFormsError, ValueError):
    """Matrix is not lower triangular with unit diagonal."""


class NotUnipotentError(PascalFormsError, ValueError):
    """(A - I) is not nilpotent modulo p."""


class NotNearJordanError(PascalFormsError, ValueError):
    """Matrix is not of the near-Jordan shape, or a sequence lacks its leading zeros."""


class InexactDivisionError(PascalFormsError, RuntimeError):
    """An exact integer division left a remainder. Indicates an internal error."""


class FormatError(PascalFormsError, ValueError):
    """Matrix, sequence or report text could not be parsed."""
