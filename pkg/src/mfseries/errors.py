"""Exception hierarchy shared by all analysis stages.

The CLI maps each family onto a process exit code, so library code should
raise the most specific class available.
"""


class MFSeriesError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 1


class ConfigError(MFSeriesError, ValueError):
    """Invalid parameters or grid settings."""

    exit_code = 2


class DataError(MFSeriesError, ValueError):
    """Input data violates a precondition (non-finite, unordered, unparseable...)."""

    exit_code = 3

    def __init__(self, message, *, row=None, column=None, index=None):
        super().__init__(message)
        self.row = row
        self.column = column
        self.index = index


class InsufficientDataError(DataError):
    """Too few points (tail, lags, scales, windows) for the requested estimate."""


class DegeneracyError(MFSeriesError, ArithmeticError):
    """Numerical degeneracy: zero variance, empty partition sums, no spectrum width."""

    exit_code = 4


class WidthUndefinedError(DegeneracyError):
    """Fitted spectrum has no pair of real roots bracketing its maximum.

    ``partial`` holds whatever could still be computed (a ComplexityParams with
    ``W`` and ``r`` set to NaN).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
