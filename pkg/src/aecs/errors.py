"""Exception types shared across the package.

The CLI maps these onto exit codes, so anything user-facing should raise one
of the classes below rather than a bare ValueError.
"""


class AecsError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(AecsError):
    """Invalid or inconsistent configuration (bad dimensions, unknown measure,
    out-of-range cluster count, malformed manifest)."""


class DataError(AecsError):
    """Problems with input data files or data shapes."""


class ParseError(DataError):
    """A data file could not be parsed; the message carries file and line."""


class ShapeError(DataError):
    """Arrays or datasets with incompatible or degenerate shapes."""


class NumericInstabilityError(AecsError):
    """Training or a numeric routine produced non-finite values."""
