"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: configuration problems exit 2, malformed
input data exits 3, and numerical failures (non-positive-definite matrices,
degenerate fits) exit 4.
"""


class FskeyError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(FskeyError):
    """Invalid configuration or parameter combination."""


class DataFormatError(FskeyError):
    """Input file violates a documented schema."""


class NumericalError(FskeyError):
    """Numerical precondition violated (non-PD matrix, degenerate data)."""
