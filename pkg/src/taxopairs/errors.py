"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: ConfigError -> 1,
DataError -> 2, OSError -> 3. Anything recoverable (a malformed tuple,
a missing vector) is counted in a report instead of raised.
"""


class TaxopairsError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(TaxopairsError):
    """Bad or inconsistent configuration (missing file, unknown scheme, ...)."""


class DataError(TaxopairsError):
    """Input data cannot satisfy the request (quota shortfall, bad format, ...)."""
