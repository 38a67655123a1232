"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: ConfigError -> 1, DataError -> 2,
anything else -> 3.
"""


class ViemoError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(ViemoError):
    """Invalid configuration value or flag combination."""


class DataError(ViemoError):
    """Malformed input data: corpus files, lexicons, model files."""
