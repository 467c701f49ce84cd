class SetaError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SetaError, ValueError):
    """Invalid hyperparameter or experiment configuration."""


class DataError(SetaError, ValueError):
    """Malformed input data: bad losses, bad CSV rows, shape mismatches."""


class DivergenceError(SetaError, RuntimeError):
    """Training produced a non-finite loss."""
