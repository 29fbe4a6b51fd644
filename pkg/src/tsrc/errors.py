"""Exception types shared across the package.

Plain ``ValueError`` is used for local argument/shape/domain violations;
the classes below mark failures that callers (and the CLI exit-code map)
need to tell apart.
"""


class ConfigError(ValueError):
    """Invalid experiment configuration (unknown keys, bad values, missing files)."""


class CapacityError(ConfigError):
    """Requested slot layout does not fit in the delay loop."""


class DataError(ValueError):
    """Dataset could not be loaded or generated."""


class NumericError(RuntimeError):
    """Numerical failure, e.g. a singular readout system."""
