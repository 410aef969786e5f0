"""Shared exception types and the CLI exit-code convention."""


class ResourceBudgetError(RuntimeError):
    """A requested computation exceeds a configured memory or size budget."""


class NumericalError(RuntimeError):
    """An iterative routine diverged, stagnated, or produced non-finite values."""


class ConfigError(ValueError):
    """A configuration file is malformed or holds invalid values."""


EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RESOURCE = 3
EXIT_NUMERICAL = 4
