"""Exception hierarchy shared across the package."""


class HtentError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(HtentError):
    """A run configuration or argument combination is invalid."""


class SingularSplitError(HtentError):
    """The u block of the Bogoliubov matrix could not be inverted.

    Usually means the truncation is too aggressive for the chosen cut;
    reduce s_F or move the cut position.
    """


class UnphysicalStateError(HtentError):
    """A computed spectrum violates positivity / uncertainty bounds."""


class BudgetExceededError(HtentError):
    """A derivative order exceeded the configured evaluation budget."""
