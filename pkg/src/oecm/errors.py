"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of an operation."""


class NumericalError(RuntimeError):
    """A numerical routine failed to produce a usable result."""


class ConfigError(ValueError):
    """An experiment configuration was rejected.

    ``violations`` lists one human-readable message per offending field.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid configuration: " + "; ".join(self.violations))
