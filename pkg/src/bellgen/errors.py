"""Exception types shared across the package."""


class InvalidAxisError(ValueError):
    """A rotation axis or direction is not unit-norm."""


class DegenerateAxisError(ValueError):
    """The rotation axis is undefined because the two directions are parallel."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class ConfigurationError(ValueError):
    """An unknown model tag or inconsistent configuration."""
