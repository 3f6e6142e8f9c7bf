"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain where an operation is defined."""


class ResolutionError(RuntimeError):
    """Quadrature refinement did not converge to the requested tolerance."""


class ScenarioError(ValueError):
    """A scenario file could not be parsed or failed validation."""


class ValidityWarning(UserWarning):
    """A closed-form approximation is used outside its nominal validity range."""
