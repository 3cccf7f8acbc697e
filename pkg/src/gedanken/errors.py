"""Exception and warning types shared across the package."""


class GedankenError(Exception):
    """Base class for all library errors."""


class ConfigurationError(GedankenError):
    """Invalid grid, kernel, aperture, or run configuration."""


class EmptyStateError(GedankenError):
    """An operation left no probability to renormalize."""


class InvalidEntanglementError(GedankenError):
    """Branch tag overlaps do not form a positive semidefinite Gram matrix."""


class EstimationError(GedankenError):
    """A pattern estimator (visibility, fringe spacing) lacks usable structure."""


class InvariantViolationError(GedankenError):
    """A numerical invariant failed beyond tolerance; indicates a numerics bug."""


class BoundaryLeakWarning(UserWarning):
    """Probability reached the edge of the periodic grid and may wrap around."""


class FraunhoferWarning(UserWarning):
    """Screen distance too short for the far-field fringe-spacing formula."""
