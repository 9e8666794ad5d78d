"""Exception types raised across the package."""


class LeggettError(ValueError):
    """Base class for all input and structure errors."""


class NormalizationError(LeggettError):
    """A state, weight vector or direction is not normalized."""


class StructureError(LeggettError):
    """Shapes, dimensions or bipartite structure do not fit the operation."""


class KindError(LeggettError):
    """A measurement setting of the wrong kind (photon vs. spin) was supplied."""


class DomainError(LeggettError):
    """A numeric argument lies outside its allowed range."""
