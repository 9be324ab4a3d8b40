"""Exception types shared across the package."""


class DynballError(Exception):
    """Base class for all package errors."""


class SpaceMismatchError(DynballError):
    """A point, ball, or measure was used with a space it does not live on."""


class CapabilityError(DynballError):
    """The requested computation needs a capability the system lacks.

    Raised for two-sided orbit windows on non-invertible maps, volume
    checks on maps without a Jacobian, and similar structural gaps.
    """


class NotACoverError(DynballError):
    """A claimed cover leaves some probe point of the space uncovered."""


class ConstructionError(DynballError):
    """A parametric construction cannot be carried out as requested."""


class InsufficientSamplesError(DynballError):
    """Every sample died at the first step; the radius is too small
    for the sample budget."""
