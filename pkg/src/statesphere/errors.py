"""Exception types shared across the package."""


class StateSphereError(Exception):
    """Base class for every package-specific error."""


class DomainError(StateSphereError, ValueError):
    """Invalid value or unsupported combination of arguments."""


class DivergenceError(StateSphereError, ArithmeticError):
    """The requested inner-product integral has no finite value."""


class NumericalFailureError(StateSphereError, ArithmeticError):
    """A computation could not be carried out to the requested accuracy."""


class GeodesicUndeterminedError(NumericalFailureError):
    """Antipodal endpoints: the great-circle plane is not unique."""


class BoxTooSmallError(NumericalFailureError):
    """Quadrature integrand does not decay at the integration box boundary."""
