"""Exceptions raised by the contact instanton workbench."""

__all__ = [
    "ContactInstantonError",
    "ContractViolationError",
    "SingularFormError",
    "BoundaryError",
    "IntegrationError",
    "NoOrbitFoundError",
    "AssemblyError",
    "SolverStallError",
    "PreconditionError",
    "InsufficientLengthError",
    "DegenerateSpectrumError",
    "ChargeNotVanishingError",
    "NotExactError",
]


class ContactInstantonError(Exception):
    """Base class of all workbench errors."""


class ContractViolationError(ContactInstantonError, ValueError):
    """A tangent vector is based at a different point than the one supplied."""


class SingularFormError(ContactInstantonError, ValueError):
    """A bilinear form that has to be positive definite is degenerate."""


class BoundaryError(ContactInstantonError, ValueError):
    """A finite-difference stencil reaches outside the domain of a field."""


class IntegrationError(ContactInstantonError, RuntimeError):
    """An ODE integration left the constraint set or could not be resolved."""


class NoOrbitFoundError(ContactInstantonError, RuntimeError):
    """The closed-orbit Newton iteration failed."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class AssemblyError(ContactInstantonError, RuntimeError):
    """An assembled operator violates its structural symmetry."""


class SolverStallError(ContactInstantonError, RuntimeError):
    """The line search failed; ``result`` holds the last iterate."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class PreconditionError(ContactInstantonError, ValueError):
    """Input data violates a documented precondition."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InsufficientLengthError(ContactInstantonError, ValueError):
    """The cylinder is too short for the requested analysis."""


class DegenerateSpectrumError(ContactInstantonError, ValueError):
    """The spectrum has no positive gap."""


class ChargeNotVanishingError(ContactInstantonError, ValueError):
    """The asymptotic charge is above the configured threshold."""


class NotExactError(ContactInstantonError, ValueError):
    """The one-form has a nonzero period around the circle."""
