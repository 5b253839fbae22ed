"""Exception taxonomy shared across the package."""


class TranslatorLabError(Exception):
    """Base class for all package errors."""


class DomainError(TranslatorLabError):
    """Input outside the admissible region of an operation."""


class ParityError(DomainError):
    """Curvature order parity incompatible with the requested construction."""


class GlueError(TranslatorLabError):
    """Profile boundary data incompatible with the requested gluing."""


class NumericalError(TranslatorLabError):
    """Base class for failures of a numerical procedure."""


class StiffnessError(NumericalError):
    """Adaptive step size collapsed below the hard floor."""


class NotConverged(NumericalError):
    """A limit estimate did not settle within its variation threshold."""


class QuadratureError(NumericalError):
    """Adaptive quadrature failed to converge."""


class StabilityError(NumericalError):
    """Explicit flow step outside its stability region."""


class FitError(NumericalError):
    """Too few usable samples for a regression fit."""


class IoError(TranslatorLabError):
    """Failure writing to or reading from an export sink."""
