"""Exception types shared across the package."""


class FastSphereError(Exception):
    """Base class for all package errors."""


class InvalidParamError(FastSphereError):
    """A parameter is outside its admissible range."""


class ThresholdDegenerateError(FastSphereError):
    """The diffusion exponent sits on a regime threshold, where the branch
    structure is degenerate and bracketing assumptions break down."""


class NotIntegrableError(FastSphereError):
    """The requested integral diverges at its singular endpoint."""


class ToleranceNotMetError(FastSphereError):
    """The quadrature error estimate could not reach the requested relative
    tolerance within the panel budget."""


class OutOfWindowError(FastSphereError):
    """kappa lies outside the existence window of the requested branch."""


class WrongRegimeError(FastSphereError):
    """The operation is only defined in a different m-regime."""


class BracketFailureError(FastSphereError):
    """A sign-change bracket could not be established."""
