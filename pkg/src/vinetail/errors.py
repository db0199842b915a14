"""Exception types shared across the package."""


class VinetailError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(VinetailError, ValueError):
    """A model parameter is outside its admissible range."""


class DomainError(VinetailError, ValueError):
    """A function argument is outside the admissible domain."""


class UnsupportedMeasureError(VinetailError, ValueError):
    """The exponent measure violates an assumption of the requested operation
    (e.g. spectral mass on the boundary atoms)."""


class UnsupportedCombinationError(VinetailError, ValueError):
    """The combination of pair-copula families has no implemented result."""


class DegenerateConditionerError(VinetailError, ValueError):
    """A conditional distribution was requested given a boundary value."""


class SpecError(VinetailError, ValueError):
    """A vine specification (object or JSON document) is invalid."""


class ConvergenceError(VinetailError, RuntimeError):
    """An iterative numerical routine failed to converge.

    Carries a ``diagnostics`` dict describing what was attempted.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class AlreadyScaledError(VinetailError, ValueError):
    """The sample cloud has already been divided by ln(n)."""
