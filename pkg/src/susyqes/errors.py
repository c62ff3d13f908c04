"""Exception types raised across the package."""


class SusyError(Exception):
    """Base class for every error raised by susyqes."""


class CapacityError(SusyError):
    """Requested size exceeds a configured maximum."""


class EvaluationRangeError(SusyError):
    """Floating-point overflow while evaluating a closed form."""

    def __init__(self, message, threshold=None):
        super().__init__(message)
        self.threshold = threshold


class ConstructionError(SusyError):
    """A generator function or parameter set violates a precondition."""


class ParameterError(SusyError):
    """Invalid user-facing parameters (family preconditions, unsupported index)."""


class DomainError(SusyError):
    """Evaluation at a declared singular point."""


class InputError(SusyError):
    """Non-finite or malformed numeric input."""


class NumericalError(SusyError):
    """An iterative or adaptive routine failed to converge."""
