"""Exception types shared by the numeric kernels and the physics layers."""


class EgspinError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(EgspinError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NumericalError(EgspinError, ArithmeticError):
    """A numerical procedure failed to reach its target accuracy."""


class QuadratureError(NumericalError):
    """Adaptive subdivision hit the depth limit.

    ``estimate`` is the best available value of the whole integral and
    ``panel`` the ``(a, b)`` interval that could not be resolved.
    """

    def __init__(self, message, estimate, panel):
        super().__init__(message)
        self.estimate = estimate
        self.panel = panel


class BracketError(NumericalError, ValueError):
    """The root-finding interval does not enclose a sign change."""


class ConvergenceError(NumericalError):
    """An iteration exhausted its iteration budget."""


class NotPSDError(DomainError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""
