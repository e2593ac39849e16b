"""Exception hierarchy shared by every module of the package."""


class CKNError(Exception):
    """Base class for all package errors."""


class DomainError(CKNError, ValueError):
    """Parameters outside the admissible range of a formula."""


class PreconditionError(CKNError, ValueError):
    """Input violates a documented precondition (normalization, bracket...)."""


class BracketError(PreconditionError):
    """The supplied bracket does not enclose a sign change."""


class ConvergenceError(CKNError, RuntimeError):
    """A numerical procedure did not reach its tolerance.

    ``best_estimate`` carries whatever the procedure had when it gave up.
    """

    def __init__(self, message, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate


class StiffnessError(ConvergenceError):
    """Step size underflow in the ODE integrator."""
