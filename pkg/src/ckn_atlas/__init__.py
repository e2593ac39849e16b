"""Sharp constants, thresholds and phase diagrams for weighted CKN and
logarithmic Hardy inequalities."""

__version__ = "0.1.0"

from .errors import BracketError, CKNError, ConvergenceError, DomainError, PreconditionError, StiffnessError

__all__ = [
    "__version__",
    "BracketError",
    "CKNError",
    "ConvergenceError",
    "DomainError",
    "PreconditionError",
    "StiffnessError",
]
