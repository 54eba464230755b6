"""(p,q)-Meyer-König-Zeller Durrmeyer operators: evaluation, moments and convergence checks."""

__version__ = "0.1.0"

from .functions import Function1D, TEST_POLYNOMIALS, monomial, polynomial
from .mkz import OperatorConfig, WeightSlice, mkz_weights
from .operator import EvalResult, apply, apply_monomial, central_moment
from .pq_core import DomainError, PQParams, TruncationError
from .convergence import SeqScheme, remark1_scheme

__all__ = [
    "DomainError",
    "EvalResult",
    "Function1D",
    "OperatorConfig",
    "PQParams",
    "SeqScheme",
    "TEST_POLYNOMIALS",
    "TruncationError",
    "WeightSlice",
    "apply",
    "apply_monomial",
    "central_moment",
    "mkz_weights",
    "monomial",
    "polynomial",
    "remark1_scheme",
]
