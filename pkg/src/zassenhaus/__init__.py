"""Symmetrised differential operators, their graded Lie algebra, and Zassenhaus splittings.

Exact structure coefficients (``coefficients``), a differential polynomial
ring (``diffpoly``), the algebra of symmetrised terms (``falgebra``),
symmetric BCH/Zassenhaus derivation (``splitting``) and a Fourier
pseudospectral backend for the semiclassical Schrödinger equation
(``spectral``).
"""

from .coefficients import (
    CoeffTable,
    bernoulli,
    gamma_coeff,
    genfun_series,
    l_value,
    lambda_coeff,
    mu_coeff,
    p_r,
    pi_explicit,
    pi_recursive,
    verify_auxiliary_identities,
)
from .diffpoly import DiffPoly
from .errors import CoefficientRangeError, ConfigurationError, DomainError, ParseError, ShapeError
from .expr import expr_derivative, parse_expr
from .falgebra import (
    FTerm,
    Parity,
    ScaledScalar,
    ang,
    assoc_mul,
    commutator,
    fla_reconstruct_check,
    height,
    jordan,
    parity,
    skew_hermitian_check,
)
from .splitting import Splitting, cost, magnus_symbolic, sbch, tdse_hamiltonian, zassenhaus

__version__ = "0.1.0"

__all__ = [
    "CoeffTable", "CoefficientRangeError", "ConfigurationError", "DiffPoly", "DomainError",
    "FTerm", "ParseError", "Parity", "ScaledScalar", "ShapeError", "Splitting", "ang",
    "assoc_mul", "bernoulli", "commutator", "cost", "expr_derivative", "fla_reconstruct_check",
    "gamma_coeff", "genfun_series", "height", "jordan", "l_value", "lambda_coeff",
    "magnus_symbolic", "mu_coeff", "p_r", "parity", "parse_expr", "pi_explicit", "pi_recursive",
    "sbch", "skew_hermitian_check", "tdse_hamiltonian", "verify_auxiliary_identities", "zassenhaus",
]
