"""Exact-arithmetic tools for the matrix equation V'' = V'V and the
bispectral algebra of L = -d^2/dx^2 + V'(x)."""

from .algebra import GaussianRational, MatC, MatLaurent, MatPoly, RatMatZ, DiffOpZ
from .autonomous import (
    build_polynomial_solution,
    canonical_seed,
    check_autonomous,
    make_seed,
    recurse_coefficients,
)
from .bispectral import lambda_residual, membership, synthesize_B

__version__ = "0.1.0"

__all__ = [
    "GaussianRational",
    "MatC",
    "MatLaurent",
    "MatPoly",
    "RatMatZ",
    "DiffOpZ",
    "build_polynomial_solution",
    "canonical_seed",
    "check_autonomous",
    "make_seed",
    "recurse_coefficients",
    "lambda_residual",
    "membership",
    "synthesize_B",
]
