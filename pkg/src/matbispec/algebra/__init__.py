"""Exact ring tower: Q(i) scalars, dense matrices, polynomials, rational functions."""

from .matrix import MatC, frobenius_norm_sq, mat_add, mat_mul, mat_scale
from .polynomials import (
    NEG_INF,
    MatLaurent,
    MatPoly,
    MatPolyX,
    polyx_commutator,
    polyx_derivative,
    polyx_mul,
)
from .rational import DiffOpZ, RatMatZ, ScalarPolyZ, poly_gcd
from .resolvent import charpoly, resolvent_solve
from .scalars import GR, ONE, ZERO, GaussianRational, I

__all__ = [
    "GR",
    "GaussianRational",
    "I",
    "ONE",
    "ZERO",
    "MatC",
    "mat_add",
    "mat_mul",
    "mat_scale",
    "frobenius_norm_sq",
    "NEG_INF",
    "MatPoly",
    "MatPolyX",
    "MatLaurent",
    "polyx_derivative",
    "polyx_mul",
    "polyx_commutator",
    "ScalarPolyZ",
    "RatMatZ",
    "DiffOpZ",
    "poly_gcd",
    "charpoly",
    "resolvent_solve",
]
