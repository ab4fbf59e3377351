"""Polynomials and truncated Laurent series with MatC coefficients."""

from __future__ import annotations

from typing import Sequence

from ..errors import DimensionMismatch
from .matrix import MatC
from .scalars import ONE, GaussianRational

__all__ = [
    "NEG_INF",
    "MatPoly",
    "MatPolyX",
    "MatLaurent",
    "polyx_derivative",
    "polyx_mul",
    "polyx_commutator",
]

# Degree of the zero polynomial. Kept apart from -1, which is a Laurent index.
NEG_INF = float("-inf")


class MatPoly:
    """Polynomial ``sum_j coeffs[j] * t**j`` with square N x N coefficients.

    Trailing zero coefficients are stripped on construction, so two equal
    polynomials always have identical coefficient tuples.
    """

    __slots__ = ("dim", "coeffs")

    def __init__(self, coeffs: Sequence[MatC], dim: int | None = None):
        coeffs = list(coeffs)
        if dim is None:
            if not coeffs:
                raise ValueError("dimension required for the zero polynomial")
            dim = coeffs[0].n_rows
        for c in coeffs:
            if c.shape != (dim, dim):
                raise DimensionMismatch(f"coefficient of shape {c.shape} in a dim-{dim} polynomial")
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.dim = dim
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, dim: int) -> "MatPoly":
        return cls((), dim)

    @classmethod
    def constant(cls, c: MatC) -> "MatPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, c: MatC, degree: int) -> "MatPoly":
        return cls([MatC.zeros(c.n_rows)] * degree + [c], c.n_rows)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, j: int) -> MatC:
        """Coefficient of t**j, zero outside the stored range (including j < 0)."""
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return MatC.zeros(self.dim)

    def _check(self, other: "MatPoly"):
        if self.dim != other.dim:
            raise DimensionMismatch(f"dim {self.dim} vs {other.dim}")

    def __add__(self, other: "MatPoly") -> "MatPoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return MatPoly([self.coeff(j) + other.coeff(j) for j in range(n)], self.dim)

    def __sub__(self, other: "MatPoly") -> "MatPoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return MatPoly([self.coeff(j) - other.coeff(j) for j in range(n)], self.dim)

    def __neg__(self) -> "MatPoly":
        return MatPoly([-c for c in self.coeffs], self.dim)

    def __mul__(self, other):
        if isinstance(other, MatPoly):
            return polyx_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "MatPoly":
        return MatPoly([m.scale(c) for m in self.coeffs], self.dim)

    def left_mul(self, a: MatC) -> "MatPoly":
        return MatPoly([a @ c for c in self.coeffs], self.dim)

    def right_mul(self, a: MatC) -> "MatPoly":
        return MatPoly([c @ a for c in self.coeffs], self.dim)

    def shift(self, k: int) -> "MatPoly":
        """Multiply by t**k (k >= 0)."""
        if self.is_zero():
            return self
        return MatPoly([MatC.zeros(self.dim)] * k + list(self.coeffs), self.dim)

    def derivative(self) -> "MatPoly":
        return polyx_derivative(self)

    def commutator(self, other: "MatPoly") -> "MatPoly":
        return polyx_commutator(self, other)

    def __call__(self, t) -> MatC:
        t = GaussianRational.coerce(t)
        acc = MatC.zeros(self.dim)
        for c in reversed(self.coeffs):
            acc = acc.scale(t) + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, MatPoly):
            return NotImplemented
        return self.dim == other.dim and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.dim, self.coeffs))

    def __repr__(self):
        return f"MatPoly(dim={self.dim}, degree={self.degree})"


MatPolyX = MatPoly


def polyx_derivative(p: MatPoly) -> MatPoly:
    return MatPoly([p.coeffs[j].scale(j) for j in range(1, len(p.coeffs))], p.dim)


def polyx_mul(p: MatPoly, q: MatPoly) -> MatPoly:
    p._check(q)
    if p.is_zero() or q.is_zero():
        return MatPoly.zero(p.dim)
    out = [MatC.zeros(p.dim) for _ in range(len(p.coeffs) + len(q.coeffs) - 1)]
    for i, a in enumerate(p.coeffs):
        if a.is_zero():
            continue
        for j, b in enumerate(q.coeffs):
            if not b.is_zero():
                out[i + j] = out[i + j] + a @ b
    return MatPoly(out, p.dim)


def polyx_commutator(p: MatPoly, q: MatPoly) -> MatPoly:
    return polyx_mul(p, q) - polyx_mul(q, p)


class MatLaurent:
    """Laurent series ``residue/x + sum_{k=0}^{K} coeffs[k] x**k``.

    ``truncation_order`` is K for a series known only through x**K; ``None``
    marks an exact Laurent polynomial whose missing coefficients are zero.
    """

    __slots__ = ("dim", "residue", "coeffs", "truncation_order")

    def __init__(self, residue: MatC, coeffs: Sequence[MatC], truncation_order: int | None = None):
        dim = residue.n_rows
        if not residue.is_square():
            raise DimensionMismatch("residue must be square")
        coeffs = tuple(coeffs)
        for c in coeffs:
            if c.shape != (dim, dim):
                raise DimensionMismatch("all Laurent coefficients must share the residue's shape")
        if truncation_order is not None and len(coeffs) > truncation_order + 1:
            raise ValueError("more coefficients stored than the truncation order allows")
        self.dim = dim
        self.residue = residue
        self.coeffs = coeffs
        self.truncation_order = truncation_order

    @classmethod
    def exact(cls, residue: MatC, poly: MatPoly | None = None) -> "MatLaurent":
        poly = poly if poly is not None else MatPoly.zero(residue.n_rows)
        return cls(residue, poly.coeffs, None)

    @classmethod
    def from_poly(cls, poly: MatPoly) -> "MatLaurent":
        return cls(MatC.zeros(poly.dim), poly.coeffs, None)

    @property
    def is_exact(self) -> bool:
        return self.truncation_order is None

    @property
    def top(self) -> int:
        """Largest index whose coefficient is known."""
        return len(self.coeffs) - 1 if self.truncation_order is None else self.truncation_order

    def coeff(self, k: int) -> MatC:
        if k < -1:
            return MatC.zeros(self.dim)
        if k == -1:
            return self.residue
        if k < len(self.coeffs):
            return self.coeffs[k]
        if self.truncation_order is not None and k > self.truncation_order:
            raise IndexError(f"coefficient {k} lies beyond truncation order {self.truncation_order}")
        return MatC.zeros(self.dim)

    def polynomial_part(self) -> MatPoly:
        return MatPoly(self.coeffs, self.dim)

    @property
    def degree(self):
        """Degree of the polynomial part."""
        return self.polynomial_part().degree

    def as_exact(self) -> "MatLaurent":
        """Reinterpret as an exact Laurent polynomial (unknown tail set to zero)."""
        return MatLaurent(self.residue, self.polynomial_part().coeffs, None)

    def conjugate(self, s: MatC, s_inv: MatC | None = None) -> "MatLaurent":
        """Return ``S V S^{-1}`` coefficientwise."""
        s_inv = s.inverse() if s_inv is None else s_inv
        return MatLaurent(
            s @ self.residue @ s_inv,
            [s @ c @ s_inv for c in self.coeffs],
            self.truncation_order,
        )

    def __eq__(self, other):
        if not isinstance(other, MatLaurent):
            return NotImplemented
        if self.dim != other.dim or self.residue != other.residue:
            return False
        if self.truncation_order != other.truncation_order:
            return False
        return self.polynomial_part() == other.polynomial_part()

    def __repr__(self):
        return f"MatLaurent(dim={self.dim}, stored={len(self.coeffs)}, K={self.truncation_order})"


def identity_poly(dim: int) -> MatPoly:
    return MatPoly.constant(MatC.scalar(dim, ONE))
