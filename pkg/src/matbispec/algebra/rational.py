"""Scalar polynomials in z and matrix-valued rational functions of z."""

from __future__ import annotations

from typing import Sequence

from ..errors import DimensionMismatch
from .matrix import MatC
from .polynomials import NEG_INF, MatPoly
from .scalars import ONE, ZERO, GaussianRational

__all__ = ["ScalarPolyZ", "RatMatZ", "DiffOpZ", "poly_gcd"]


class ScalarPolyZ:
    """Polynomial over Q(i); ``coeffs[j]`` multiplies z**j."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = [GaussianRational.coerce(v) for v in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def z_power(cls, k: int) -> "ScalarPolyZ":
        return cls([ZERO] * k + [ONE])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> GaussianRational:
        return self.coeffs[-1] if self.coeffs else ZERO

    def coeff(self, j: int) -> GaussianRational:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else ZERO

    def __add__(self, other: "ScalarPolyZ") -> "ScalarPolyZ":
        n = max(len(self.coeffs), len(other.coeffs))
        return ScalarPolyZ([self.coeff(j) + other.coeff(j) for j in range(n)])

    def __sub__(self, other: "ScalarPolyZ") -> "ScalarPolyZ":
        n = max(len(self.coeffs), len(other.coeffs))
        return ScalarPolyZ([self.coeff(j) - other.coeff(j) for j in range(n)])

    def __mul__(self, other):
        if not isinstance(other, ScalarPolyZ):
            c = GaussianRational.coerce(other)
            return ScalarPolyZ([c * a for a in self.coeffs])
        if self.is_zero() or other.is_zero():
            return ScalarPolyZ()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return ScalarPolyZ(out)

    __rmul__ = __mul__

    def divmod(self, other: "ScalarPolyZ") -> tuple["ScalarPolyZ", "ScalarPolyZ"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        inv = other.lead().inverse()
        quot = [ZERO] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            f = rem[k] * inv
            if not f:
                continue
            quot[k - dq] = f
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] = rem[k - dq + j] - f * b
        return ScalarPolyZ(quot), ScalarPolyZ(rem[:dq])

    def exact_div(self, other: "ScalarPolyZ") -> "ScalarPolyZ":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self) -> "ScalarPolyZ":
        if self.is_zero():
            return self
        inv = self.lead().inverse()
        return ScalarPolyZ([inv * a for a in self.coeffs])

    def __call__(self, z) -> GaussianRational:
        z = GaussianRational.coerce(z)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, ScalarPolyZ):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"ScalarPolyZ({[str(c) for c in self.coeffs]})"


def poly_gcd(a: ScalarPolyZ, b: ScalarPolyZ) -> ScalarPolyZ:
    """Monic gcd by the Euclidean algorithm (gcd(0, 0) = 0)."""
    a, b = a.monic(), b.monic()
    while not b.is_zero():
        a, b = b, a.divmod(b)[1].monic()
    return a


def _entry_poly(num: MatPoly, i: int, j: int) -> ScalarPolyZ:
    return ScalarPolyZ([c.rows[i][j] for c in num.coeffs])


def _from_entry_polys(polys: list[list[ScalarPolyZ]], dim: int) -> MatPoly:
    top = max((len(p.coeffs) for row in polys for p in row), default=0)
    coeffs = []
    for d in range(top):
        coeffs.append(MatC([[p.coeff(d) for p in row] for row in polys], dim))
    return MatPoly(coeffs, dim)


class RatMatZ:
    """Matrix rational function ``numerator(z) / denominator(z)``.

    The denominator is a scalar monic polynomial, and the pair is reduced
    by the gcd of the denominator with every numerator entry. With this
    normalization equal functions have identical representations.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: MatPoly, denominator: ScalarPolyZ | None = None):
        den = denominator if denominator is not None else ScalarPolyZ([ONE])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.numerator, self.denominator = _reduce(numerator, den)

    @classmethod
    def constant(cls, m: MatC) -> "RatMatZ":
        return cls(MatPoly.constant(m))

    @classmethod
    def zero(cls, dim: int) -> "RatMatZ":
        return cls(MatPoly.zero(dim))

    @property
    def dim(self) -> int:
        return self.numerator.dim

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def _combine(self, other: "RatMatZ", sign: int) -> "RatMatZ":
        if self.dim != other.dim:
            raise DimensionMismatch(f"dim {self.dim} vs {other.dim}")
        if self.denominator == other.denominator:
            num = self.numerator + other.numerator if sign > 0 else self.numerator - other.numerator
            return RatMatZ(num, self.denominator)
        g = poly_gcd(self.denominator, other.denominator)
        fa = other.denominator.exact_div(g)
        fb = self.denominator.exact_div(g)
        na = _scalar_poly_times(fa, self.numerator)
        nb = _scalar_poly_times(fb, other.numerator)
        num = na + nb if sign > 0 else na - nb
        return RatMatZ(num, self.denominator * fa)

    def __add__(self, other: "RatMatZ") -> "RatMatZ":
        return self._combine(other, +1)

    def __sub__(self, other: "RatMatZ") -> "RatMatZ":
        return self._combine(other, -1)

    def __neg__(self) -> "RatMatZ":
        return RatMatZ(-self.numerator, self.denominator)

    def left_mul(self, a: MatC) -> "RatMatZ":
        return RatMatZ(self.numerator.left_mul(a), self.denominator)

    def right_mul(self, a: MatC) -> "RatMatZ":
        return RatMatZ(self.numerator.right_mul(a), self.denominator)

    def scale(self, c) -> "RatMatZ":
        return RatMatZ(self.numerator.scale(c), self.denominator)

    def times_z(self, k: int = 1) -> "RatMatZ":
        return RatMatZ(self.numerator.shift(k), self.denominator)

    def has_limit_at_infinity(self) -> bool:
        return self.numerator.degree <= self.denominator.degree

    def limit_at_infinity(self) -> MatC:
        """Value at z = infinity; requires deg numerator <= deg denominator."""
        if not self.has_limit_at_infinity():
            raise ValueError("rational function has a pole at infinity")
        return self.numerator.coeff(self.denominator.degree)

    def __call__(self, z) -> MatC:
        d = self.denominator(z)
        return self.numerator(z).scale(d.inverse())

    def __eq__(self, other):
        if not isinstance(other, RatMatZ):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __repr__(self):
        return f"RatMatZ(num_deg={self.numerator.degree}, den={self.denominator!r})"


def _scalar_poly_times(p: ScalarPolyZ, num: MatPoly) -> MatPoly:
    if p.is_zero() or num.is_zero():
        return MatPoly.zero(num.dim)
    out = [MatC.zeros(num.dim) for _ in range(len(p.coeffs) + len(num.coeffs) - 1)]
    for i, a in enumerate(p.coeffs):
        if a:
            for j, m in enumerate(num.coeffs):
                out[i + j] = out[i + j] + m.scale(a)
    return MatPoly(out, num.dim)


def _reduce(num: MatPoly, den: ScalarPolyZ) -> tuple[MatPoly, ScalarPolyZ]:
    if num.is_zero():
        return num, ScalarPolyZ([ONE])
    n = num.dim
    lead = den.lead()
    if den.degree == 0:
        if lead == ONE:
            return num, den
        return num.scale(lead.inverse()), ScalarPolyZ([ONE])
    if all(not c for c in den.coeffs[:-1]):
        # den = lead * z^d: the gcd is the largest power of z dividing everything
        low = next(i for i, c in enumerate(num.coeffs) if not c.is_zero())
        shift = min(low, den.degree)
        inv = lead.inverse()
        return MatPoly([c.scale(inv) for c in num.coeffs[shift:]], n), ScalarPolyZ.z_power(den.degree - shift)
    entries = [[_entry_poly(num, i, j) for j in range(n)] for i in range(n)]
    g = den
    for row in entries:
        for p in row:
            if not p.is_zero():
                g = poly_gcd(g, p)
                if g.degree == 0:
                    break
        if g.degree == 0:
            break
    # fold the leading coefficient of den into g so the reduced denominator is monic
    g = g.monic() * den.lead()
    if g.degree == 0 and g.lead() == ONE:
        return num, den
    den_r = den.exact_div(g)
    entries = [[p.exact_div(g) for p in row] for row in entries]
    return _from_entry_polys(entries, n), den_r


class DiffOpZ:
    """Right-acting operator ``psi B = sum_j d^j psi / dz^j * b_j(z)``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[RatMatZ]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("an operator needs at least b_0")
        dim = coeffs[0].dim
        if any(c.dim != dim for c in coeffs):
            raise DimensionMismatch("operator coefficients of differing dimension")
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def dim(self) -> int:
        return self.coeffs[0].dim

    def coeff(self, j: int) -> RatMatZ:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return RatMatZ.zero(self.dim)

    def replace(self, j: int, b: RatMatZ) -> "DiffOpZ":
        c = list(self.coeffs)
        c[j] = b
        return DiffOpZ(c)

    def __eq__(self, other):
        if not isinstance(other, DiffOpZ):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self):
        return f"DiffOpZ(order={self.order}, dim={self.dim})"
