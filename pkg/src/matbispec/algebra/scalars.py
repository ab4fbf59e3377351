"""Exact complex rationals a + b*i over Q(i)."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["GaussianRational", "GR", "ZERO", "ONE", "I"]

_FZERO = Fraction(0)


def _new(re: Fraction, im: Fraction) -> "GaussianRational":
    obj = object.__new__(GaussianRational)
    obj.re = re
    obj.im = im
    return obj


def _parse_fraction(text: str) -> Fraction:
    text = text.strip()
    num, sep, den = text.partition("/")
    if sep and not den:
        raise ValueError(f"malformed rational {text!r}")
    # only decimal integers are accepted, never floats
    value = Fraction(int(num), int(den)) if sep else Fraction(int(num))
    return value


class GaussianRational:
    """Gaussian rational ``re + im*i`` with both parts as reduced Fractions.

    Instances are treated as immutable. Arithmetic mixes freely with ints and
    Fractions; floats are rejected so nothing is ever rounded.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _coerce_part(re)
        self.im = _coerce_part(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact")
        return _new(_coerce_part(value), _FZERO)

    @classmethod
    def parse(cls, re: str, im: str = "0") -> "GaussianRational":
        return _new(_parse_fraction(re), _parse_fraction(im))

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return _new(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return _new(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return _new(other.re - self.re, other.im - self.im)

    def __mul__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return _new(a * c, _FZERO)
        return _new(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __neg__(self):
        return _new(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> "GaussianRational":
        if not self.im:
            if not self.re:
                raise ZeroDivisionError("division by zero in Q(i)")
            return _new(1 / self.re, _FZERO)
        n = self.abs2()
        return _new(self.re / n, -self.im / n)

    def conjugate(self) -> "GaussianRational":
        return _new(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared modulus, always an exact rational."""
        return self.re * self.re + self.im * self.im

    # comparisons ----------------------------------------------------------

    def __eq__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


def _coerce_part(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return _parse_fraction(value)
    raise TypeError(f"cannot build an exact rational from {type(value).__name__}")


def _maybe(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, Fraction):
        return _new(value, _FZERO)
    if isinstance(value, int):
        return _new(Fraction(value), _FZERO)
    if isinstance(value, Rational):
        return _new(Fraction(value), _FZERO)
    return None


GR = GaussianRational
ZERO = _new(Fraction(0), Fraction(0))
ONE = _new(Fraction(1), Fraction(0))
I = _new(Fraction(0), Fraction(1))
