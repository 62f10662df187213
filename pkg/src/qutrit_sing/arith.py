"""Exact scalar arithmetic over Q(i).

Rationals are ``gmpy2.mpq`` values (always reduced, positive denominator).
Gaussian rationals with a nonzero imaginary part are
:class:`GaussianRational`; every operation collapses a result with zero
imaginary part back to a plain ``mpq`` so that each field element has exactly
one representation.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = [
    "mpq",
    "GaussianRational",
    "gauss",
    "to_field",
    "is_exact",
    "to_complex",
    "abs2",
    "conj",
    "parse_rational",
    "format_rational",
    "parse_scalar",
    "format_scalar",
    "ZERO",
    "ONE",
    "I",
]

_MPQ = type(mpq(0))


class GaussianRational:
    """A number ``re + im*i`` with rational parts and ``im != 0``.

    Construct through :func:`gauss`, which returns a plain ``mpq`` when the
    imaginary part vanishes.
    """

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = re
        self.im = im

    def __add__(self, other):
        if type(other) is GaussianRational:
            return _mk(self.re + other.re, self.im + other.im)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re + other, self.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if type(other) is GaussianRational:
            return _mk(self.re - other.re, self.im - other.im)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re - other, self.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(other - self.re, -self.im)

    def __mul__(self, other):
        if type(other) is GaussianRational:
            a, b, c, d = self.re, self.im, other.re, other.im
            return _mk(a * c - b * d, a * d + b * c)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other:
            return mpq(0)
        return GaussianRational(self.re * other, self.im * other)

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if type(other) is GaussianRational:
            return self * other.inverse()
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re / other, self.im / other)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.inverse() * other

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = mpq(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if type(other) is GaussianRational:
            return self.re == other.re and self.im == other.im
        return False

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return True

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({format_rational(self.re)}, {format_rational(self.im)})"

    def __str__(self):
        sign = "+" if self.im > 0 else "-"
        return f"({format_rational(self.re)}{sign}{format_rational(abs(self.im))}*I)"


def _coerce(x):
    t = type(x)
    if t is _MPQ:
        return x
    if t is int or isinstance(x, Rational):
        return mpq(x)
    return NotImplemented


def _mk(re, im):
    if im:
        return GaussianRational(re, im)
    return re


def gauss(re, im=0):
    """Build the field element ``re + im*i`` from rational-like parts."""
    return _mk(mpq(re), mpq(im))


ZERO = mpq(0)
ONE = mpq(1)
I = GaussianRational(mpq(0), mpq(1))


def to_field(x):
    """Coerce ints, Fractions, mpq, rational strings or ``[re, im]`` pairs."""
    t = type(x)
    if t is _MPQ or t is GaussianRational:
        return x
    if t is int or isinstance(x, (Fraction, Rational)):
        return mpq(x)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return gauss(to_field(x[0]), to_field(x[1]))
    if isinstance(x, complex):
        raise TypeError("floating complex values are not exact field elements")
    if isinstance(x, float):
        raise TypeError("floats are not exact field elements")
    raise TypeError(f"cannot interpret {x!r} as an element of Q(i)")


def is_exact(x) -> bool:
    return type(x) is _MPQ or type(x) is GaussianRational or type(x) is int


def to_complex(x) -> complex:
    if type(x) is GaussianRational:
        return complex(float(x.re), float(x.im))
    return complex(x)


def real_part(x):
    return x.re if type(x) is GaussianRational else x


def imag_part(x):
    return x.im if type(x) is GaussianRational else mpq(0)


def conj(x):
    if type(x) is GaussianRational:
        return GaussianRational(x.re, -x.im)
    return x


def abs2(x):
    """Exact squared modulus."""
    if type(x) is GaussianRational:
        return x.re * x.re + x.im * x.im
    return x * x


def parse_rational(s: str):
    s = s.strip()
    if not s:
        raise ValueError("empty rational literal")
    if "/" in s:
        p, q = s.split("/", 1)
        q = int(q)
        if q == 0:
            raise ValueError(f"zero denominator in {s!r}")
        return mpq(int(p), q)
    return mpq(int(s))


def format_rational(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_scalar(obj):
    """Parse a serialized scalar: ``"p/q"``, an int, or ``[re, im]``."""
    if isinstance(obj, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(obj, int):
        return mpq(obj)
    if isinstance(obj, str):
        return parse_rational(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        re, im = obj
        return gauss(parse_scalar(re), parse_scalar(im))
    raise ValueError(f"bad scalar literal {obj!r}")


def format_scalar(x) -> list:
    return [format_rational(real_part(x)), format_rational(imag_part(x))]
