"""Exact scalars: rationals (``int`` / ``Fraction``) and closed rational intervals.

Rationals are plain :class:`fractions.Fraction` values (``int`` is accepted
anywhere a rational is), which are always kept in lowest terms with a
positive denominator. :class:`RationalInterval` adds certified enclosures for
quantities that are only known to lie between two rationals.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import PrecisionError

__all__ = [
    "RationalInterval",
    "Scalar",
    "as_rational",
    "is_interval",
    "parse_scalar",
    "format_scalar",
    "format_decimal",
    "scalar_abs",
    "hull",
]

_SCALAR_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def as_rational(x) -> Fraction:
    """Coerce an int/Fraction to Fraction; reject floats and anything inexact."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class RationalInterval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints.

    Every operation returns an interval containing all pointwise results.
    Instances are immutable and hashable.
    """

    __slots__ = ("_lo", "_hi")

    def __init__(self, lo, hi=None):
        lo = as_rational(lo)
        hi = lo if hi is None else as_rational(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "_lo", lo)
        object.__setattr__(self, "_hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("RationalInterval is immutable")

    @property
    def lo(self) -> Fraction:
        return self._lo

    @property
    def hi(self) -> Fraction:
        return self._hi

    @property
    def width(self) -> Fraction:
        return self._hi - self._lo

    def is_point(self) -> bool:
        return self._lo == self._hi

    def contains(self, x) -> bool:
        if isinstance(x, RationalInterval):
            return self._lo <= x._lo and x._hi <= self._hi
        return self._lo <= x <= self._hi

    __contains__ = contains

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalInterval):
            return other
        if isinstance(other, Rational):
            return RationalInterval(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalInterval(self._lo + other._lo, self._hi + other._hi)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self._hi, -self._lo)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalInterval(self._lo - other._hi, self._hi - other._lo)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, Rational):
            # point factor: endpoints swap for negative scalars
            a, b = self._lo * other, self._hi * other
            return RationalInterval(min(a, b), max(a, b))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        products = (
            self._lo * other._lo,
            self._lo * other._hi,
            self._hi * other._lo,
            self._hi * other._hi,
        )
        return RationalInterval(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other._lo <= 0:
            raise PrecisionError(f"division by interval {other} which is not strictly positive")
        return self * RationalInterval(1 / other._hi, 1 / other._lo)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __abs__(self):
        if self._lo >= 0:
            return self
        if self._hi <= 0:
            return -self
        return RationalInterval(0, max(-self._lo, self._hi))

    def __eq__(self, other):
        if isinstance(other, RationalInterval):
            return self._lo == other._lo and self._hi == other._hi
        return NotImplemented

    def __hash__(self):
        return hash((RationalInterval, self._lo, self._hi))

    def __repr__(self):
        return f"RationalInterval({self._lo}, {self._hi})"

    def __str__(self):
        return f"[{self._lo},{self._hi}]"


Scalar = Union[int, Fraction, RationalInterval]


def is_interval(x) -> bool:
    return isinstance(x, RationalInterval)


def scalar_abs(x):
    return abs(x)


def hull(values):
    """Smallest interval containing every value (rationals or intervals)."""
    los, his = [], []
    for v in values:
        if isinstance(v, RationalInterval):
            los.append(v.lo)
            his.append(v.hi)
        else:
            los.append(as_rational(v))
            his.append(as_rational(v))
    if not los:
        raise ValueError("hull of an empty collection")
    return RationalInterval(min(los), max(his))


def parse_scalar(text: str) -> Fraction:
    """Parse ``-31`` or ``283/100``. Decimals are rejected on purpose."""
    text = text.strip()
    if not _SCALAR_RE.match(text):
        raise ValueError(f"invalid scalar {text!r}: expected an integer or p/q")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ValueError(f"invalid scalar {text!r}: zero denominator")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def _fraction_text(x: Fraction) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_decimal(x, digits: int = 10) -> str:
    """Decimal rendering of a rational, rounded toward zero."""
    x = as_rational(x)
    scaled = abs(x.numerator) * 10**digits // x.denominator
    sign = "-" if x < 0 and scaled != 0 else ""
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def format_scalar(x, *, decimal: bool = False) -> str:
    """Render a scalar in the text syntax used by files and reports.

    Intervals print as ``[lo,hi]`` fraction pairs; with ``decimal=True`` a
    rational gets a ``(~0.1234567890)`` suffix and an interval a
    ``(~lo..hi)`` one, both truncated toward zero.
    """
    if isinstance(x, RationalInterval):
        text = f"[{_fraction_text(x.lo)},{_fraction_text(x.hi)}]"
        if decimal:
            text += f" (~{format_decimal(x.lo)}..{format_decimal(x.hi)})"
        return text
    text = _fraction_text(x)
    if decimal:
        text += f" (~{format_decimal(x)})"
    return text
