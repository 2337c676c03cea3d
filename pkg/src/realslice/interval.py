"""Closed intervals with exact rational endpoints.

No rounding is involved anywhere, so an enclosure computed here is a proof.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import HomPoly, as_fraction


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = as_fraction(lo)
        hi = lo if hi is None else as_fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("Interval is immutable")

    @staticmethod
    def coerce(value) -> "Interval":
        return value if isinstance(value, Interval) else Interval(value)

    def __add__(self, other):
        other = Interval.coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-Interval.coerce(other))

    def __rsub__(self, other):
        return Interval.coerce(other) - self

    def __mul__(self, other):
        other = Interval.coerce(other)
        if self.lo == self.hi and other.lo == other.hi:
            return Interval(self.lo * other.lo)
        prods = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(prods), max(prods))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Interval.coerce(other)
        if other.contains(0):
            raise ZeroDivisionError("divisor interval contains zero")
        return self * Interval(1 / other.hi, 1 / other.lo)

    def __rtruediv__(self, other):
        return Interval.coerce(other) / self

    def __pow__(self, k: int):
        if k == 0:
            return Interval(1)
        lo, hi = self.lo**k, self.hi**k
        if k % 2 == 0:
            if self.lo <= 0 <= self.hi:
                return Interval(0, max(lo, hi))
            return Interval(min(lo, hi), max(lo, hi))
        return Interval(lo, hi)

    def contains(self, value) -> bool:
        if isinstance(value, Interval):
            return self.lo <= value.lo and value.hi <= self.hi
        return self.lo <= value <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def sign(self) -> int:
        """+1 or -1 if the interval excludes zero, else 0."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0

    def __eq__(self, other):
        return isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"

    def as_strings(self) -> list[str]:
        return [str(self.lo), str(self.hi)]


def horner(coeffs: Sequence, x: Interval) -> Interval:
    """Evaluate ``sum coeffs[k] * x^k`` over an interval, centered at the midpoint."""
    if not coeffs:
        return Interval(0)
    m = x.mid
    # Taylor shift to the midpoint keeps enclosures tight on small intervals
    shifted = list(coeffs)
    n = len(shifted)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            shifted[j] = shifted[j] + m * shifted[j + 1]
    delta = Interval(x.lo - m, x.hi - m)
    acc = Interval(shifted[-1])
    for c in reversed(shifted[:-1]):
        acc = acc * delta + c
    return acc


def eval_real_form(p: HomPoly, point: Sequence[Interval]) -> Interval:
    """Interval enclosure of a real form on a box of homogeneous coordinates."""
    total = Interval(0)
    powers = [[Interval(1)] for _ in range(3)]
    for k in range(3):
        for _ in range(p.degree):
            powers[k].append(powers[k][-1] * point[k])
    for (a, b, c), coeff in p.terms:
        total = total + powers[0][a] * powers[1][b] * powers[2][c] * coeff.re
    return total


def det3(a: Sequence, b: Sequence, c: Sequence):
    """det of the 3x3 matrix with columns a, b, c (works for intervals too)."""
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - b[0] * (a[1] * c[2] - a[2] * c[1])
        + c[0] * (a[1] * b[2] - a[2] * b[1])
    )


def dot(a: Sequence, b: Sequence):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
