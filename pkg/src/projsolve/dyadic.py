"""Exact dyadic (binary-rational) numbers, intervals, and complex boxes.

A dyadic value is ``man * 2**exp`` with an arbitrary-precision integer
mantissa.  Sums and products of dyadics are again dyadic, so interval
arithmetic here is exact; rounding only happens when an operation is
explicitly asked to round outward to a working precision (division,
square roots).  All values are immutable and all operations are pure,
so everything in this module can be shared freely across threads.

Precision parameters are bit counts throughout: "quality q" means an
absolute error below ``2**-q``.  Refine-until loops double the working
precision on every round.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Optional

from .errors import RefinementError

__all__ = [
    "Dyadic",
    "DyadicInterval",
    "ComplexBox",
    "BitMagnitude",
    "interval_add",
    "interval_mul",
    "interval_neg",
    "interval_div",
    "interval_sqrt",
    "abs_interval",
    "bit_magnitude",
    "ZERO",
    "ONE",
]


@dataclass(frozen=True, slots=True)
class Dyadic:
    """man * 2**exp in canonical form: mantissa odd or zero, zero has exp 0."""

    man: int
    exp: int = 0

    def __post_init__(self):
        m, e = self.man, self.exp
        if m == 0:
            e = 0
        else:
            shift = (m & -m).bit_length() - 1
            if shift:
                m >>= shift
                e += shift
        object.__setattr__(self, "man", m)
        object.__setattr__(self, "exp", e)

    @classmethod
    def from_int(cls, n: int) -> "Dyadic":
        return cls(n, 0)

    def is_zero(self) -> bool:
        return self.man == 0

    def sign(self) -> int:
        return (self.man > 0) - (self.man < 0)

    def __add__(self, other: "Dyadic") -> "Dyadic":
        if self.man == 0:
            return other
        if other.man == 0:
            return self
        if self.exp >= other.exp:
            return Dyadic((self.man << (self.exp - other.exp)) + other.man, other.exp)
        return Dyadic(self.man + (other.man << (other.exp - self.exp)), self.exp)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.man, self.exp)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        return Dyadic(self.man * other.man, self.exp + other.exp)

    def scale2(self, k: int) -> "Dyadic":
        """Multiply by 2**k."""
        if self.man == 0:
            return self
        return Dyadic(self.man, self.exp + k)

    def _cmp(self, other: "Dyadic") -> int:
        d = self - other
        return d.sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def floor_to(self, precision: int) -> "Dyadic":
        """Largest multiple of 2**-precision that is <= self."""
        shift = self.exp + precision
        if shift >= 0:
            return self
        return Dyadic(self.man >> -shift, -precision)

    def ceil_to(self, precision: int) -> "Dyadic":
        shift = self.exp + precision
        if shift >= 0:
            return self
        return Dyadic(-((-self.man) >> -shift), -precision)

    def floor_log2(self) -> int:
        """Largest k with 2**k <= self; requires self > 0."""
        if self.man <= 0:
            raise ValueError("floor_log2 requires a positive value")
        return self.man.bit_length() - 1 + self.exp

    def to_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.man << self.exp)
        return Fraction(self.man, 1 << -self.exp)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "Dyadic":
        den = q.denominator
        if den & (den - 1):
            raise ValueError("fraction is not dyadic")
        return cls(q.numerator, -(den.bit_length() - 1))

    def __str__(self) -> str:
        return f"{self.man}*2^{self.exp}"

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        man, _, exp = text.partition("*2^")
        return cls(int(man), int(exp) if exp else 0)

    def __float__(self) -> float:
        return self.man * 2.0 ** self.exp


ZERO = Dyadic(0)
ONE = Dyadic(1)


def sqrt_floor(x: Dyadic, precision: int) -> Dyadic:
    """Largest multiple of 2**-precision whose square is <= x; x >= 0."""
    if x.man < 0:
        raise ValueError("sqrt of a negative value")
    shift = x.exp + 2 * precision
    n = x.man << shift if shift >= 0 else x.man >> -shift
    return Dyadic(isqrt(n), -precision)


def sqrt_ceil(x: Dyadic, precision: int) -> Dyadic:
    if x.man < 0:
        raise ValueError("sqrt of a negative value")
    shift = x.exp + 2 * precision
    n = x.man << shift if shift >= 0 else -((-x.man) >> -shift)
    r = isqrt(n)
    if r * r != n:
        r += 1
    return Dyadic(r, -precision)


# The quantity B_x = ceil(log2 max(1,x)) + ceil(log2 max(1,1/x)).  It is 0
# exactly for x = 1 and measures how many bits are needed to locate x on a
# logarithmic scale; exact for dyadic input.
BitMagnitude = int


def bit_magnitude(x) -> BitMagnitude:
    """B_x for a positive Dyadic, or conservatively for an interval with lo > 0."""
    if isinstance(x, DyadicInterval):
        if x.lo.man <= 0:
            raise ValueError("bit_magnitude of an interval requires lo > 0")
        return max(bit_magnitude(x.lo), bit_magnitude(x.hi))
    if x.man <= 0:
        raise ValueError("bit_magnitude requires a positive value")
    fl = x.floor_log2()
    ceil_log = fl if x.man == 1 else fl + 1
    ceil_log_inv = -fl
    return max(0, ceil_log) + max(0, ceil_log_inv)


@dataclass(frozen=True, slots=True)
class DyadicInterval:
    """Closed interval [lo, hi] with dyadic endpoints."""

    lo: Dyadic
    hi: Dyadic

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")

    @classmethod
    def point(cls, x) -> "DyadicInterval":
        d = x if isinstance(x, Dyadic) else Dyadic(x)
        return cls(d, d)

    def __add__(self, other: "DyadicInterval") -> "DyadicInterval":
        return DyadicInterval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "DyadicInterval") -> "DyadicInterval":
        return self + (-other)

    def __neg__(self) -> "DyadicInterval":
        return DyadicInterval(-self.hi, -self.lo)

    def __mul__(self, other: "DyadicInterval") -> "DyadicInterval":
        products = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ]
        return DyadicInterval(min(products), max(products))

    def scale_int(self, k: int) -> "DyadicInterval":
        d = Dyadic(k)
        if k >= 0:
            return DyadicInterval(self.lo * d, self.hi * d)
        return DyadicInterval(self.hi * d, self.lo * d)

    def square(self) -> "DyadicInterval":
        if self.lo.man >= 0:
            return DyadicInterval(self.lo * self.lo, self.hi * self.hi)
        if self.hi.man <= 0:
            return DyadicInterval(self.hi * self.hi, self.lo * self.lo)
        return DyadicInterval(ZERO, max(self.lo * self.lo, self.hi * self.hi))

    def contains_zero(self) -> bool:
        return self.lo.man <= 0 <= self.hi.man

    def contains(self, x: Dyadic) -> bool:
        return self.lo <= x <= self.hi

    def contains_fraction(self, q: Fraction) -> bool:
        return self.lo.to_fraction() <= q <= self.hi.to_fraction()

    def width(self) -> Dyadic:
        return self.hi - self.lo

    def midpoint(self) -> Dyadic:
        return (self.lo + self.hi).scale2(-1)

    def round_outward(self, precision: int) -> "DyadicInterval":
        return DyadicInterval(self.lo.floor_to(precision), self.hi.ceil_to(precision))

    def strictly_positive(self) -> bool:
        return self.lo.man > 0


def interval_add(a: DyadicInterval, b: DyadicInterval) -> DyadicInterval:
    return a + b


def interval_mul(a: DyadicInterval, b: DyadicInterval) -> DyadicInterval:
    return a * b


def interval_neg(a: DyadicInterval) -> DyadicInterval:
    return -a


def _div_dir(a: Dyadic, b: Dyadic, precision: int, toward: int) -> Dyadic:
    """a/b rounded to a multiple of 2**-precision; toward=-1 floors, +1 ceils. b > 0."""
    # a/b * 2^precision = a.man * 2^(a.exp - b.exp + precision) / b.man
    shift = a.exp - b.exp + precision
    if shift >= 0:
        num, den = a.man << shift, b.man
    else:
        num, den = a.man, b.man << -shift
    q = num // den if toward < 0 else -((-num) // den)
    return Dyadic(q, -precision)


def interval_div(a: DyadicInterval, b: DyadicInterval, precision: int) -> DyadicInterval:
    """Enclosure of a/b rounded outward; requires 0 not in b."""
    if b.contains_zero():
        raise ZeroDivisionError("interval divisor contains zero")
    if b.lo.man < 0:
        return -interval_div(a, -b, precision)
    candidates_lo = min(
        _div_dir(a.lo, b.lo, precision, -1),
        _div_dir(a.lo, b.hi, precision, -1),
        _div_dir(a.hi, b.lo, precision, -1),
        _div_dir(a.hi, b.hi, precision, -1),
    )
    candidates_hi = max(
        _div_dir(a.lo, b.lo, precision, +1),
        _div_dir(a.lo, b.hi, precision, +1),
        _div_dir(a.hi, b.lo, precision, +1),
        _div_dir(a.hi, b.hi, precision, +1),
    )
    return DyadicInterval(candidates_lo, candidates_hi)


def interval_sqrt(a: DyadicInterval, precision: int) -> DyadicInterval:
    """Enclosure of sqrt on [max(lo,0), hi], rounded outward."""
    lo = a.lo if a.lo.man > 0 else ZERO
    return DyadicInterval(sqrt_floor(lo, precision), sqrt_ceil(a.hi, precision))


@dataclass(frozen=True, slots=True)
class ComplexBox:
    """Axis-aligned box in the complex plane; the concrete form of an
    isolating disk (a disk of radius r becomes a box of half-width r)."""

    re: DyadicInterval
    im: DyadicInterval

    @classmethod
    def point(cls, re, im=0) -> "ComplexBox":
        return cls(DyadicInterval.point(re), DyadicInterval.point(im))

    def __add__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ComplexBox":
        return ComplexBox(-self.re, -self.im)

    def __mul__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def scale_int(self, k: int) -> "ComplexBox":
        return ComplexBox(self.re.scale_int(k), self.im.scale_int(k))

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def contains_point(self, re: Fraction, im: Fraction = Fraction(0)) -> bool:
        return self.re.contains_fraction(re) and self.im.contains_fraction(im)

    def half_width(self) -> Dyadic:
        return max(self.re.width(), self.im.width()).scale2(-1)

    def midpoint(self) -> tuple[Dyadic, Dyadic]:
        return self.re.midpoint(), self.im.midpoint()

    def round_outward(self, precision: int) -> "ComplexBox":
        return ComplexBox(self.re.round_outward(precision), self.im.round_outward(precision))

    def abs_square(self) -> DyadicInterval:
        return self.re.square() + self.im.square()

    def intersects(self, other: "ComplexBox") -> bool:
        return not (
            self.re.hi < other.re.lo
            or other.re.hi < self.re.lo
            or self.im.hi < other.im.lo
            or other.im.hi < self.im.lo
        )


def abs_interval(
    z: ComplexBox,
    quality: int,
    refine: Optional[Callable[[int], ComplexBox]] = None,
) -> DyadicInterval:
    """Interval containing |w| for every w in the box, of width < 2**-quality.

    If the box is too wide for the target, ``refine`` is called with an
    absolute quality (doubling each round) and must return a tighter box
    for the same underlying point; without a callback this signals
    RefinementError.
    """
    if quality < 0:
        raise ValueError("quality must be nonnegative")
    target = Dyadic(1, -quality)
    box = z
    request = max(8, quality + 2)
    while True:
        enclosure = interval_sqrt(box.abs_square(), quality + 2)
        if enclosure.width() < target:
            return enclosure
        if refine is None:
            raise RefinementError(
                "box too wide for requested modulus quality and no refinement available"
            )
        box = refine(request)
        request *= 2
