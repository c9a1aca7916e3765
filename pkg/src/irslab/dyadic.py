"""Exact dyadic rationals and certified interval enclosures.

Every probability handled by the engine is either an exact dyadic
(numerator over a power of two, kept in lowest terms) or a certified
enclosure [lo, hi] whose endpoints are dyadic and which provably contains
the true value.  Infinite products are enclosed with the tail inequality

    prod_{i>I} (1 - x_i)  >=  1 - sum_{i>I} x_i,

which keeps every bound inside dyadic arithmetic; no floating point or
logarithms enter any certified quantity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Union


class Dyadic:
    """num / 2**exp in lowest terms (num odd, or exp == 0)."""

    __slots__ = ("num", "exp")

    def __init__(self, num: int, exp: int = 0):
        if exp < 0:
            num <<= -exp
            exp = 0
        while exp > 0 and num % 2 == 0:
            num //= 2
            exp -= 1
        self.num = num
        self.exp = exp

    @classmethod
    def _raw(cls, num: int, exp: int) -> "Dyadic":
        d = object.__new__(cls)
        d.num = num
        d.exp = exp
        return d

    @classmethod
    def from_fraction(cls, f: Fraction) -> "Dyadic":
        den = f.denominator
        e = den.bit_length() - 1
        if den != (1 << e):
            raise ValueError("%s is not dyadic" % (f,))
        return cls._raw(f.numerator, e) if f.numerator % 2 or e == 0 else cls(f.numerator, e)

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Accepts 'num/2^exp', 'p/q' with q a power of two, a decimal
        string with dyadic value, or a plain integer."""
        text = text.strip()
        if "/" in text:
            num_str, den_str = text.split("/", 1)
            num = int(num_str)
            if den_str.startswith("2^"):
                return cls(num, int(den_str[2:]))
            den = int(den_str)
            if den <= 0 or den & (den - 1):
                raise ValueError("denominator of %r is not a power of two" % (text,))
            return cls(num, den.bit_length() - 1)
        if "." in text or "e" in text or "E" in text:
            return cls.from_fraction(Fraction(text))
        return cls(int(text))

    def is_zero(self) -> bool:
        return self.num == 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def as_float(self) -> float:
        return float(self.as_fraction())

    def __add__(self, o: "Dyadic") -> "Dyadic":
        e = max(self.exp, o.exp)
        return Dyadic((self.num << (e - self.exp)) + (o.num << (e - o.exp)), e)

    def __sub__(self, o: "Dyadic") -> "Dyadic":
        e = max(self.exp, o.exp)
        return Dyadic((self.num << (e - self.exp)) - (o.num << (e - o.exp)), e)

    def __mul__(self, o: "Dyadic") -> "Dyadic":
        return Dyadic(self.num * o.num, self.exp + o.exp)

    def __neg__(self) -> "Dyadic":
        return Dyadic._raw(-self.num, self.exp)

    def __abs__(self) -> "Dyadic":
        return Dyadic._raw(abs(self.num), self.exp)

    def _cmp(self, o: "Dyadic") -> int:
        lhs = self.num << o.exp
        rhs = o.num << self.exp
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, o) -> bool:
        return isinstance(o, Dyadic) and self.num == o.num and self.exp == o.exp

    def __lt__(self, o) -> bool:
        return self._cmp(o) < 0

    def __le__(self, o) -> bool:
        return self._cmp(o) <= 0

    def __gt__(self, o) -> bool:
        return self._cmp(o) > 0

    def __ge__(self, o) -> bool:
        return self._cmp(o) >= 0

    def __hash__(self) -> int:
        return hash(self.as_fraction())

    def __str__(self) -> str:
        return "%d/2^%d" % (self.num, self.exp)

    def __repr__(self) -> str:
        return "Dyadic(%d, %d)" % (self.num, self.exp)

    def halve(self) -> "Dyadic":
        return Dyadic(self.num, self.exp + 1)

    def round_down(self, bits: int) -> "Dyadic":
        """Largest multiple of 2^-bits that is <= self."""
        if self.exp <= bits:
            return self
        return Dyadic(self.num >> (self.exp - bits), bits)

    def round_up(self, bits: int) -> "Dyadic":
        """Smallest multiple of 2^-bits that is >= self."""
        if self.exp <= bits:
            return self
        return Dyadic(-((-self.num) >> (self.exp - bits)), bits)


ZERO = Dyadic(0)
ONE = Dyadic(1)
HALF = Dyadic(1, 1)


def pow2(k: int) -> Dyadic:
    """2^-k."""
    return Dyadic(1, k)


def one_minus_pow2(k) -> Dyadic:
    """1 - 2^-k for k >= 1; math.inf maps to 1."""
    if k is math.inf:
        return ONE
    if k < 1:
        raise ValueError("exponent must be >= 1 or inf, got %r" % (k,))
    return Dyadic((1 << k) - 1, k)


def parse_target_width(text: str) -> Dyadic:
    """Width targets need not be dyadic; non-dyadic requests are tightened
    to the largest power of two below them."""
    try:
        f = Dyadic.parse(text).as_fraction()
    except ValueError:
        f = Fraction(text)
    if f <= 0:
        raise ValueError("target width must be positive")
    den = f.denominator
    e = den.bit_length() - 1
    if den == (1 << e):
        return Dyadic(f.numerator, e)
    k = 0
    while Fraction(1, 1 << k) > f:
        k += 1
    return pow2(k)


@dataclass(frozen=True)
class Interval:
    """Closed interval with dyadic endpoints; the true value lies inside."""

    lo: Dyadic
    hi: Dyadic

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")

    def width(self) -> Dyadic:
        return self.hi - self.lo

    def midpoint(self) -> Dyadic:
        return (self.lo + self.hi).halve()

    def contains(self, x) -> bool:
        if isinstance(x, Dyadic):
            return self.lo <= x <= self.hi
        f = Fraction(x)
        return self.lo.as_fraction() <= f <= self.hi.as_fraction()

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, o: "Interval") -> "Interval":
        return Interval(self.lo + o.lo, self.hi + o.hi)

    def __sub__(self, o: "Interval") -> "Interval":
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __mul__(self, o: "Interval") -> "Interval":
        if self.lo < ZERO or o.lo < ZERO:
            raise ValueError("interval product only defined for nonnegative intervals")
        return Interval(self.lo * o.lo, self.hi * o.hi)

    def abs(self) -> "Interval":
        if self.lo >= ZERO:
            return self
        if self.hi <= ZERO:
            return Interval(-self.hi, -self.lo)
        m = -self.lo
        return Interval(ZERO, m if m > self.hi else self.hi)

    def to_json(self) -> dict:
        return {
            "lo": str(self.lo),
            "hi": str(self.hi),
            "lo_approx": self.lo.as_float(),
            "hi_approx": self.hi.as_float(),
        }


@dataclass(frozen=True)
class Exact:
    """An exactly known probability."""

    value: Dyadic

    @property
    def lo(self) -> Dyadic:
        return self.value

    @property
    def hi(self) -> Dyadic:
        return self.value

    @property
    def width_reached(self) -> bool:
        return True

    def width(self) -> Dyadic:
        return ZERO

    def midpoint(self) -> Dyadic:
        return self.value

    def interval(self) -> Interval:
        return Interval(self.value, self.value)

    def is_exact(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {"exact": str(self.value), "approx": self.value.as_float()}


@dataclass(frozen=True)
class Enclosure:
    """A certified interval enclosure of a probability.

    width_reached is False when a factor cap stopped refinement before the
    requested width; the enclosure is still sound.
    """

    lo: Dyadic
    hi: Dyadic
    width_reached: bool = True

    def width(self) -> Dyadic:
        return self.hi - self.lo

    def midpoint(self) -> Dyadic:
        return (self.lo + self.hi).halve()

    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    def is_exact(self) -> bool:
        return False

    def to_json(self) -> dict:
        d = self.interval().to_json()
        d["width_reached"] = self.width_reached
        return d


ProbabilityValue = Union[Exact, Enclosure]


def value_from_json(d: dict) -> ProbabilityValue:
    if "exact" in d:
        return Exact(Dyadic.parse(d["exact"]))
    return Enclosure(
        Dyadic.parse(d["lo"]), Dyadic.parse(d["hi"]), bool(d.get("width_reached", True))
    )


def certified_product(
    factors: Iterable[Dyadic],
    tail_bound: Callable[[int], Dyadic],
    target_width: Dyadic,
    factor_cap: int = 10**6,
) -> ProbabilityValue:
    """Enclose an infinite product of factors in [0, 1].

    tail_bound(I) must be a certified upper bound on
    sum_{i > I} (1 - factor_i), nonincreasing in I.  After I factors the
    product lies in [P_I * (1 - tail), P_I]; refinement continues until
    the width drops to target_width, the tail vanishes (exact value), or
    the factor cap binds (flagged, still sound).

    Partial products are kept exact internally; the returned endpoints are
    rounded outward to a precision far below the target width so reports
    stay compact.
    """
    it = iter(factors)
    prod = ONE
    count = 0
    bits = target_width.exp + 64

    def enclose(tb: Dyadic, reached: bool) -> Enclosure:
        lo = (prod * (ONE - tb)).round_down(bits)
        hi = prod.round_up(bits)
        if lo < ZERO:
            lo = ZERO
        return Enclosure(lo, hi, reached)

    while True:
        tb = tail_bound(count)
        if tb > ONE:
            tb = ONE
        if tb.is_zero():
            return Exact(prod)
        width = prod * tb + pow2(bits - 1)
        if width <= target_width:
            return enclose(tb, True)
        if count >= factor_cap:
            return enclose(tb, False)
        f = next(it, None)
        if f is None:
            return enclose(tb, width <= target_width)
        if f < ZERO or f > ONE:
            raise ValueError("product factor %s outside [0, 1]" % (f,))
        if f.is_zero():
            return Exact(ZERO)
        if f != ONE:
            prod = prod * f
        count += 1
