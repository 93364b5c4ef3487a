"""Exact-rational interval arithmetic.

Every endpoint is a :class:`fractions.Fraction`; no floating point is used
anywhere.  Transcendental enclosures (pi, ln, sqrt) are computed in binary
fixed point with directed integer rounding, so the only outward-rounding
sites are the floor/ceil steps and the series tail bounds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import (
    DivisionByIntervalContainingZero,
    Indeterminate,
    NegativeInput,
    NonpositiveInput,
)

Rational = Union[int, Fraction]

DEFAULT_MAX_REFINEMENTS = 20


@dataclass(frozen=True)
class Precision:
    """Requested absolute enclosure width plus a cap on refinement rounds."""

    target_width: Fraction = Fraction(1, 10**30)
    max_refinements: int = DEFAULT_MAX_REFINEMENTS

    def __post_init__(self):
        object.__setattr__(self, "target_width", Fraction(self.target_width))
        if self.target_width <= 0:
            raise ValueError("target_width must be positive")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be positive")

    @classmethod
    def from_digits(cls, digits: int, max_refinements: int = DEFAULT_MAX_REFINEMENTS) -> Precision:
        return cls(Fraction(1, 10**digits), max_refinements)

    @property
    def bits(self) -> int:
        """Smallest b with 2^-b <= target_width."""
        w = self.target_width
        b = w.denominator.bit_length() - w.numerator.bit_length()
        while Fraction(1, 2**b) > w:
            b += 1
        return max(b, 1)

    @property
    def digits(self) -> int:
        w = self.target_width
        d = len(str(w.denominator)) - len(str(w.numerator))
        return max(d, 1)

    def refined(self) -> Precision:
        """Square the width (double the digits)."""
        w = self.target_width
        if w >= 1:
            w = Fraction(1, 10)
        return Precision(w * w, self.max_refinements)

    def schedule(self):
        """Yield this precision followed by successive refinements."""
        p = self
        for _ in range(self.max_refinements):
            yield p
            p = p.refined()


class Verdict(str, enum.Enum):
    LESS = "Less"
    GREATER = "Greater"
    OVERLAP = "Overlap"


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _frac(self.lo))
        object.__setattr__(self, "hi", _frac(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Rational) -> Interval:
        x = _frac(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Rational) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: Interval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: Interval) -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def simplify(self, digits: int) -> Interval:
        """Round endpoints outward to about ``digits`` significant decimals."""
        return Interval(_round_sig(self.lo, digits, up=False), _round_sig(self.hi, digits, up=True))

    def __add__(self, other):
        return iv_add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return iv_sub(self, _coerce(other))

    def __rsub__(self, other):
        return iv_sub(_coerce(other), self)

    def __mul__(self, other):
        return iv_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return iv_div(self, _coerce(other))

    def __rtruediv__(self, other):
        return iv_div(_coerce(other), self)

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __pow__(self, n: int):
        return pow_int(self, n)

    def to_json(self) -> dict:
        return {"lo": fraction_to_str(self.lo), "hi": fraction_to_str(self.hi)}

    @classmethod
    def from_json(cls, obj: dict) -> Interval:
        return cls(parse_fraction(obj["lo"]), parse_fraction(obj["hi"]))

    def __str__(self):
        return f"[{float(self.lo):.6g}, {float(self.hi):.6g}]"


def fraction_to_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    if not isinstance(s, str):
        raise TypeError("rational endpoints must be strings")
    return Fraction(s)


def _coerce(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(_frac(x))


def _round_sig(x: Fraction, digits: int, up: bool) -> Fraction:
    if x == 0:
        return x
    # decimal magnitude estimate; being off by one only changes the digit count
    mag = (abs(x.numerator).bit_length() - x.denominator.bit_length()) * 30103 // 100000
    shift = digits - mag
    scaled = x * 10**shift if shift >= 0 else x / 10**(-shift)
    n = math.ceil(scaled) if up else math.floor(scaled)
    return Fraction(n) / 10**shift if shift >= 0 else Fraction(n * 10**(-shift))


# -- exact arithmetic ------------------------------------------------------

def iv_add(x: Interval, y: Interval) -> Interval:
    return Interval(x.lo + y.lo, x.hi + y.hi)


def iv_sub(x: Interval, y: Interval) -> Interval:
    return Interval(x.lo - y.hi, x.hi - y.lo)


def iv_mul(x: Interval, y: Interval) -> Interval:
    products = (x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi)
    return Interval(min(products), max(products))


def iv_div(x: Interval, y: Interval) -> Interval:
    if y.lo <= 0 <= y.hi:
        raise DivisionByIntervalContainingZero(f"divisor {y} contains zero")
    return iv_mul(x, Interval(1 / y.hi, 1 / y.lo))


def pow_int(x: Interval, n: int) -> Interval:
    if n < 0:
        raise ValueError("exponent must be nonnegative")
    if n == 0:
        return Interval.point(1)
    if n % 2 == 1 or x.lo >= 0:
        return Interval(x.lo**n, x.hi**n)
    if x.hi <= 0:
        return Interval(x.hi**n, x.lo**n)
    return Interval(Fraction(0), max(-x.lo, x.hi) ** n)


def compare(x: Interval, y: Interval) -> Verdict:
    """Less/Greater is a proof of the strict inequality; Overlap proves nothing."""
    if x.hi < y.lo:
        return Verdict.LESS
    if x.lo > y.hi:
        return Verdict.GREATER
    return Verdict.OVERLAP


# -- fixed-point kernels ---------------------------------------------------
# All kernels return integer pairs (lo, hi) meaning [lo/2^P, hi/2^P].

def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _atanh_units(y: Fraction, P: int) -> tuple[int, int]:
    """Enclose atanh(y) = sum y^(2j+1)/(2j+1) for 0 <= y < 1."""
    one = 1 << P
    y_lo = (y.numerator << P) // y.denominator
    y_hi = _ceil_div(y.numerator << P, y.denominator)
    y2_lo = (y_lo * y_lo) >> P
    y2_hi = _ceil_div(y_hi * y_hi, one)
    if y2_hi >= one:
        raise ValueError("atanh series needs |y| < 1")
    pw_lo, pw_hi = y_lo, y_hi
    s_lo = s_hi = 0
    j = 0
    while pw_hi > 1:
        k = 2 * j + 1
        s_lo += pw_lo // k
        s_hi += _ceil_div(pw_hi, k)
        pw_lo = (pw_lo * y2_lo) >> P
        pw_hi = _ceil_div(pw_hi * y2_hi, one)
        j += 1
    # remaining terms bounded by a geometric series with ratio y^2
    tail = _ceil_div(pw_hi * one, (2 * j + 1) * (one - y2_hi))
    return s_lo, s_hi + tail


@lru_cache(maxsize=64)
def _ln2_units(P: int) -> tuple[int, int]:
    lo, hi = _atanh_units(Fraction(1, 3), P)
    return 2 * lo, 2 * hi


def _atan_inv_units(x: int, P: int) -> tuple[int, int]:
    """Enclose atan(1/x), x >= 2, from alternating partial sums."""
    one = 1 << P
    lo = hi = 0
    j = 0
    power = x
    while True:
        den = (2 * j + 1) * power
        q, r = divmod(one, den)
        c = q + (r > 0)
        if j % 2 == 0:
            if c <= 1:
                # even partial sum is a lower bound; adding this term gives an upper one
                return lo, hi + c
            lo += q
            hi += c
        else:
            lo -= c
            hi -= q
        power *= x * x
        j += 1


@lru_cache(maxsize=64)
def _pi_units(P: int) -> tuple[int, int]:
    a5_lo, a5_hi = _atan_inv_units(5, P)
    a239_lo, a239_hi = _atan_inv_units(239, P)
    return 16 * a5_lo - 4 * a239_hi, 16 * a5_hi - 4 * a239_lo


def _guard_bits(prec: Precision) -> int:
    return prec.bits + 2 * prec.bits.bit_length() + 12


def _refine(compute, prec: Precision) -> Interval:
    """Run ``compute(P)`` with growing P until the width target is met."""
    P = _guard_bits(prec)
    result = None
    for _ in range(prec.max_refinements):
        result = compute(P)
        if result.width <= prec.target_width:
            return result
        P += P // 2 + 32
    raise Indeterminate(f"could not reach width {prec.target_width} (last {result.width})")


# -- enclosures ------------------------------------------------------------

def pi_enclosure(prec: Precision | None = None) -> Interval:
    prec = prec or Precision()

    def compute(P):
        lo, hi = _pi_units(P)
        return Interval(Fraction(lo, 1 << P), Fraction(hi, 1 << P))

    return _refine(compute, prec)


def ln2_enclosure(prec: Precision | None = None) -> Interval:
    prec = prec or Precision()

    def compute(P):
        lo, hi = _ln2_units(P)
        return Interval(Fraction(lo, 1 << P), Fraction(hi, 1 << P))

    return _refine(compute, prec)


def _split_pow2(x: Fraction) -> tuple[Fraction, int]:
    """x = m * 2^k with 1 <= m < 2."""
    k = x.numerator.bit_length() - x.denominator.bit_length()
    m = x / 2**k if k >= 0 else x * 2**(-k)
    if m < 1:
        m *= 2
        k -= 1
    elif m >= 2:
        m /= 2
        k += 1
    return m, k


def ln_enclosure(x: Rational, prec: Precision | None = None) -> Interval:
    prec = prec or Precision()
    x = _frac(x)
    if x <= 0:
        raise NonpositiveInput(f"ln of nonpositive value {x}")
    if x == 1:
        return Interval.point(0)
    m, k = _split_pow2(x)
    y = (m - 1) / (m + 1)
    extra = abs(k).bit_length() + 2

    def compute(P):
        P += extra
        if y:
            a_lo, a_hi = _atanh_units(y, P)
            m_lo, m_hi = 2 * a_lo, 2 * a_hi
        else:
            m_lo = m_hi = 0
        l2_lo, l2_hi = _ln2_units(P)
        if k >= 0:
            lo, hi = m_lo + k * l2_lo, m_hi + k * l2_hi
        else:
            lo, hi = m_lo + k * l2_hi, m_hi + k * l2_lo
        return Interval(Fraction(lo, 1 << P), Fraction(hi, 1 << P))

    return _refine(compute, prec)


def sqrt_enclosure(x: Rational, prec: Precision | None = None) -> Interval:
    prec = prec or Precision()
    x = _frac(x)
    if x < 0:
        raise NegativeInput(f"sqrt of negative value {x}")
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Interval.point(Fraction(rp, rq))
    # sqrt(p/q) = sqrt(p*q)/q, scaled by 2^P so the width is 1/(q*2^P)
    P = prec.bits
    n = (p * q) << (2 * P)
    r = math.isqrt(n)
    den = q << P
    return Interval(Fraction(r, den), Fraction(r + (r * r != n), den))


def sqrt_interval(x: Interval, prec: Precision | None = None) -> Interval:
    """Enclose sqrt over an interval using monotonicity."""
    if x.lo < 0:
        raise NegativeInput(f"sqrt of interval {x} reaching below zero")
    return Interval(sqrt_enclosure(x.lo, prec).lo, sqrt_enclosure(x.hi, prec).hi)


def ln_interval(x: Interval, prec: Precision | None = None) -> Interval:
    if x.lo <= 0:
        raise NonpositiveInput(f"ln of interval {x} reaching zero")
    return Interval(ln_enclosure(x.lo, prec).lo, ln_enclosure(x.hi, prec).hi)
