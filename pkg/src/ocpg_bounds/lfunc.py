"""Real odd Dirichlet characters and L(1, chi) for imaginary quadratic fields."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import Indeterminate, NonIntegralResult, NotFundamental
from .forms import is_fundamental
from .intervals import (
    Interval,
    Precision,
    Verdict,
    compare,
    ln_enclosure,
    pi_enclosure,
    pow_int,
    sqrt_enclosure,
)


@dataclass(frozen=True)
class BoundHypothesis:
    """Assumed lower bound L(1, chi) >= coeff * (ln d)^(-exponent)."""

    coeff: Fraction
    exponent: int
    label: str = ""
    conditional: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.coeff <= 0:
            raise ValueError("coeff must be positive")
        if self.exponent < 1:
            raise ValueError("exponent must be at least 1")

    def to_json(self) -> dict:
        return {"c": f"{self.coeff.numerator}/{self.coeff.denominator}", "A": self.exponent}


def _e_upper(terms: int = 40) -> Fraction:
    """Rational upper bound for e from the factorial series."""
    s = Fraction(0)
    f = 1
    for k in range(terms):
        if k:
            f *= k
        s += Fraction(1, f)
    # sum over k >= terms of 1/k! is at most 2/terms!
    return s + Fraction(2, f * terms)


def _tatuzawa_coeff() -> Fraction:
    # 0.655/e rounded down to 30 digits: a slightly weaker, hence still implied, bound
    c = Fraction(655, 1000) / _e_upper()
    scale = 10**30
    return Fraction(c.numerator * scale // c.denominator, scale)


PRESETS = {
    "ci-18": BoundHypothesis(Fraction(1), 18, "Conrey-Iwaniec, A=0"),
    "ci-66": BoundHypothesis(Fraction(1), 66, "Conrey-Iwaniec, A=12"),
    "ci-74": BoundHypothesis(Fraction(1), 74, "Conrey-Iwaniec, trivial class group character"),
    "tatuzawa": BoundHypothesis(_tatuzawa_coeff(), 1, "Tatuzawa", conditional=True),
}


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D | n)."""
    if n == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -result
    # factor out 2 from n
    v = (n & -n).bit_length() - 1
    if v:
        if D % 2 == 0:
            return 0
        n >>= v
        if v % 2 == 1 and D % 8 in (3, 5):
            result = -result
    # Jacobi symbol (D | n) for odd n > 0
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def unit_count(d: int) -> int:
    if d == 3:
        return 6
    if d == 4:
        return 4
    return 2


def _require_fundamental(d: int):
    if d < 3 or not is_fundamental(-d):
        raise NotFundamental(f"-{d} is not a fundamental discriminant")


def character_sum(d: int) -> int:
    """Sum of chi(a)*a over 1 <= a < d, chi = (-d | .)."""
    _require_fundamental(d)
    return sum(a * kronecker(-d, a) for a in range(1, d))


def analytic_class_number(d: int, S: int | None = None) -> int:
    """h = w*|S|/(2d); ``S`` may be passed to skip recomputing the sum."""
    if S is None:
        S = character_sum(d)
    w = unit_count(d)
    h, r = divmod(w * abs(S), 2 * d)
    if r or h <= 0:
        raise NonIntegralResult(f"w|S|/(2d) = {w * abs(S)}/{2 * d} for d={d}")
    return h


def l_one(d: int, prec: Precision | None = None, S: int | None = None) -> Interval:
    """Enclosure of L(1, chi_{-d}) = pi*|S| / d^(3/2)."""
    prec = prec or Precision()
    if S is None:
        S = character_sum(d)
    else:
        _require_fundamental(d)
    inner = Precision(prec.target_width / 4, prec.max_refinements)
    l1 = None
    for p in inner.schedule():
        l1 = pi_enclosure(p) * abs(S) / (sqrt_enclosure(d, p) * d)
        if l1.width <= prec.target_width:
            return l1
    raise Indeterminate(f"L(1) enclosure for d={d} did not reach width {prec.target_width}")


def bound_value(d: int, hyp: BoundHypothesis, prec: Precision | None = None) -> Interval:
    """Enclosure of coeff * (ln d)^(-exponent)."""
    L = ln_enclosure(d, prec)
    return hyp.coeff / pow_int(L, hyp.exponent)


class BoundVerdict(str, enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INDETERMINATE = "Indeterminate"


@dataclass
class BoundCheck:
    d: int
    S: int
    h: int
    w: int
    l1: Interval
    bound: Interval
    verdict: BoundVerdict

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "S": self.S,
            "h": self.h,
            "w": self.w,
            "l1_lo": _s(self.l1.lo),
            "l1_hi": _s(self.l1.hi),
            "bound_lo": _s(self.bound.lo),
            "bound_hi": _s(self.bound.hi),
            "verdict": self.verdict.value,
        }


def _s(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def bound_check(d: int, hyp: BoundHypothesis, prec: Precision | None = None) -> BoundCheck:
    prec = prec or Precision()
    S = character_sum(d)
    w = unit_count(d)
    h = analytic_class_number(d, S)
    l1 = bound = None
    for p in prec.schedule():
        l1 = l_one(d, p, S=S)
        try:
            bound = bound_value(d, hyp, p)
        except Indeterminate:
            break
        v = compare(l1, bound)
        if v is Verdict.GREATER:
            return BoundCheck(d, S, h, w, l1, bound, BoundVerdict.HOLDS)
        if v is Verdict.LESS:
            return BoundCheck(d, S, h, w, l1, bound, BoundVerdict.FAILS)
    return BoundCheck(d, S, h, w, l1, bound, BoundVerdict.INDETERMINATE)
