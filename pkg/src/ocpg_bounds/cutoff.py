"""Certified genus cutoffs for discriminants with one class per genus.

Given an assumed bound L(1, chi) >= c (ln d)^(-A), the class number formula
(with w = 2) gives h(-d) >= F(d) := c sqrt(d) / (pi (ln d)^A).  A fundamental
-d with one class per genus and g prime discriminant factors has
h = 2^(g-1) and d >= d_g, the product of the first g primes.  For a
candidate index g0 the engine certifies four strict inequalities:

domain_check
    ln d_{g0} > 2A, so F is increasing for d >= d_{g0}.
head_check
    F(d_{g0}) > 2^(g0-1); rules out d > d_{g0} with g <= g0.
tail_check
    c sqrt(d_{g0}) (sqrt(p)/2) / (pi (L + ln p)^A) > 2^(g0-1), with p the
    next prime and L = ln d_{g0}; rules out g = g0 + 1.
slope_check
    L ln(sqrt(p)/2) > A ln p, so the tail expression grows with g - g0,
    which extends the previous check to every g > g0.

Together they show every such d satisfies d <= d_{g0}.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional

from .errors import Indeterminate, NoCutoffFound
from .intervals import (
    Interval,
    Precision,
    Verdict,
    compare,
    ln2_enclosure,
    ln_enclosure,
    ln_interval,
    pi_enclosure,
    pow_int,
    sqrt_enclosure,
)
from .lfunc import BoundHypothesis

log = logging.getLogger(__name__)

CHECK_NAMES = ("domain_check", "head_check", "tail_check", "slope_check")
DEFAULT_DIGITS = 80
MAX_ESCALATIONS = 4

SCOPE_NOTES = (
    "applies to fundamental discriminants -d only",
    "unit count w = 2 assumed in F (every candidate d exceeds 4)",
    "d >= d_g for g prime discriminant factors is taken as given",
)


# -- primes and primorials -------------------------------------------------

def sieve(limit: int) -> List[int]:
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = bytes(len(range(p * p, limit + 1, p)))
    return [i for i, f in enumerate(flags) if f]


@lru_cache(maxsize=8)
def _first_primes(n: int) -> tuple:
    if n < 6:
        bound = 15
    else:
        bound = int(n * (math.log(n) + math.log(math.log(n)))) + 3
    return tuple(sieve(bound)[:n])


def first_primes(n: int) -> tuple:
    # share the table across calls by rounding the request up
    size = max(64, 1 << (n - 1).bit_length())
    return _first_primes(size)[:n]


def nth_prime(n: int) -> int:
    if n < 1:
        raise ValueError("n must be at least 1")
    return first_primes(n)[-1]


def primorial(g: int) -> int:
    if g < 1:
        raise ValueError("g must be at least 1")
    return math.prod(first_primes(g))


@lru_cache(maxsize=4096)
def _ln_prime(p: int, prec: Precision) -> Interval:
    return ln_enclosure(p, prec)


class PrimorialTable:
    """First N primes with exact primorials and summed log enclosures."""

    def __init__(self, n: int = 256):
        self.primes = list(first_primes(n))
        self._prods = [1]
        for p in self.primes:
            self._prods.append(self._prods[-1] * p)

    def _grow(self, g: int):
        if g > len(self.primes):
            self.__init__(max(g, 2 * len(self.primes)))

    def d(self, g: int) -> int:
        self._grow(g)
        return self._prods[g]

    def prime(self, i: int) -> int:
        self._grow(i)
        return self.primes[i - 1]

    def log_d(self, g: int, prec: Precision) -> Interval:
        """Enclosure of ln d_g as a sum of per-prime enclosures."""
        self._grow(g)
        # g summands, so each gets 1/g of the width budget
        sub = Precision(prec.target_width / g, prec.max_refinements)
        total = Interval.point(0)
        for p in self.primes[:g]:
            total = total + _ln_prime(p, sub)
        return total


# -- the bound function ----------------------------------------------------

def F_eval(hyp: BoundHypothesis, d: int, ln_d: Interval, prec: Precision) -> Interval:
    """Enclosure of c sqrt(d) / (pi (ln d)^A)."""
    if d < 3:
        raise ValueError("F is only evaluated for d >= 3")
    return hyp.coeff * sqrt_enclosure(d, prec) / (pi_enclosure(prec) * pow_int(ln_d, hyp.exponent))


def tail_eval(hyp: BoundHypothesis, d: int, ln_d: Interval, p: int, ln_p: Interval,
              prec: Precision, k: int = 1) -> Interval:
    """Lower-bound expression for 2^(g0-1) when g = g0 + k."""
    base = pow_int(sqrt_enclosure(p, prec) / 2, k)
    denom = pi_enclosure(prec) * pow_int(ln_d + k * ln_p, hyp.exponent)
    return hyp.coeff * sqrt_enclosure(d, prec) * base / denom


def min_genus_bound(hyp: BoundHypothesis, g0: int, prec: Optional[Precision] = None,
                    table: Optional[PrimorialTable] = None) -> int:
    """Least g with 2^(g-1) above the certified lower endpoint of F(d_{g0})."""
    prec = prec or Precision.from_digits(DEFAULT_DIGITS)
    table = table or PrimorialTable()
    L = table.log_d(g0, prec)
    if compare(L, Interval.point(2 * hyp.exponent)) is not Verdict.GREATER:
        raise ValueError(f"domain check does not hold at g0={g0}")
    F = F_eval(hyp, table.d(g0), L, prec)
    return _min_genus_from(F.lo)


def _min_genus_from(f_lo: Fraction) -> int:
    n = max(math.floor(f_lo), 0)
    return n.bit_length() + 1


# -- certificates ----------------------------------------------------------

@dataclass
class CheckRecord:
    name: str
    lhs: Interval
    rhs: Interval
    verdict: Verdict

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "verdict": self.verdict.value,
        }


@dataclass
class CutoffCertificate:
    hypothesis: BoundHypothesis
    g_star: int
    d_g_star: int
    next_prime: int
    checks: List[CheckRecord]
    min_genus: int
    precision_digits: int
    previous: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        notes = list(SCOPE_NOTES)
        if self.hypothesis.conditional:
            notes.append("conditional on the preset's stated bound")
        return {
            "hypothesis": self.hypothesis.to_json(),
            "g_star": self.g_star,
            "d_g_star": str(self.d_g_star),
            "next_prime": self.next_prime,
            "min_genus": self.min_genus,
            "checks": [c.to_json() for c in self.checks],
            "engine": {"precision_digits": self.precision_digits},
            "minimality": self.previous,
            "scope": notes,
        }


def _evaluate(hyp: BoundHypothesis, g0: int, prec: Precision, table: PrimorialTable,
              stop_early: bool = True) -> List[CheckRecord]:
    A = hyp.exponent
    d = table.d(g0)
    p = table.prime(g0 + 1)
    L = table.log_d(g0, prec)
    m = _ln_prime(p, prec)
    two_pow = Interval.point(2 ** (g0 - 1))
    records = []

    def add(name, lhs_fn, rhs):
        lhs = lhs_fn()
        rec = CheckRecord(name, lhs, rhs, compare(lhs, rhs))
        records.append(rec)
        return rec.verdict is Verdict.GREATER

    ok = add("domain_check", lambda: L, Interval.point(2 * A))
    if not ok and stop_early:
        return records
    # F needs d >= 3; d_1 = 2 never passes the domain check anyway
    if d < 3:
        records.append(CheckRecord("head_check", Interval.point(0), two_pow, Verdict.LESS))
        ok = False
    else:
        ok = add("head_check", lambda: F_eval(hyp, d, L, prec), two_pow) and ok
    if not ok and stop_early:
        return records
    ok = add("tail_check", lambda: tail_eval(hyp, d, L, p, m, prec), two_pow) and ok
    if not ok and stop_early:
        return records
    half_log = m / 2 - ln2_enclosure(prec)  # ln(sqrt(p)/2)
    add("slope_check", lambda: L * half_log, A * m)
    return records


def _all_pass(records: List[CheckRecord]) -> bool:
    return len(records) == 4 and all(r.verdict is Verdict.GREATER for r in records)


def _has_overlap(records: List[CheckRecord]) -> bool:
    return any(r.verdict is Verdict.OVERLAP for r in records)


def _evaluate_escalating(hyp, g0, prec, table, stop_early=True):
    """Evaluate at ``prec``, refining only while some verdict is Overlap."""
    p = prec
    for i, p in enumerate(prec.schedule()):
        records = _evaluate(hyp, g0, p, table, stop_early)
        if not _has_overlap(records) or i + 1 >= MAX_ESCALATIONS:
            return records, p
        log.debug("g0=%d overlapping at %d digits, refining", g0, p.digits)
    return records, p


def _simplify_records(records: List[CheckRecord], digits: int) -> List[CheckRecord]:
    out = []
    for r in records:
        lhs, rhs = r.lhs.simplify(digits), r.rhs.simplify(digits)
        if compare(lhs, rhs) is not r.verdict:
            lhs, rhs = r.lhs, r.rhs
        out.append(CheckRecord(r.name, lhs, rhs, r.verdict))
    return out


def find_cutoff(hyp: BoundHypothesis, g_max: int = 1000,
                prec: Optional[Precision] = None) -> CutoffCertificate:
    """Smallest g0 <= g_max at which all four checks are strict separations."""
    prec = prec or Precision.from_digits(DEFAULT_DIGITS)
    table = PrimorialTable(g_max + 2)
    for g0 in range(1, g_max + 1):
        records, used = _evaluate_escalating(hyp, g0, prec, table)
        if _has_overlap(records):
            raise Indeterminate(f"g0={g0}: enclosures overlap at {used.digits} digits")
        if not _all_pass(records):
            continue
        d = table.d(g0)
        head = records[1]
        previous = {}
        if g0 > 1:
            prev, _ = _evaluate_escalating(hyp, g0 - 1, prec, table, stop_early=False)
            previous = {"g": g0 - 1, "verdicts": {r.name: r.verdict.value for r in prev}}
        return CutoffCertificate(
            hypothesis=hyp,
            g_star=g0,
            d_g_star=d,
            next_prime=table.prime(g0 + 1),
            checks=_simplify_records(records, used.digits),
            min_genus=_min_genus_from(head.lhs.lo),
            precision_digits=used.digits,
            previous=previous,
        )
    raise NoCutoffFound(f"no g0 <= {g_max} passes all checks for {hyp}")


# -- independent verification ----------------------------------------------

def _fresh_checks(hyp: BoundHypothesis, g: int, d: int, p: int, prec: Precision) -> dict:
    """Recompute every inequality through routes not used by the engine."""
    A = hyp.exponent
    L = ln_enclosure(d, prec)  # direct, not a per-prime sum
    m = ln_enclosure(p, prec)
    root_d = sqrt_enclosure(d, prec)
    pi = pi_enclosure(prec)
    two_pow = Interval.point(2 ** (g - 1))
    head = hyp.coeff * root_d / (pi * pow_int(L, A))
    half_root_p = sqrt_enclosure(p, prec) / 2
    tail = hyp.coeff * root_d * half_root_p / (pi * pow_int(L + m, A))
    slope = L * ln_interval(half_root_p, prec)
    return {
        "domain_check": (L, Interval.point(2 * A)),
        "head_check": (head, two_pow),
        "tail_check": (tail, two_pow),
        "slope_check": (slope, A * m),
    }


def _parse_certificate(cert) -> CutoffCertificate:
    if isinstance(cert, CutoffCertificate):
        return cert
    hyp_obj = cert["hypothesis"]
    A = hyp_obj["A"]
    if isinstance(A, bool) or not isinstance(A, int):
        raise TypeError("A must be an integer")
    hyp = BoundHypothesis(Fraction(hyp_obj["c"]), A)
    checks = [
        CheckRecord(c["name"], Interval.from_json(c["lhs"]), Interval.from_json(c["rhs"]),
                    Verdict(c["verdict"]))
        for c in cert["checks"]
    ]
    return CutoffCertificate(
        hypothesis=hyp,
        g_star=int(cert["g_star"]),
        d_g_star=int(cert["d_g_star"]),
        next_prime=int(cert["next_prime"]),
        checks=checks,
        min_genus=int(cert["min_genus"]),
        precision_digits=int(cert.get("engine", {}).get("precision_digits", DEFAULT_DIGITS)),
    )


def verify_certificate(cert, prec: Optional[Precision] = None) -> bool:
    """Re-check a certificate from scratch; False on any inconsistency."""
    try:
        c = _parse_certificate(cert)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        log.info("malformed certificate: %s", exc)
        return False
    if c.g_star < 1 or tuple(r.name for r in c.checks) != CHECK_NAMES:
        log.info("certificate must list exactly %s", CHECK_NAMES)
        return False
    for r in c.checks:
        if r.verdict is not Verdict.GREATER or compare(r.lhs, r.rhs) is not Verdict.GREATER:
            log.info("%s: recorded verdict is not a strict separation", r.name)
            return False
    if c.d_g_star != primorial(c.g_star) or c.next_prime != nth_prime(c.g_star + 1):
        log.info("primorial or next prime does not match g_star=%d", c.g_star)
        return False
    if c.min_genus != _min_genus_from(c.checks[1].lhs.lo):
        log.info("min_genus %d inconsistent with head_check", c.min_genus)
        return False

    prec = prec or Precision.from_digits(c.precision_digits)
    fresh = None
    for i, p in enumerate(prec.schedule()):
        fresh = _fresh_checks(c.hypothesis, c.g_star, c.d_g_star, c.next_prime, p)
        if all(compare(*fresh[n]) is not Verdict.OVERLAP for n in CHECK_NAMES):
            break
        if i + 1 >= MAX_ESCALATIONS:
            break
    for r in c.checks:
        lhs, rhs = fresh[r.name]
        if not (lhs.overlaps(r.lhs) and rhs.overlaps(r.rhs)):
            log.info("%s: recorded interval does not contain the recomputed value", r.name)
            return False
        if compare(lhs, rhs) is not Verdict.GREATER:
            log.info("%s: fresh evaluation does not separate", r.name)
            return False
    return True


def ci_exponent(A: int) -> int:
    """Exponent 4A + 18 from log T = (log d)^(A+6) in (log T)^-2 (log d)^(-2A-6)."""
    if A < 0:
        raise ValueError("A must be nonnegative")
    return 4 * A + 18
