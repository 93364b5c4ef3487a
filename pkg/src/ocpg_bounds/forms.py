"""Positive definite binary quadratic forms of negative discriminant.

Reduction, enumeration of reduced forms, Dirichlet composition, class
numbers, genus counting via ambiguous classes, and exhaustive searches for
discriminants with one class per genus.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, List

from .errors import (
    DiscriminantMismatch,
    GenusCrossCheckFailed,
    NotADiscriminant,
    NotPositiveDefinite,
)

SEARCH_MODES = ("all", "fundamental", "idoneal")


@dataclass(frozen=True, order=True)
class QuadraticForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    @property
    def is_ambiguous(self) -> bool:
        """For a reduced form: the class has order at most 2."""
        return self.b == 0 or self.a == self.b or self.a == self.c

    def inverse(self) -> QuadraticForm:
        return QuadraticForm(self.a, -self.b, self.c)

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


@dataclass(frozen=True)
class Discriminant:
    value: int
    is_fundamental: bool
    omega: int  # number of distinct primes dividing |D|


def _distinct_primes(n: int) -> List[int]:
    primes = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            primes.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        primes.append(n)
    return primes


def _squarefree(n: int) -> bool:
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1 if p == 2 else 2
    return True


def is_fundamental(D: int) -> bool:
    if D >= 0 or D % 4 not in (0, 1):
        return False
    if D % 4 == 1:
        return _squarefree(-D)
    m = D // 4
    return m % 4 in (2, 3) and _squarefree(-m)


def validate_discriminant(D) -> Discriminant:
    if isinstance(D, Discriminant):
        return D
    if isinstance(D, bool) or not isinstance(D, int):
        raise NotADiscriminant(f"{D!r} is not an integer")
    if D >= 0 or D % 4 not in (0, 1):
        raise NotADiscriminant(f"{D} is not a negative discriminant (need D < 0, D = 0,1 mod 4)")
    return Discriminant(D, is_fundamental(D), len(_distinct_primes(-D)))


def principal_form(D) -> QuadraticForm:
    D = validate_discriminant(D).value
    if D % 4 == 0:
        return QuadraticForm(1, 0, -D // 4)
    return QuadraticForm(1, 1, (1 - D) // 4)


def reduce(f: QuadraticForm) -> QuadraticForm:
    a, b, c = f
    if b * b - 4 * a * c >= 0 or a <= 0:
        raise NotPositiveDefinite(f"{f} is not positive definite")
    while True:
        if not (-a < b <= a):
            r = (a - b) // (2 * a)
            b, c = b + 2 * r * a, a * r * r + b * r + c
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return QuadraticForm(a, b, c)


def enumerate_reduced(D) -> List[QuadraticForm]:
    """Primitive reduced forms of discriminant D, sorted by (a, b)."""
    D = validate_discriminant(D).value
    forms = []
    bmax = math.isqrt(-D // 3)
    for b in range(D % 2, bmax + 1, 2):
        n = (b * b - D) // 4
        a = max(b, 1)
        while a * a <= n:
            if n % a == 0:
                c = n // a
                if math.gcd(a, b, c) != 1:
                    a += 1
                    continue
                forms.append(QuadraticForm(a, b, c))
                if 0 < b < a < c:
                    forms.append(QuadraticForm(a, -b, c))
            a += 1
    forms.sort(key=lambda f: (f.a, f.b))
    return forms


def class_number(D) -> int:
    return len(enumerate_reduced(D))


def _egcd(x: int, y: int) -> tuple[int, int, int]:
    """(g, u, v) with u*x + v*y = g = gcd(x, y) >= 0."""
    u0, u1, v0, v1 = 1, 0, 0, 1
    while y:
        q, r = divmod(x, y)
        x, y = y, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if x < 0:
        return -x, -u0, -v0
    return x, u0, v0


def compose(f: QuadraticForm, g: QuadraticForm) -> QuadraticForm:
    """Reduced representative of the Dirichlet composition of two classes."""
    D = f.discriminant
    if g.discriminant != D:
        raise DiscriminantMismatch(f"{f} has discriminant {D}, {g} has {g.discriminant}")
    if D >= 0 or f.a <= 0 or g.a <= 0:
        raise NotPositiveDefinite("composition needs positive definite forms")
    a1, b1, _ = f
    a2, b2, _ = g
    s = (b1 + b2) // 2
    g1, x1, y1 = _egcd(a1, a2)
    e, x2, w = _egcd(g1, s)
    u, v = x2 * x1, x2 * y1
    A = (a1 // e) * (a2 // e)
    num = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + D) // 2
    B = (num // e) % (2 * A)
    C = (B * B - D) // (4 * A)
    return reduce(QuadraticForm(A, B, C))


def form_order(f: QuadraticForm, limit: int = 10**6) -> int:
    """Order of the class of ``f`` in the class group."""
    one = principal_form(f.discriminant)
    x = reduce(f)
    k = 1
    while x != one:
        x = compose(x, f)
        k += 1
        if k > limit:
            raise RuntimeError("order search exceeded limit")
    return k


@dataclass
class GenusReport:
    D: Discriminant
    h: int
    ambiguous_count: int
    genus_count: int
    one_class_per_genus: bool
    reduced_forms: List[QuadraticForm] = field(repr=False)

    def to_json(self) -> dict:
        return {
            "d": self.D.value,
            "h": self.h,
            "ambiguous": self.ambiguous_count,
            "genera": self.genus_count,
            "ocpg": self.one_class_per_genus,
            "forms": [[f.a, f.b, f.c] for f in self.reduced_forms],
        }


def genus_report(D) -> GenusReport:
    disc = validate_discriminant(D)
    forms = enumerate_reduced(disc)
    amb = sum(1 for f in forms if f.is_ambiguous)
    if disc.is_fundamental and amb != 2 ** (disc.omega - 1):
        raise GenusCrossCheckFailed(
            f"D={disc.value}: {amb} ambiguous classes, expected 2^{disc.omega - 1}"
        )
    h = len(forms)
    return GenusReport(disc, h, amb, amb, h == amb, forms)


def _has_nonambiguous_reduced(D: int) -> bool:
    """True if some reduced (a,b,c) has 0 < b < a < c, i.e. an element of order > 2."""
    a = 2
    while 3 * a * a < -D:
        m = 4 * a
        for b in range(2 - D % 2, a, 2):
            if (b * b - D) % m == 0:
                c = (b * b - D) // m
                if c > a and math.gcd(a, b, c) == 1:
                    return True
        a += 1
    return False


def _candidates(limit: int, mode: str) -> Iterable[int]:
    if mode == "idoneal":
        return (-4 * n for n in range(1, limit + 1))
    ds = (-n for n in range(3, limit + 1) if n % 4 in (0, 3))
    if mode == "fundamental":
        return (d for d in ds if is_fundamental(d))
    return ds


def _scan(ds: List[int]) -> List[GenusReport]:
    out = []
    for D in ds:
        if not _has_nonambiguous_reduced(D):
            rep = genus_report(D)
            if rep.one_class_per_genus:
                out.append(rep)
    return out


def search_ocpg(limit: int, mode: str = "all", workers: int = 1) -> List[GenusReport]:
    """All one-class-per-genus discriminants in range, ordered by |D| ascending.

    ``mode="idoneal"`` scans D = -4n for 1 <= n <= limit.
    """
    if limit < 3:
        raise ValueError("limit must be at least 3")
    if mode not in SEARCH_MODES:
        raise ValueError(f"mode must be one of {SEARCH_MODES}")
    ds = list(_candidates(limit, mode))
    if workers <= 1 or len(ds) < 2000:
        return _scan(ds)
    # interleaved chunks balance the cost, which grows with |D|
    chunks = [ds[i::workers * 4] for i in range(workers * 4)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_scan, chunks)
        found = [rep for part in parts for rep in part]
    found.sort(key=lambda r: -r.D.value)
    return found
