"""Acceptance gate: one test per criterion, summarised at the end of the run."""

import copy
import io
import json
import random
import time
from fractions import Fraction

import mpmath
import pytest

from ocpg_bounds.cli import run
from ocpg_bounds.cutoff import PrimorialTable, F_eval, min_genus_bound, tail_eval, verify_certificate
from ocpg_bounds.forms import (
    QuadraticForm,
    class_number,
    compose,
    form_order,
    is_fundamental,
    principal_form,
    search_ocpg,
)
from ocpg_bounds.intervals import (
    Interval,
    Precision,
    ln_enclosure,
    pi_enclosure,
    pow_int,
    sqrt_enclosure,
)
from ocpg_bounds.lfunc import PRESETS, analytic_class_number, l_one

D66 = (
    "19361386640700823163471425054312320082662897612571563761906962414215012369856637"
    "179096947335243680669607531475629148240284399976570"
)
IDONEAL = [
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 15, 16, 18, 21, 22, 24, 25, 28, 30, 33, 37, 40,
    42, 45, 48, 57, 58, 60, 70, 72, 78, 85, 88, 93, 102, 105, 112, 120, 130, 133, 165, 168,
    177, 190, 210, 232, 240, 253, 273, 280, 312, 330, 345, 357, 385, 408, 462, 520, 760, 840,
    1320, 1365, 1848,
]


def cli(*argv):
    out = io.StringIO()
    start = time.perf_counter()
    code = run(list(argv), out=out)
    return code, out.getvalue(), time.perf_counter() - start


def two_sig_digits(n: int) -> str:
    """Leading two digits of n after rounding to two significant figures."""
    s = str(n)
    lead = int(s[:2]) + (int(s[2]) >= 5)
    return str(lead)[:2]


@pytest.fixture(scope="module")
def certificates():
    certs = {}
    for A in (18, 66, 74):
        code, out, elapsed = cli("cutoff", "--coeff", "1", "--exponent", str(A))
        assert code == 0
        certs[A] = (json.loads(out), elapsed)
    return certs


@pytest.mark.criterion(1, "idoneal search to 10000: 65 values, max 1848, < 60 s")
def test_idoneal_reproduction():
    code, out, elapsed = cli("search", "--limit", "10000", "--mode", "idoneal", "--jsonl")
    assert code == 0
    ns = [-json.loads(line)["d"] // 4 for line in out.splitlines()]
    assert len(ns) == 65
    assert max(ns) == 1848
    assert ns == IDONEAL
    assert elapsed < 60


@pytest.mark.criterion(2, "cutoff A=18: g*=66, d_66 has 131 digits, leads 19, < 10 s")
def test_cutoff_a18(certificates, record_property):
    cert, elapsed = certificates[18]
    record_property("elapsed", elapsed)
    assert cert["g_star"] == 66
    d = cert["d_g_star"]
    assert d == D66
    assert len(d) == 131 and d.startswith("19")
    assert elapsed < 10


@pytest.mark.criterion(3, "cutoff A=66: g*=207, 535 digits, ~2.4e534 (leads 24 after rounding), < 60 s")
def test_cutoff_a66(certificates, record_property):
    cert, elapsed = certificates[66]
    record_property("elapsed", elapsed)
    assert cert["g_star"] == 207
    d = int(cert["d_g_star"])
    assert len(str(d)) == 535
    assert two_sig_digits(d) == "24"
    assert elapsed < 60


@pytest.mark.criterion(4, "cutoff A=74: g*=230, 607 digits, leads 29, < 60 s")
def test_cutoff_a74(certificates, record_property):
    cert, elapsed = certificates[74]
    record_property("elapsed", elapsed)
    assert cert["g_star"] == 230
    d = int(cert["d_g_star"])
    assert len(str(d)) == 607
    assert str(d).startswith("29") and two_sig_digits(d) == "29"
    assert elapsed < 60


@pytest.mark.criterion(5, "intermediate values: F(d_66) > 1.1e20, tail(67) > 7.2e20, 2^65 bracket, min genus 68")
def test_intermediate_values():
    prec = Precision.from_digits(80)
    hyp = PRESETS["ci-18"]
    table = PrimorialTable()
    d66, L = table.d(66), table.log_d(66, prec)
    F = F_eval(hyp, d66, L, prec)
    assert F.lo > Fraction(11, 10) * 10**20

    m = ln_enclosure(331, prec)
    tail = tail_eval(hyp, d66, L, 331, m, prec, k=1)
    assert tail.lo > Fraction(72, 10) * 10**20
    # the same bound with sqrt(331)/2 replaced by 9
    tail9 = 9 * sqrt_enclosure(d66, prec) / (pi_enclosure(prec) * pow_int(L + m, 18))
    assert tail9.lo > Fraction(72, 10) * 10**20

    p65 = pow_int(Interval.point(2), 65)
    assert p65 == Interval.point(36893488147419103232)
    assert Fraction(36, 10) * 10**19 < p65.lo and p65.hi < Fraction(38, 10) * 10**19
    assert min_genus_bound(hyp, 66, prec) == 68


@pytest.mark.criterion(6, "analytic vs enumerated class numbers for fundamental d <= 10^4, 0 mismatches, < 120 s")
def test_class_number_formula_agreement():
    start = time.perf_counter()
    checked = 0
    mismatches = []
    for d in range(3, 10**4 + 1):
        if not is_fundamental(-d):
            continue
        checked += 1
        if analytic_class_number(d) != class_number(-d):
            mismatches.append(d)
    assert checked == 3043
    assert mismatches == []
    assert time.perf_counter() - start < 120


@pytest.mark.criterion(7, "l_one(4) contains pi/4 and l_one(3) contains pi/(3 sqrt 3) at width 1e-20")
def test_l_value_spot_checks():
    prec = Precision(Fraction(1, 10**20))
    l4, l3 = l_one(4, prec), l_one(3, prec)
    assert l4.width <= prec.target_width and l3.width <= prec.target_width
    # rigorous containment against a much tighter enclosure of the closed forms
    tight = Precision.from_digits(60)
    pi = pi_enclosure(tight)
    assert l4.contains_interval(pi / 4)
    assert l3.contains_interval(pi / (3 * sqrt_enclosure(3, tight)))
    with mpmath.workdps(60):
        ref = Fraction(mpmath.nstr(mpmath.pi / (3 * mpmath.sqrt(3)), 55))
    assert l3.contains(ref)


@pytest.mark.criterion(8, "every OCPG |D| <= 10^5 has 2-torsion class group; D=-23 cyclic of order 3")
def test_two_torsion_law():
    found = search_ocpg(10**5, "all")
    assert len(found) > 0
    for rep in found:
        one = principal_form(rep.D.value)
        for f in rep.reduced_forms:
            assert compose(f, f) == one, (rep.D.value, f)
    assert class_number(-23) == 3
    g = QuadraticForm(2, 1, 3)
    assert form_order(g) == 3
    assert compose(g, g) != principal_form(-23)


TAMPERS = [
    ("head verdict -> Overlap", lambda d: d["checks"][1].update(verdict="Overlap")),
    ("tail verdict -> Less", lambda d: d["checks"][2].update(verdict="Less")),
    ("slope verdict -> Overlap", lambda d: d["checks"][3].update(verdict="Overlap")),
    ("head lhs endpoints swapped",
     lambda d: d["checks"][1]["lhs"].update(lo=d["checks"][1]["lhs"]["hi"], hi=d["checks"][1]["lhs"]["lo"])),
    ("head lhs.lo flipped below rhs",
     lambda d: d["checks"][1]["lhs"].update(lo=str(Fraction(d["checks"][1]["rhs"]["lo"]) - 1))),
    ("tail lhs shifted away from true value",
     lambda d: d["checks"][2]["lhs"].update(lo=str(Fraction(d["checks"][2]["lhs"]["lo"]) * 3),
                                            hi=str(Fraction(d["checks"][2]["lhs"]["hi"]) * 3))),
    ("domain lhs.hi flipped under rhs",
     lambda d: d["checks"][0]["lhs"].update(lo="1/1", hi="2/1")),
    ("slope rhs.hi raised over lhs",
     lambda d: d["checks"][3]["rhs"].update(hi=d["checks"][3]["lhs"]["hi"])),
    ("d_g_star altered", lambda d: d.update(d_g_star=str(int(d["d_g_star"]) - 1))),
    ("exponent altered", lambda d: d["hypothesis"].update(A=d["hypothesis"]["A"] - 1)),
]


@pytest.mark.criterion(9, "certificates for A=18/66/74 verify; 10 tampered variants of each rejected")
def test_certificate_round_trip(certificates):
    assert len(TAMPERS) == 10
    for A, (cert, _) in certificates.items():
        assert verify_certificate(cert), A
        for name, fn in TAMPERS:
            bad = copy.deepcopy(cert)
            fn(bad)
            assert not verify_certificate(bad), (A, name)


@pytest.mark.criterion(10, "200 randomized ln/sqrt/pi/pow containment checks vs higher-precision mpmath, 0 violations")
def test_interval_soundness_suite():
    rng = random.Random(130)
    violations = []
    # the oracle carries 60 more digits than the magnitude plus requested digits
    dps = 300 + 100 + 60
    slack = Fraction(1, 10**(dps - 320))

    def inside(iv, value):
        v = Fraction(mpmath.nstr(value, dps - 5, min_fixed=-10**6, max_fixed=10**6))
        return iv.lo - slack <= v <= iv.hi + slack

    with mpmath.workdps(dps):
        for i in range(200):
            kind = i % 4
            digits = rng.randint(5, 100)
            prec = Precision.from_digits(digits)
            x = Fraction(rng.randint(1, 10**rng.randint(1, 300)), rng.randint(1, 10**rng.randint(1, 40)))
            mx = mpmath.mpf(x.numerator) / x.denominator
            if kind == 0:
                ok = inside(ln_enclosure(x, prec), mpmath.log(mx))
            elif kind == 1:
                ok = inside(sqrt_enclosure(x, prec), mpmath.sqrt(mx))
            elif kind == 2:
                ok = inside(pi_enclosure(prec), mpmath.pi)
            else:
                lo = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**3))
                iv = Interval(lo, lo + Fraction(rng.randint(0, 10**6), rng.randint(1, 10**6)))
                n = rng.randint(0, 40)
                sample = iv.lo + (iv.hi - iv.lo) * Fraction(rng.randint(0, 1000), 1000)
                ok = pow_int(iv, n).contains(sample**n)
            if not ok:
                violations.append((kind, x, digits))
    assert violations == []
