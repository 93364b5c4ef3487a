"""Command-line front end.

Exit codes: 0 success or verified, 1 verification failure, 2 invalid input,
3 precision indeterminate.  Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import cutoff, forms, lfunc
from .errors import Indeterminate, NoCutoffFound, OcpgError
from .intervals import Precision

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INDETERMINATE = 3

log = logging.getLogger("ocpg_bounds")


class UsageError(Exception):
    pass


def _dump(obj, out, indent=2):
    out.write(json.dumps(obj, indent=indent) + "\n")


def _coefficient(text: str) -> Fraction:
    try:
        c = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--coeff must be a rational such as 1, 0.25 or 3/7 (got {text!r})")
    if c <= 0:
        raise UsageError("--coeff must be positive")
    return c


def _hypothesis(args) -> lfunc.BoundHypothesis:
    if args.preset:
        if args.coeff is not None or args.exponent is not None:
            raise UsageError("--preset cannot be combined with --coeff/--exponent")
        return lfunc.PRESETS[args.preset]
    if args.exponent is None:
        raise UsageError("give --exponent (and optionally --coeff) or --preset")
    if args.exponent < 1:
        raise UsageError("--exponent must be at least 1")
    coeff = _coefficient(args.coeff) if args.coeff is not None else Fraction(1)
    return lfunc.BoundHypothesis(coeff, args.exponent)


def cmd_forms(args, out):
    _dump({"d": args.d, "forms": [list(f) for f in forms.enumerate_reduced(args.d)]}, out)
    return EXIT_OK


def cmd_classnum(args, out):
    _dump({"d": args.d, "h": forms.class_number(args.d)}, out)
    return EXIT_OK


def cmd_genus(args, out):
    _dump(forms.genus_report(args.d).to_json(), out)
    return EXIT_OK


def cmd_search(args, out):
    if args.limit < 3:
        raise UsageError("--limit must be at least 3")
    reports = forms.search_ocpg(args.limit, args.mode, workers=args.workers)
    if args.csv:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["d", "h", "ambiguous", "genera", "ocpg"])
        for r in reports:
            j = r.to_json()
            writer.writerow([j["d"], j["h"], j["ambiguous"], j["genera"], str(j["ocpg"]).lower()])
    elif args.jsonl:
        for r in reports:
            out.write(json.dumps(r.to_json(), separators=(",", ":")) + "\n")
    else:
        _dump([r.to_json() for r in reports], out, indent=None)
    log.info("%d discriminants with one class per genus", len(reports))
    return EXIT_OK


def cmd_lvalue(args, out):
    d = args.d
    prec = Precision.from_digits(args.digits)
    S = lfunc.character_sum(d)
    l1 = lfunc.l_one(d, prec, S=S)
    _dump({
        "d": d,
        "S": S,
        "h": lfunc.analytic_class_number(d, S),
        "w": lfunc.unit_count(d),
        "l1_lo": f"{l1.lo.numerator}/{l1.lo.denominator}",
        "l1_hi": f"{l1.hi.numerator}/{l1.hi.denominator}",
    }, out)
    return EXIT_OK


def cmd_boundcheck(args, out):
    res = lfunc.bound_check(args.d, _hypothesis(args), Precision.from_digits(args.digits))
    _dump(res.to_json(), out)
    if res.verdict is lfunc.BoundVerdict.INDETERMINATE:
        return EXIT_INDETERMINATE
    if res.verdict is lfunc.BoundVerdict.FAILS:
        log.warning("bound fails at d=%d", args.d)
        return EXIT_FAILED
    return EXIT_OK


def cmd_cutoff(args, out):
    hyp = _hypothesis(args)
    if args.gmax < 1:
        raise UsageError("--gmax must be positive")
    cert = cutoff.find_cutoff(hyp, args.gmax, Precision.from_digits(args.digits))
    data = cert.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            _dump(data, fh)
        log.info("certificate written to %s", args.out)
    _dump(data, out)
    return EXIT_OK


def cmd_verify(args, out):
    path = Path(args.cert)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}")
    prec = Precision.from_digits(args.digits) if args.digits else None
    ok = cutoff.verify_certificate(data, prec)
    _dump({"cert": str(path), "verified": ok}, out)
    if not ok:
        log.error("certificate rejected")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_ci_exponent(args, out):
    if args.a < 0:
        raise UsageError("--a must be nonnegative")
    out.write(f"{cutoff.ci_exponent(args.a)}\n")
    return EXIT_OK


def _add_hypothesis_flags(p):
    p.add_argument("--coeff", help="rational c in L(1,chi) >= c (log d)^-A (default 1)")
    p.add_argument("--exponent", type=int, help="exponent A")
    p.add_argument("--preset", choices=sorted(lfunc.PRESETS))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocpg",
        description="Class numbers, one-class-per-genus searches and certified cutoffs.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forms", help="list primitive reduced forms of discriminant D")
    p.add_argument("-d", type=int, required=True, help="negative discriminant D")
    p.set_defaults(func=cmd_forms)

    p = sub.add_parser("classnum", help="class number h(D)")
    p.add_argument("-d", type=int, required=True)
    p.set_defaults(func=cmd_classnum)

    p = sub.add_parser("genus", help="genus report for D")
    p.add_argument("-d", type=int, required=True)
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("search", help="discriminants with one class per genus")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--mode", choices=forms.SEARCH_MODES, default="all")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--jsonl", action="store_true", help="one JSON object per line")
    fmt.add_argument("--csv", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("lvalue", help="enclosure of L(1, chi) for fundamental -d")
    p.add_argument("-d", type=int, required=True, help="positive d with -d fundamental")
    p.add_argument("--digits", type=int, default=30)
    p.set_defaults(func=cmd_lvalue)

    p = sub.add_parser("boundcheck", help="test L(1,chi) >= c (log d)^-A at one d")
    p.add_argument("-d", type=int, required=True)
    _add_hypothesis_flags(p)
    p.add_argument("--digits", type=int, default=30)
    p.set_defaults(func=cmd_boundcheck)

    p = sub.add_parser("cutoff", help="certified cutoff genus index for a bound")
    _add_hypothesis_flags(p)
    p.add_argument("--gmax", type=int, default=1000)
    p.add_argument("--digits", type=int, default=cutoff.DEFAULT_DIGITS)
    p.add_argument("--out", help="also write the certificate to this file")
    p.set_defaults(func=cmd_cutoff)

    p = sub.add_parser("verify", help="re-check a certificate file")
    p.add_argument("--cert", required=True)
    p.add_argument("--digits", type=int, help="override the certificate's precision")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ci-exponent", help="exponent 4A+18 for Conrey-Iwaniec parameter A")
    p.add_argument("--a", type=int, required=True)
    p.set_defaults(func=cmd_ci_exponent)
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    digits = getattr(args, "digits", None)
    if digits is not None and digits < 1:
        print("error: --digits must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Indeterminate as exc:
        print(f"indeterminate: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except NoCutoffFound as exc:
        print(f"no cutoff: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (OcpgError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
