"""``hk``: compute Hilbert–Kunz data, F-signatures and bounds from the shell.

Exit codes: 1 parse error, 2 validation error, 3 resource cap exceeded,
4 verification failure.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from fractions import Fraction

from . import __version__
from .bounds import RingTraits, closed_form_bounds, reference_values
from .cache import ColengthCache
from .estimate import EstimateError
from .frobenius import DEFAULT_MAX_COLENGTH, DEFAULT_TIMEOUT, PreconditionError, SeriesConfig
from .groebner import ResourceExceeded
from .polyfield import DomainError, MonomialOrder
from .presentation import IdealSpec, ParsedProblem, PresentationError, ValidationError, parse
from .report import analyze, analyze_fsig, series_csv, to_json, to_table

EXIT_PARSE, EXIT_VALIDATION, EXIT_RESOURCE, EXIT_VERIFY = 1, 2, 3, 4

log = logging.getLogger("hkcalc")


def _read(src: str) -> str:
    if src == "-":
        return sys.stdin.read()
    try:
        with open(src, encoding="utf-8") as fh:
            return fh.read()
    except OSError:
        # not a file: treat the argument as inline presentation text
        if "=" in src:
            return src
        raise


def _load_problem(args):
    prob = parse(_read(args.input))
    if getattr(args, "order", None):
        ring = prob.ring.with_order(MonomialOrder(args.order))
        rr = ring.ring
        prob = ParsedProblem(
            ring, IdealSpec(tuple(rr.convert(g) for g in prob.ideal.generators), ring), prob.emax, prob.estimator
        )
    return prob


def _config(args) -> SeriesConfig:
    return SeriesConfig(max_colength=args.max_colength, timeout=args.timeout, workers=args.workers)


def _cache(args):
    directory = args.cache or os.environ.get("HK_CACHE_DIR")
    return ColengthCache(directory) if directory else None


def cmd_compute(args) -> int:
    prob = _load_problem(args)
    report = analyze(
        prob, args.emax, _config(args), _cache(args), with_multiplicity=not args.no_multiplicity, slack=args.slack
    )
    if args.table:
        sys.stdout.write(to_table(report))
    elif args.csv:
        sys.stdout.write(series_csv(report))
    else:
        print(to_json(report.to_dict()))
    return 0


def cmd_fsig(args) -> int:
    prob = _load_problem(args)
    samples, s, ref = analyze_fsig(prob, args.sop, args.emax, _config(args))
    d = prob.ring.dimension
    out = {
        "problem": {"text": _read(args.input).strip(), "p": prob.p, "d": d, "sop": args.sop},
        "splitting": [
            {"e": x.e, "q": x.q, "a_q": x.a_q, "ratio": x.a_q / x.q**d} for x in samples
        ],
        "estimate": {"s": s, "method": "two-point" if len([x for x in samples if x.e >= 1]) >= 2 else "ratio"},
        "notes": [],
    }
    if prob.ring.defining and not prob.ring.is_hypersurface:
        # a Gorenstein artinian reduction certifies R only when R is Cohen-Macaulay
        out["notes"].append("Gorenstein checked on R/J only; assumes R is Cohen-Macaulay")
    if ref is not None:
        rv = reference_values()[ref]
        out["reference"] = {"id": ref, "s": None if rv.s is None else str(rv.s)}
    if args.table:
        for x in samples:
            print(f"{x.e:>3} {x.q:>8} {x.a_q:>14} {x.a_q / x.q**d:>12.8f}")
        print(f"s(R) ~ {s:.8f}")
    else:
        print(to_json(out))
    return 0


def cmd_bounds(args) -> int:
    e = Fraction(args.e) if args.e is not None else None
    e_val = int(e) if e is not None and e.denominator == 1 else (float(e) if e is not None else 2)
    traits = RingTraits(
        hypersurface=args.hypersurface,
        cohen_macaulay=args.hypersurface or args.cm,
        gorenstein_non_f_rational=args.non_f_rational,
        mu_m=args.mu,
    )
    entries = closed_form_bounds(args.d, args.p, e_val, args.t, traits)
    if args.alpha is not None:
        for b in entries:
            b.check(args.alpha, args.slack)
    print(to_json({"d": args.d, "p": args.p, "e": str(e_val), "t": args.t, "bounds": [b.to_dict() for b in entries]}))
    return 0


def cmd_verify(args) -> int:
    from .verify import run_verify

    cfg = SeriesConfig(max_colength=args.max_colength, timeout=args.timeout)
    results = run_verify(args.dir, args.filter, args.budget, config=cfg)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)} passed, {len(failed)} failed")
    if failed:
        names = sorted({r.fixture for r in failed})
        print("failing fixtures: " + ", ".join(names), file=sys.stderr)
        return EXIT_VERIFY
    return 0


def _add_engine_flags(sp):
    sp.add_argument("--emax", type=int, default=None)
    sp.add_argument("--order", choices=["degrevlex", "deglex", "lex"], default=None)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--cache", default=None, help="cache directory (default: $HK_CACHE_DIR)")
    sp.add_argument("--max-colength", type=int, default=DEFAULT_MAX_COLENGTH)
    sp.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT, help="seconds per sample")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hk", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"hk {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("compute", help="Hilbert-Kunz series, estimate and bounds")
    c.add_argument("input", help="presentation file, '-' for stdin, or inline text")
    _add_engine_flags(c)
    fmt = c.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON report (default)")
    fmt.add_argument("--table", action="store_true")
    fmt.add_argument("--csv", action="store_true", help="series table as CSV")
    c.add_argument("--no-multiplicity", action="store_true", help="skip e(I) and the bounds")
    c.add_argument("--slack", type=float, default=1e-2)
    c.set_defaults(func=cmd_compute)

    f = sub.add_parser("fsig", help="F-signature of a Gorenstein ring via a system of parameters")
    f.add_argument("input")
    f.add_argument("--sop", required=True, help='e.g. "x+y, z"')
    _add_engine_flags(f)
    f.add_argument("--table", action="store_true")
    f.set_defaults(func=cmd_fsig)

    b = sub.add_parser("bounds", help="closed-form lower bounds for e_HK")
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--p", type=int, required=True)
    b.add_argument("--e", default=None, help="multiplicity e(R)")
    b.add_argument("--t", type=int, default=0, help="number of generators of I")
    b.add_argument("--mu", type=int, default=None, help="embedding dimension mu(m)")
    b.add_argument("--alpha", type=float, default=None, help="computed e_HK to compare")
    b.add_argument("--slack", type=float, default=1e-2)
    b.add_argument("--hypersurface", action="store_true")
    b.add_argument("--cm", action="store_true", help="ring is Cohen-Macaulay")
    b.add_argument("--non-f-rational", action="store_true", help="ring is Gorenstein but not F-rational")
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("verify", help="run the fixture corpus")
    v.add_argument("dir")
    v.add_argument("--filter", default=None, help="fixture name substring or check tag")
    v.add_argument("--budget", type=float, default=None, help="total seconds")
    v.add_argument("--max-colength", type=int, default=DEFAULT_MAX_COLENGTH)
    v.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except PresentationError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceExceeded as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValidationError, PreconditionError, DomainError, EstimateError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
