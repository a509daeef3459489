"""Command-line driver: ``singulab compute | order | verify-paper | equiv``.

Every command writes exactly one JSON document to standard output.  Exit
codes: 0 success, 1 failed verification, 2 bad input, 3 step cap reached.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import time
from fractions import Fraction
from typing import List, Optional

from .base import ResourceLimitError
from .cases import jsonable, run_cases
from .germ import initial_part, order_at
from .homogeneous import determinacy_bound, homogeneous_milnor_formula
from .local_algebra import milnor_number, milnor_number_oracle
from .numeric.estimators import ZERO_TOL
from .numeric.invariance import THEOREMS, check_invariance_case
from .numeric.sampling import SampleCloud
from .parser import ParseError, parse_map, parse_polynomial, split_names

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _clean(value):
    """Recursively turn a report into JSON-compatible values."""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return _clean(dataclasses.asdict(value))
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    value = jsonable(value)
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def _emit(doc, compact=False):
    text = json.dumps(_clean(doc), ensure_ascii=False, separators=(",", ":") if compact else None,
                      indent=None if compact else 2)
    sys.stdout.write(text + "\n")


def _names(csv: str):
    try:
        return split_names(csv)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _point(csv: Optional[str], n: int):
    if csv is None:
        return None
    try:
        pt = [Fraction(s.strip()) for s in csv.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad point {csv!r}: {exc}") from exc
    if len(pt) != n:
        raise InputError(f"point has {len(pt)} coordinates, expected {n}")
    return pt


# ---------------------------------------------------------------------------
# commands

def run_compute(args) -> int:
    names = _names(args.vars)
    f = parse_polynomial(args.poly, names).value
    timings = {}

    t0 = time.perf_counter()
    res = milnor_number(f, max_steps=args.max_steps)
    timings["standard_basis"] = (time.perf_counter() - t0) * 1e3

    report = {
        "input": args.poly,
        "vars": list(names),
        "order": order_at(f),
        "initial_part": None if f.is_zero else initial_part(f).to_str(names),
        "mu": res.value,
        "certificate": str(res.certificate),
        "isolated": res.is_finite,
    }
    if f.is_zero:
        report["initial_isolated"] = False
    else:
        t0 = time.perf_counter()
        report["initial_isolated"] = milnor_number(initial_part(f), max_steps=args.max_steps).is_finite
        timings["initial_part"] = (time.perf_counter() - t0) * 1e3
    if report["initial_isolated"]:
        report["formula_mu"] = homogeneous_milnor_formula(f, args.max_steps)
        report["determinacy_bound"] = determinacy_bound(f, args.max_steps)
    if args.oracle:
        t0 = time.perf_counter()
        oracle = milnor_number_oracle(f, D_max=args.oracle_degree)
        timings["oracle"] = (time.perf_counter() - t0) * 1e3
        report["mu_oracle"] = oracle
    report["timings_ms"] = {k: round(v, 3) for k, v in timings.items()}
    _emit(report, args.json)
    return EXIT_OK


def run_order(args) -> int:
    names = _names(args.vars)
    f = parse_polynomial(args.poly, names).value
    pt = _point(args.point, len(names))
    centered = f.shift(pt) if pt else f
    report = {
        "input": args.poly,
        "vars": list(names),
        "point": [str(c) for c in pt] if pt else ["0"] * len(names),
        "order": order_at(f, pt),
        "initial_part": None if centered.is_zero else initial_part(f, pt).to_str(names),
    }
    _emit(report, args.json)
    return EXIT_OK


def _parse_t(text: Optional[str]):
    if text is None:
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad value for --t: {text!r}") from exc


def run_verify_paper(args) -> int:
    try:
        results = run_cases(args.case, args.k, _parse_t(args.t))
    except KeyError:
        raise InputError(f"unknown case id {args.case!r}")
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    doc = [{"case": r.case, "expected": r.expected, "computed": r.computed, "pass": r.passed,
            "provenance": r.provenance, "error": r.error} for r in results]
    _emit(doc, args.json)
    if not args.quiet:
        width = max(len(r.case) for r in results)
        for r in results:
            sys.stderr.write(f"{r.case:<{width}}  {'PASS' if r.passed else 'FAIL'}\n")
            if not r.passed:
                for name, exp in r.expected.items():
                    got = r.computed.get(name, r.error)
                    sys.stderr.write(f"{'':<{width}}    {name}: expected {exp}, computed {got}\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def run_equiv(args) -> int:
    names = _names(args.vars)
    f = parse_polynomial(args.f, names).value
    g = parse_polynomial(args.g, names).value
    phi = parse_map(args.phi, names).value
    if phi.n_outputs != len(names):
        raise InputError(f"phi has {phi.n_outputs} components, expected {len(names)}")
    try:
        cloud = SampleCloud.geometric([0.0] * len(names), args.radius_max, args.radius_min,
                                      n_radii=args.radii, n_directions=args.samples, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = check_invariance_case(f, g, phi, cloud, theorem=args.theorem, zero_tol=args.zero_tol,
                                   max_steps=args.max_steps)
    _emit(report, args.json)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="singulab", description="Milnor numbers and germ invariants.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="compact single-line JSON")
        sp.add_argument("--max-steps", type=int, default=None,
                        help="reduction step cap (default: $SINGULAB_MAX_STEPS or 10^6)")

    c = sub.add_parser("compute", help="Milnor number and related invariants of a polynomial germ at 0")
    c.add_argument("--vars", required=True, help="comma-separated variable names")
    c.add_argument("--poly", required=True)
    c.add_argument("--oracle", action="store_true", help="also run the truncation oracle")
    c.add_argument("--oracle-degree", type=int, default=16)
    common(c)
    c.set_defaults(func=run_compute)

    o = sub.add_parser("order", help="order and initial part at a point")
    o.add_argument("--vars", required=True)
    o.add_argument("--poly", required=True)
    o.add_argument("--point", help="comma-separated rational coordinates (default: origin)")
    common(o)
    o.set_defaults(func=run_order)

    v = sub.add_parser("verify-paper", help="run the built-in example inventory")
    v.add_argument("--case", help="case id (e.g. ex4.4k2) or family (e.g. ex4.4)")
    v.add_argument("--k", type=int)
    v.add_argument("--t", help="family parameter as p/q")
    v.add_argument("--quiet", action="store_true", help="no table on stderr")
    common(v)
    v.set_defaults(func=run_verify_paper)

    e = sub.add_parser("equiv", help="classify f against g o phi")
    e.add_argument("--vars", default="x,y")
    e.add_argument("--f", required=True)
    e.add_argument("--g", required=True)
    e.add_argument("--phi", required=True, help="map components separated by ';'")
    e.add_argument("--radius-min", type=float, default=2.0 ** -24)
    e.add_argument("--radius-max", type=float, default=2.0 ** -4)
    e.add_argument("--radii", type=int, default=21, help="number of radii")
    e.add_argument("--samples", type=int, default=16, help="number of directions")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--theorem", choices=THEOREMS, default="asymptotic-lipschitz")
    e.add_argument("--zero-tol", type=float, default=ZERO_TOL)
    common(e)
    e.set_defaults(func=run_equiv)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        if exc.source:
            sys.stderr.write(f"  {exc.source}\n  {' ' * exc.position}^\n")
        return EXIT_INPUT
    except (InputError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except ResourceLimitError as exc:
        sys.stderr.write(f"resource limit: {exc}\n")
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
