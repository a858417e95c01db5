"""Command-line front end: one subcommand per report, exact outputs only."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings

from . import numerology as nm
from .algebra import PrimeField
from .census import (
    CONVENTIONS,
    bun_calibration,
    count_chain_stack,
    count_stratum,
    verify_count_identity,
)
from .nilstrata import FormMismatch, proposition_report
from .spectral import CharPoint, classify, pushforward_check, sample_strata

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2
WORKERS_ENV = "HITCHIN_WORKERS"


class OracleFailure(Exception):
    """A report was produced but its verdict is FAIL."""

    def __init__(self, report):
        super().__init__("oracle check failed")
        self.report = report


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _seed(text):
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _poly_list(text):
    """``"c0,c1;c0,c1,c2"`` -> one coefficient list per ``a_i``."""
    return [list(_int_list(part)) for part in text.split(";")]


# -- subcommands --------------------------------------------------------------------

def _setup(args, n=None):
    canonical = True if getattr(args, "canonical", False) else None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", nm.CoprimalityWarning)
        return nm.make_setup(args.g, args.d, args.n if n is None else n, args.e, canonical)


def cmd_dims(args):
    return nm.dims_report(_setup(args))


def cmd_strata(args):
    rows = []
    setup = _setup(args) if args.g is not None and args.d is not None else None
    for label in nm.enumerate_lambda(args.n):
        row = {"lambda": label.to_json(), "s": label.s, "reduced_rank": label.reduced_rank,
               "elliptic": label.is_elliptic()}
        if setup is not None:
            row["base_dim"] = nm.stratum_base_dim(label, setup)
        rows.append(row)
    return rows


def cmd_support(args):
    return [row.to_json() for row in nm.exclusion_sweep(_setup(args))]


def cmd_ledger(args):
    with open(args.components, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data.get("components")
    if not isinstance(data, list):
        raise ValueError("component file must hold a list of {n, d_a, delta} objects")
    comps = [nm.LedgerComponent(int(c["n"]), int(c["d_a"]), int(c["delta"])) for c in data]
    entry = nm.SevereLedgerEntry(tuple(comps))
    n = sum(c.n for c in comps) if args.n is None else args.n
    return nm.severi_ledger(entry, _setup(args, n))


def cmd_nilpotent(args):
    report = proposition_report(args.g, args.d, args.n, args.e, args.bound)
    if not args.rows:
        report = {k: v for k, v in report.items() if k != "rows"}
    return report


def cmd_spectral(args):
    if args.g != 0:
        raise ValueError("explicit spectral models are implemented for g = 0 only")
    setup = _setup(args)
    if args.a is not None:
        point = CharPoint(PrimeField(args.q), args.d, tuple(args.a))
        if point.n != args.n:
            raise ValueError(f"--a gives {point.n} coefficients but --n is {args.n}")
        report = classify(point, check_infinity=args.check_infinity,
                          extension_degrees=args.extensions).to_json()
    else:
        report = sample_strata(setup, args.q, args.count, args.seed,
                               force_zero=args.force_zero, workers=args.workers,
                               check_infinity=args.check_infinity)
    direct, closed = pushforward_check(setup)
    report["pushforward"] = [direct, closed]
    return report


def cmd_count(args):
    if args.chain is not None:
        return count_chain_stack(args.q, args.label, args.chain, args.window).to_json()
    return count_stratum(args.q, args.d, args.n, args.e, (args.label, args.deg),
                         args.convention, args.window, args.workers).to_json()


def cmd_verify(args):
    if args.bun:
        report = bun_calibration(args.q, args.n, args.e, args.window)
        if report["verdict"] != "PASS":
            raise OracleFailure(report)
        return report
    if args.label is None or args.deg is None:
        raise ValueError("verify needs --label and --deg (or --bun)")
    report = verify_count_identity(args.q, args.d, args.n, args.e, (args.label, args.deg),
                                   args.window, args.workers)
    chosen = report["conventions"][args.convention]
    report["convention"] = args.convention
    report["value"] = chosen["value"]
    report["tail"] = chosen["tail"]
    report["identity"]["verdict"] = chosen["verdict"]
    if chosen["verdict"] != "PASS":
        raise OracleFailure(report)
    return report


# -- parser -------------------------------------------------------------------------

def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--workers", type=_positive, default=None)

    parser = _Parser(prog="hitchin", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    def geometry(p, n_required=True):
        p.add_argument("--g", type=int, required=True)
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--n", type=int, required=n_required)
        p.add_argument("--e", type=int, default=1)
        p.add_argument("--canonical", action="store_true")

    geometry(add("dims", cmd_dims, "dimension formulas at one point"))

    p = add("strata", cmd_strata, "list the (n, m) labels of rank n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--g", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--e", type=int, default=1)

    geometry(add("support", cmd_support, "support-exclusion sweep over all labels"))

    p = add("ledger", cmd_ledger, "Severi ledger from a JSON component file")
    geometry(p, n_required=False)
    p.add_argument("--components", required=True)

    p = add("nilpotent", cmd_nilpotent, "nilpotent-cone strata dimensions")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--e", type=int, default=0)
    p.add_argument("--bound", type=int, default=6)
    p.add_argument("--rows", action="store_true", help="include every stratum row")

    p = add("spectral", cmd_spectral, "classify one base point or sample many")
    p.add_argument("--g", type=int, default=0)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=_poly_list, help='coefficients, e.g. "0;0,4" for u^2 + 4t')
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--force-zero", action="store_true")
    p.add_argument("--check-infinity", action="store_true")
    p.add_argument("--extensions", type=_int_list, default=())

    def census(p):
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--d", type=int, default=1)
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--e", type=int, default=0)
        p.add_argument("--label", type=_int_list)
        p.add_argument("--deg", type=_int_list)
        p.add_argument("--convention", choices=CONVENTIONS, default="sat")
        p.add_argument("--window", type=int, default=6)

    p = add("count", cmd_count, "groupoid count of a stratum or of a chain stack")
    census(p)
    p.add_argument("--chain", type=_int_list, metavar="F", help="chain degrees f; counts chains")

    p = add("verify", cmd_verify, "counting identity or Bun calibration")
    census(p)
    p.add_argument("--bun", action="store_true", help="run the Bun calibration instead")
    return parser


# -- output -------------------------------------------------------------------------

def _assert_exact(obj):
    if isinstance(obj, float):
        raise AssertionError("floating point value in report")
    if isinstance(obj, dict):
        for v in obj.values():
            _assert_exact(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _assert_exact(v)


def _rows(report):
    if isinstance(report, list):
        return report
    if isinstance(report.get("rows"), list) and report["rows"]:
        return report["rows"]
    return [report]


def _cell(value):
    if isinstance(value, (dict, list)):
        return json.dumps(value, separators=(",", ":"))
    if isinstance(value, bool):
        return "true" if value else "false"
    return "" if value is None else str(value)


def render(report, fmt) -> str:
    if fmt == "json":
        return json.dumps(report, separators=(",", ":")) + "\n"
    rows = _rows(report)
    columns = sorted({k for row in rows for k in row})
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(c)) for c in columns])
        return buf.getvalue()
    cells = [[_cell(row.get(c)) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


def _fail(kind, message, code):
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit": code}) + "\n")
    return code


def _default_workers():
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer")
    return value


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_INVALID)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    try:
        if args.workers is None:
            args.workers = _default_workers()
        report = args.func(args)
        _assert_exact(report)
    except OracleFailure as exc:
        sys.stdout.write(render(exc.report, args.format))
        return _fail("oracle", str(exc), EXIT_FAILED)
    except (AssertionError, FormMismatch) as exc:
        return _fail("assertion", str(exc) or "assertion failed", EXIT_FAILED)
    except (ValueError, TypeError, KeyError, OSError, ArithmeticError) as exc:
        return _fail(type(exc).__name__, str(exc), EXIT_INVALID)
    sys.stdout.write(render(report, args.format))
    return EXIT_OK
