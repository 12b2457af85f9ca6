"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .catalog import (
    SERIES,
    ConstantExpr,
    catalog_get,
    catalog_names,
    verify_entry,
    verify_spec,
)
from .core import (
    CFSpec,
    convergent_sequences,
    dumps_spec,
    evaluate,
    explicit_spec,
    loads_spec,
)
from .errors import GCFError
from .generate import (
    sequences_from_dict,
    sequences_to_cf,
    series_from_dict,
    series_to_cf,
)
from .numerics import (
    DEFAULT_PRECISION,
    format_rational,
    parse_rational,
    rat_to_decimal,
    to_exact,
)
from .transforms import clear_denominators, equivalence_scale, negate, sign_flip

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _int_at_least(lo):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {v}")
        return v
    return parse


def _rational_arg(text):
    try:
        return parse_rational(text)
    except (GCFError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_source(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--in", dest="infile", metavar="FILE", help="CFSpec JSON file")
    g.add_argument("--entry", metavar="NAME", help="catalog entry name")


def _add_output(p):
    p.add_argument("--out", metavar="FILE", help="write the JSON result here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gcflab", description="Exact generalized continued fraction lab.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("eval", help="evaluate a spec to a given depth")
    _add_source(p)
    p.add_argument("--depth", type=_int_at_least(1), required=True)
    p.add_argument("--backend", choices=("exact", "approx"), default="exact")
    p.add_argument("--precision", type=_int_at_least(8), default=DEFAULT_PRECISION,
                   help="mantissa bits for the approx backend (default %(default)s)")
    p.add_argument("--digits", type=_int_at_least(0), default=30)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("convergents", help="list A_n, B_n and A_n/B_n for n = 0..depth")
    _add_source(p)
    p.add_argument("--depth", type=_int_at_least(1), required=True)
    p.add_argument("--digits", type=_int_at_least(0), default=10)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("from-series", help="continued fraction whose convergents are partial sums")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--in", dest="infile", metavar="FILE", help="series JSON file")
    g.add_argument("--series", choices=sorted(SERIES), help="built-in series")
    p.add_argument("--terms", type=_int_at_least(1), required=True)
    p.add_argument("--clear", action="store_true", help="rescale to integer terms")
    _add_output(p)

    p = sub.add_parser("from-sequences", help="recover terms from convergent sequences A, B")
    p.add_argument("--in", dest="infile", metavar="FILE", required=True)
    _add_output(p)

    p = sub.add_parser("transform", help="apply a term transform to a spec")
    p.add_argument("--op", choices=("negate", "signflip", "clear", "scale"), required=True)
    _add_source(p)
    p.add_argument("--depth", type=_int_at_least(1))
    p.add_argument("--scalars", type=_rational_arg, nargs="+", metavar="P/Q")
    _add_output(p)

    p = sub.add_parser("verify", help="compare convergents with a reference constant")
    p.add_argument("name", nargs="?", help="catalog entry")
    p.add_argument("--all", action="store_true", help="every catalog entry")
    p.add_argument("--in", dest="infile", metavar="FILE", help="spec file (needs --target)")
    p.add_argument("--target", help="constant expression, e.g. -1/2*e or 1/2*pi+1")
    p.add_argument("--depth", type=_int_at_least(1))
    p.add_argument("--digits", type=_int_at_least(0))
    p.add_argument("--backend", choices=("exact", "approx"))
    p.add_argument("--precision", type=_int_at_least(8), default=DEFAULT_PRECISION)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("catalog", help="list or show catalog entries")
    csub = p.add_subparsers(dest="catalog_command", required=True, metavar="ACTION")
    q = csub.add_parser("list")
    q.add_argument("--json", action="store_true")
    q = csub.add_parser("show")
    q.add_argument("name")
    _add_output(q)
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "transform":
        if args.op == "scale" and not args.scalars:
            parser.error("argument --scalars: required for --op scale")
        if args.op == "clear" and args.depth is None:
            parser.error("argument --depth: required for --op clear")
        if args.op == "scale" and args.depth is not None and args.depth > len(args.scalars):
            parser.error("argument --depth: exceeds the number of --scalars")
    if args.command == "verify":
        picked = sum(bool(x) for x in (args.name, args.all, args.infile))
        if picked != 1:
            parser.error("verify takes exactly one of NAME, --all, --in")
        if args.infile and not args.target:
            parser.error("argument --target: required with --in")
        if args.infile and (args.depth is None or args.digits is None):
            parser.error("arguments --depth and --digits are required with --in")
    return args


# -- helpers -----------------------------------------------------------------


def _load_spec(args) -> CFSpec:
    if getattr(args, "entry", None):
        return catalog_get(args.entry).spec
    return loads_spec(Path(args.infile).read_text(encoding="utf-8"))


def _emit_spec(spec: CFSpec, out, dest: str | None) -> None:
    text = dumps_spec(spec)
    if dest:
        Path(dest).write_text(text, encoding="utf-8")
    else:
        out.write(text)


def _table(rows, headers, out) -> None:
    cells = [list(map(str, headers))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    for k, r in enumerate(cells):
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")
        if k == 0:
            out.write("  ".join("-" * w for w in widths) + "\n")


# -- commands ----------------------------------------------------------------


def _cmd_eval(args, out) -> int:
    spec = _load_spec(args)
    rep = evaluate(spec, args.depth, args.backend, args.precision)
    value = to_exact(rep.value)
    obj = {
        "name": spec.name, "depth": rep.depth, "value_depth": rep.value_depth,
        "backend": rep.backend, "precision": rep.precision,
        "value": str(rat_to_decimal(value, args.digits)),
        "error_estimate": str(rat_to_decimal(to_exact(rep.error_estimate), args.digits)),
        "error_estimate_rigorous": False,
        "renormalizations": rep.renormalizations,
        "wall_time": round(rep.wall_time, 6), "notes": rep.notes,
    }
    if rep.backend == "exact":
        obj["rational"] = format_rational(value)
    if args.json:
        out.write(json.dumps(obj) + "\n")
    else:
        rows = [(k, v) for k, v in obj.items() if k not in ("rational", "notes") and v is not None]
        _table(rows, ("field", "value"), out)
        for note in rep.notes:
            out.write(f"note: {note}\n")
    return EXIT_OK


def _cmd_convergents(args, out) -> int:
    spec = _load_spec(args)
    A, B = convergent_sequences(spec, args.depth)
    rows = []
    for n in range(args.depth + 1):
        a, b = A[n + 1], B[n + 1]
        val = str(rat_to_decimal(a / b, args.digits)) if b != 0 else "undefined"
        rows.append((n, format_rational(a), format_rational(b), val))
    if args.json:
        for n, a, b, v in rows:
            out.write(json.dumps({"n": n, "A": a, "B": b, "value": v}) + "\n")
    else:
        _table(rows, ("n", "A_n", "B_n", "A_n/B_n"), out)
    return EXIT_OK


def _cmd_from_series(args, out) -> int:
    if args.series:
        series = SERIES[args.series][0]
    else:
        series = series_from_dict(json.loads(Path(args.infile).read_text(encoding="utf-8")))
    spec = series_to_cf(series)
    spec = clear_denominators(spec, args.terms) if args.clear else explicit_spec(spec, args.terms)
    _emit_spec(spec, out, args.out)
    return EXIT_OK


def _cmd_from_sequences(args, out) -> int:
    seqs = sequences_from_dict(json.loads(Path(args.infile).read_text(encoding="utf-8")))
    _emit_spec(sequences_to_cf(seqs), out, args.out)
    return EXIT_OK


def _cmd_transform(args, out) -> int:
    spec = _load_spec(args)
    if args.op == "negate":
        res = negate(spec)
    elif args.op == "signflip":
        res = sign_flip(spec)
    elif args.op == "clear":
        res = clear_denominators(spec, args.depth)
    else:
        res = equivalence_scale(spec, args.scalars, args.depth or len(args.scalars))
    if args.depth is not None and args.op in ("negate", "signflip"):
        res = explicit_spec(res, args.depth)
    _emit_spec(res, out, args.out)
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    if args.infile:
        spec = loads_spec(Path(args.infile).read_text(encoding="utf-8"))
        reports = [verify_spec(spec, ConstantExpr.parse(args.target), args.depth, args.digits,
                               args.backend or "exact", args.precision)]
    else:
        names = catalog_names() if args.all else [args.name]
        reports = [verify_entry(n, args.depth, args.backend, args.digits, args.precision)
                   for n in names]
    if args.json:
        for r in reports:
            out.write(json.dumps(r.to_dict()) + "\n")
    else:
        rows = [(r.name, r.status + (" (printed)" if r.as_printed else ""), r.target, r.depth,
                 r.backend, r.digits_matched, r.threshold,
                 ("pass" if r.passed else "FAIL") + ("" if r.gates_exit else "*"))
                for r in reports]
        _table(rows, ("entry", "status", "target", "depth", "backend", "digits", "need", "result"), out)
        if any(not r.gates_exit for r in reports):
            out.write("* conjecture or as-printed entry: reported, does not affect the exit code\n")
    failed = any(r.gates_exit and not r.passed for r in reports)
    return EXIT_FAIL if failed else EXIT_OK


def _cmd_catalog(args, out) -> int:
    if args.catalog_command == "show":
        _emit_spec(catalog_get(args.name).spec, out, args.out)
        return EXIT_OK
    entries = [catalog_get(n) for n in catalog_names()]
    if args.json:
        for e in entries:
            out.write(json.dumps({"name": e.name, "status": e.status, "target": str(e.target),
                                  "as_printed": e.as_printed, "description": e.description,
                                  "errata": list(e.errata)}) + "\n")
    else:
        rows = [(e.name, e.status + (" (printed)" if e.as_printed else ""), str(e.target),
                 len(e.errata), e.description) for e in entries]
        _table(rows, ("name", "status", "target", "errata", "description"), out)
    return EXIT_OK


_COMMANDS = {
    "eval": _cmd_eval,
    "convergents": _cmd_convergents,
    "from-series": _cmd_from_series,
    "from-sequences": _cmd_from_sequences,
    "transform": _cmd_transform,
    "verify": _cmd_verify,
    "catalog": _cmd_catalog,
}


def run(args: argparse.Namespace, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return _COMMANDS[args.command](args, out)
    except (GCFError, OSError, json.JSONDecodeError, ZeroDivisionError) as exc:
        err.write(f"gcflab: error: {exc}\n")
        return EXIT_USAGE


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
