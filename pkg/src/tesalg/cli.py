"""Command-line front end.

Exit status: 0 on success, 1 when diagnostics are reported, 2 when a query is
refused because it would exceed a resource bound.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .decomposition import COORDINATOR_CHOICES, DEFAULT_MAX_SUBSET_BASE, DEFAULT_MAX_UNIVERSE, QUOTIENT_CHOICES
from .scenario.cases import CASES
from .scenario.robots import BehaviorBoundExceeded
from .specio.document import QUOTIENT_SIDES, ConformQuery, Diagnostic, DivideQuery, LawsQuery, ProductQuery, SpecDocument, SpecError
from .specio.executor import Executor, ResourceRefusal, outcomes_json
from .specio.parser import parse, validate
from .specio.serialize import dumps

EXIT_OK, EXIT_DIAGNOSTICS, EXIT_REFUSED = 0, 1, 2


def _common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="write results to this path instead of stdout")
    p.add_argument("--max-universe", type=int, default=DEFAULT_MAX_UNIVERSE, help="candidate universe size limit")
    p.add_argument("--max-subset-base", type=int, default=DEFAULT_MAX_SUBSET_BASE, help="largest set whose subsets are enumerated")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tesalg", description="Algebra of components over timed-event streams.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and validate a .tes file")
    p.add_argument("file")

    p = sub.add_parser("run", help="execute every query in a .tes file")
    p.add_argument("file")
    _common(p)

    p = sub.add_parser("product", help="product of two declared components")
    p.add_argument("file")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--under", default="sync", metavar="SIGNATURE")
    p.add_argument("--as", dest="as_name")
    _common(p)

    for name, first, second, choices, default in (
        ("divide", "dividend", "divisor", QUOTIENT_CHOICES, "theorem1-lower-bound"),
        ("conform", "plant", "spec", COORDINATOR_CHOICES, "greatest"),
    ):
        p = sub.add_parser(name, help=f"{name} query over declared components and universes")
        p.add_argument("file")
        p.add_argument(first)
        p.add_argument(second)
        p.add_argument("--under", default="sync", metavar="SIGNATURE")
        p.add_argument("--over", nargs="+", required=True, metavar="UNIVERSE")
        p.add_argument("--choose", choices=choices, default=default)
        p.add_argument("--side", choices=QUOTIENT_SIDES, default="right")
        _common(p)

    p = sub.add_parser("laws", help="check product laws on declared components")
    p.add_argument("file")
    p.add_argument("--under", default="sync", metavar="SIGNATURE")
    p.add_argument("--on", nargs="+", required=True, metavar="COMPONENT")
    _common(p)

    p = sub.add_parser("scenario", help="run a robot case study")
    p.add_argument("name", choices=CASES)
    p.add_argument("--horizon", type=Fraction)
    p.add_argument("--period", type=Fraction)
    p.add_argument("--seed", type=int)
    p.add_argument("--report", help="also write the JSON report to this path")
    _common(p)
    return ap


def _load(path: str) -> SpecDocument:
    try:
        source = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SpecError([Diagnostic("error", None, f"cannot read {path}: {e.strerror}")]) from None
    return parse(source)


def _single(args) -> SpecDocument:
    """The file's declarations followed by the one query described on the command line."""
    doc = _load(args.file)
    decls = doc.declarations
    if args.command == "product":
        q = ProductQuery(args.left, args.right, args.under, args.as_name)
    elif args.command == "divide":
        q = DivideQuery(args.dividend, args.divisor, args.under, tuple(args.over), args.choose, args.side)
    elif args.command == "conform":
        q = ConformQuery(args.plant, args.spec, args.under, tuple(args.over), args.choose, args.side)
    else:
        q = LawsQuery(args.under, tuple(args.on))
    single = SpecDocument(decls + [q])
    diags = [d for d in validate(single) if d.severity == "error"]
    if diags:
        raise SpecError(diags)
    return single


def _emit(args, text: str, payload: dict):
    body = dumps(payload) if args.format == "json" else text
    if args.out:
        Path(args.out).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            doc = _load(args.file)
            print(f"{args.file}: ok ({len(doc.declarations)} declarations, {len(doc.queries)} queries)")
            return EXIT_OK
        if args.command == "scenario":
            return _scenario(args)
        doc = _load(args.file) if args.command == "run" else _single(args)
        ex = Executor(doc, max_universe=args.max_universe, max_subset_base=args.max_subset_base)
        outcomes = ex.run()
        _emit(args, "\n".join(o.text for o in outcomes), outcomes_json(outcomes))
        return EXIT_OK
    except SpecError as e:
        where = getattr(args, "file", "<args>")
        for d in e.diagnostics:
            print(f"{where}:{d}", file=sys.stderr)
        return EXIT_DIAGNOSTICS
    except ResourceRefusal as e:
        print(str(e), file=sys.stderr)
        return EXIT_REFUSED


def _scenario(args) -> int:
    from .scenario.cases import run_case

    params = {k: v for k, v in (("horizon", args.horizon), ("period", args.period), ("seed", args.seed)) if v is not None}
    query = "scenario " + " ".join([args.name] + [f"{k}={v}" for k, v in params.items()])
    try:
        rep = run_case(args.name, **params)
    except BehaviorBoundExceeded as e:
        print(str(ResourceRefusal(query, e.bound, e.limit, e.needed)), file=sys.stderr)
        return EXIT_REFUSED
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DIAGNOSTICS
    if args.report:
        Path(args.report).write_text(dumps(rep.to_dict()), encoding="utf-8")
    _emit(args, rep.to_text(), rep.to_dict())
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
