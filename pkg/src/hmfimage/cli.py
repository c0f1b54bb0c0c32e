"""Command-line entry point: ``hmfimage <command> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import dickson, inertia
from .arith import is_fundamental_discriminant, is_prime, is_squarefree
from .bounds import RunOptions, render_report, run_pipeline
from .heckedata import (
    DataSemanticError,
    DataSyntaxError,
    UnsupportedShape,
    import_lmfdb_json,
    load,
    print_newform_file,
)
from .literal import LiteralError, parse_ideal
from .quadfield import (
    QuadField,
    class_numbers,
    fundamental_unit,
    generator_label,
    prime_labels,
    ray_class_order,
)

EXIT_OK, EXIT_ERROR, EXIT_UNRESOLVED = 0, 1, 2


class UsageError(Exception):
    pass


def _field(text: str) -> QuadField:
    try:
        n = int(text)
    except ValueError as exc:
        raise UsageError(f"not an integer: {text!r}") from exc
    if n > 1 and is_fundamental_discriminant(n):
        return QuadField.from_disc(n)
    if n > 1 and is_squarefree(n):
        return QuadField(n)
    raise UsageError(f"{n} is neither a positive fundamental discriminant nor square-free")


# -- commands -------------------------------------------------------------------


def cmd_analyze(args) -> int:
    if args.cap is not None:
        os.environ["HMFIMAGE_CAP"] = str(args.cap)
    ds = load(args.file)
    report = run_pipeline(ds, RunOptions(extensions=args.extensions, format=args.format))
    if args.format == "json":
        sys.stdout.write(report.dumps())
    else:
        sys.stdout.write(render_report(report.to_json()))
    return report.exit_code


def cmd_field(args) -> int:
    K = _field(args.D)
    sub = args.sub
    if sub == "unit":
        print(fundamental_unit(K))
    elif sub == "classnumbers":
        h, hp = class_numbers(K)
        print(f"h={h} h+={hp}")
    elif sub == "factor":
        if args.arg is None or not args.arg.isdigit() or not is_prime(int(args.arg)):
            raise UsageError("factor needs a rational prime")
        for tag, P in prime_labels(int(args.arg), K).items():
            print(f"{tag} {P} norm={P.norm} {generator_label(P)}")
    elif sub == "rayclass":
        if args.arg is None:
            raise UsageError("rayclass needs a modulus")
        M, _ = parse_ideal(args.arg, K)
        print(ray_class_order(K, M, args.narrow))
    return EXIT_OK


def cmd_dickson(args) -> int:
    cap = args.cap if args.cap is not None else dickson.default_cap()
    if args.action == "classify":
        if args.gens is None:
            raise UsageError("classify needs --gens")
        gens = dickson.parse_gens(args.gens, args.q)
        G = dickson.closure(gens, cap=cap, q=args.q)
        print(dickson.classify(G))
    elif args.action == "order":
        ell, f = dickson.prime_power(args.q)
        print(dickson.expected_image_order(ell, f, args.m))
    elif args.action == "shape":
        if args.kind is None:
            raise UsageError("shape needs --kind")
        gens = dickson.construct_shape(args.kind, args.q, args.m)
        print(";".join(str(g) for g in gens))
    return EXIT_OK


def cmd_inertia(args) -> int:
    try:
        weight = tuple(int(x) for x in args.weight.split(","))
    except ValueError as exc:
        raise UsageError(f"bad weight {args.weight!r}") from exc
    for t in inertia.enumerate_inertial_types(weight, args.case):
        print(t.display())
    return EXIT_OK


def cmd_data(args) -> int:
    if args.action == "print":
        ds = load(args.file)
    else:
        ds = import_lmfdb_json(Path(args.file).read_text(encoding="utf-8"))
    sys.stdout.write(print_newform_file(ds))
    return EXIT_OK


def cmd_report(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
        out = render_report(obj)
    except (json.JSONDecodeError, KeyError, TypeError, AttributeError) as exc:
        raise SyntaxError(f"malformed report: {exc}") from exc
    sys.stdout.write(out)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hmfimage", description="Images of mod-l Galois representations of Hilbert modular forms.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run the elimination pipeline on a newform file")
    a.add_argument("file")
    a.add_argument("--format", choices=["text", "json"], default="text")
    a.add_argument("--extensions", choices=["auto", "strict", "conservative", "pinned"], default="auto")
    a.add_argument("--cap", type=int, default=None)
    a.set_defaults(func=cmd_analyze)

    f = sub.add_parser("field", help="arithmetic of a real quadratic field")
    f.add_argument("D")
    f.add_argument("sub", choices=["unit", "classnumbers", "factor", "rayclass"])
    f.add_argument("arg", nargs="?")
    f.add_argument("--narrow", action="store_true")
    f.set_defaults(func=cmd_field)

    d = sub.add_parser("dickson", help="subgroups of GL2 over a finite field")
    d.add_argument("action", choices=["classify", "order", "shape"])
    d.add_argument("--q", type=int, required=True)
    d.add_argument("--gens")
    d.add_argument("--kind")
    d.add_argument("--m", type=int, default=1)
    d.add_argument("--cap", type=int, default=None)
    d.set_defaults(func=cmd_dickson)

    i = sub.add_parser("inertia", help="tame inertia shapes for a weight")
    i.add_argument("--weight", required=True)
    i.add_argument("--case", choices=["split", "inert", "either"], default="either")
    i.set_defaults(func=cmd_inertia)

    da = sub.add_parser("data", help="newform data files")
    da.add_argument("action", choices=["print", "import-lmfdb"])
    da.add_argument("file")
    da.set_defaults(func=cmd_data)

    r = sub.add_parser("report", help="work with JSON reports")
    r.add_argument("action", choices=["render"])
    r.add_argument("file")
    r.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except DataSemanticError as exc:
        for finding in exc.findings:
            print(f"error: {finding.code}: {finding.message}", file=sys.stderr)
        return EXIT_ERROR
    except (
        OSError,
        DataSyntaxError,
        UnsupportedShape,
        LiteralError,
        UsageError,
        SyntaxError,
        ValueError,
        LookupError,
        dickson.CapExceeded,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
