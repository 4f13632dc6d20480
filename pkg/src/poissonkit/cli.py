"""Command-line interface.

Exit codes: 0 all requested checks pass, 1 some axiom fails (or no alpha
exists), 2 input or usage error.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path
from typing import List, Optional

from . import formats
from .census import DEFAULT_CAP, CensusSpec, run_census
from .endv import Catalog, SpaceShape, default_catalog, survey
from .errors import DomainError, InputError
from .scalars import FieldSpec
from .taxonomy import ALL_KINDS, AlphaStatus, StructureKind, check, classify_reports, kind_spec, solve_alpha

KIND_NAMES = ", ".join(k.value for k in ALL_KINDS)


def _emit(args, command: str, digest: str, result: dict, text: str):
    if args.format == "machine":
        sys.stdout.write(formats.dumps(formats.envelope(command, digest, result)))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _file_digest(path: str) -> str:
    return formats.digest_bytes(Path(path).read_bytes())


def _report_lines(report) -> List[str]:
    head = f"{report.kind.value}: {'PASS' if report.passed else 'FAIL'}"
    if report.alpha_used is not None:
        head += f" (alpha = {report.alpha_used})"
    lines = [head]
    for f in report.failures:
        line = f"  - {f.axiom}"
        if f.witness is not None:
            line += f" at {tuple(f.witness)}"
        if f.residual is not None:
            line += f", residual ({', '.join(f.residual.format())})"
        lines.append(line)
    return lines


def cmd_check(args) -> int:
    a = formats.load_algebra(args.path)
    if args.all:
        kinds = list(ALL_KINDS)
    elif args.kind:
        kinds = [StructureKind.from_name(k) for k in args.kind]
    else:
        raise InputError(f"give --kind NAME or --all; kinds: {KIND_NAMES}")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        reports = [check(k, a) for k in kinds]
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    result = {"reports": [formats.axiom_report_to_dict(r, a.field) for r in reports]}
    text = "\n".join(line for r in reports for line in _report_lines(r))
    _emit(args, "check", _file_digest(args.path), result, text)
    return 0 if all(r.passed for r in reports) else 1


def cmd_classify(args) -> int:
    a = formats.load_algebra(args.path)
    reports = classify_reports(a)
    result = formats.classification_to_dict(reports, a.field)
    lines = []
    for kind, r in reports.items():
        status = "not-applicable" if r is None else ("passed" if r.passed else "failed")
        lines.append(f"{kind.value:<20} {status}")
    lines.append(f"passed {len(result['passed'])} / failed {len(result['failed'])} / "
                 f"not-applicable {len(result['not_applicable'])}")
    _emit(args, "classify", _file_digest(args.path), result, "\n".join(lines))
    return 0


def cmd_solve_alpha(args) -> int:
    a = formats.load_algebra(args.path)
    kind = StructureKind.from_name(args.kind)
    sol = solve_alpha(kind, a)
    result = formats.alpha_solution_to_dict(kind, sol)
    _emit(args, "solve-alpha", _file_digest(args.path), result, f"{kind.value}: {sol}")
    return 1 if sol.status is AlphaStatus.NO_SOLUTION else 0


def cmd_survey(args) -> int:
    shape = SpaceShape(args.dim, args.subdim)
    field = FieldSpec.parse(args.field)
    catalog = Catalog.load(args.catalog) if args.catalog else default_catalog()
    report = survey(shape, catalog, field, workers=args.workers)
    result = formats.survey_report_to_dict(report)
    digest = formats.digest_object({"shape": result["shape"], "field": result["field"],
                                    "catalog": result["catalog"]})
    lines = [f"survey n={shape.n} m={shape.m} over {field}: {len(report.rows)} rows, "
             f"{report.closed_rows} closed"]
    lines += [f"{k.value:<20} {c}" for k, c in report.counts.items()]
    lines.append(f"remark_check (left angle-circle rows are right angle-circle): {report.remark_check}")
    _emit(args, "survey", digest, result, "\n".join(lines))
    return 0


def cmd_census(args) -> int:
    field = FieldSpec.parse(args.field)
    kinds = ()
    if args.kinds:
        kinds = tuple(StructureKind.from_name(k.strip()) for k in args.kinds.split(",") if k.strip())
    spec = CensusSpec(field, args.dim, args.with_derivation, kinds, args.cap)
    res = run_census(spec, workers=args.workers)
    result = formats.census_result_to_dict(res)
    lines = [f"census over {field}, dim {spec.dim}, "
             f"{'with' if spec.with_derivation else 'without'} derivation: {res.total_enumerated} tuples"]
    for k, c in res.counts.items():
        w = res.witnesses.get(k)
        lines.append(f"{k.value:<20} {c}" + (f"  (first at index {w.index})" if w else ""))
    _emit(args, "census", formats.digest_object(result["spec"]), result, "\n".join(lines))
    return 0


def cmd_kinds(args) -> int:
    for k in ALL_KINDS:
        print(f"{k.value:<20} {kind_spec(k).describe()}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poissonkit",
        description="Check, classify and search Poisson-type algebras given by structure constants.",
        epilog=f"kinds: {KIND_NAMES}")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("text", "machine"), default="text")

    p = sub.add_parser("check", help="check one or more kinds on an algebra file")
    p.add_argument("path")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--kind", action="append", help="kind name (repeatable)")
    group.add_argument("--all", action="store_true", help="check all 21 kinds")
    fmt(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="list passed / failed / not-applicable kinds")
    p.add_argument("path")
    fmt(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve-alpha", help="solve for the scalar of tailed-sc-3/5/6/7")
    p.add_argument("path")
    p.add_argument("--kind", required=True)
    fmt(p)
    p.set_defaults(func=cmd_solve_alpha)

    p = sub.add_parser("survey", help="classify template algebras inside End(V)")
    p.add_argument("--dim", type=int, required=True, help="dim V")
    p.add_argument("--subdim", type=int, required=True, help="dim W, 0 < m < n")
    p.add_argument("--field", default="Q")
    p.add_argument("--catalog", help="JSON catalog overriding the default templates")
    p.add_argument("--workers", type=int, default=1)
    fmt(p)
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("census", help="enumerate all structure constants over GF(p)")
    p.add_argument("--field", required=True, help="F<p>")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--with-derivation", action="store_true")
    p.add_argument("--kinds", help="comma-separated kind names (default: all applicable)")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--workers", type=int, default=1)
    fmt(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("kinds", help="list kind names and their identities")
    p.set_defaults(func=cmd_kinds)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
