"""gnepdeg command line.

Exit codes: 0 success, 1 usage or parse error, 2 precondition violated,
3 selftest failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import fjsys, instancefile, selfcheck
from .degrees import (
    InfeasibleActiveSetWarning,
    PreconditionError,
    format_active,
    gnep_degree_fixed,
    gnep_degree_total,
    lambda_active_sets,
    nep_degree_total,
    nep_overrides,
    parse_active,
)

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_SELFTEST = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out=None) -> None:
    (out or sys.stdout).write(text if text.endswith("\n") else text + "\n")


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _breakdown_rows(breakdown: dict) -> list[dict]:
    return [{"active": format_active(e), "degree": v} for e, v in breakdown.items()]


def _human_breakdown(breakdown: dict) -> list[str]:
    width = max((len(format_active(e)) for e in breakdown), default=0)
    return [f"{format_active(e):<{width}}  {v}" for e, v in breakdown.items()]


def _breakdown(spec, args, overrides=None):
    shape = spec.shape
    if getattr(args, "active", None):
        e = parse_active(args.active, shape.n_players)
        breakdown = {e: gnep_degree_fixed(shape, e, overrides)}
        return sum(breakdown.values()), breakdown
    return gnep_degree_total(shape, overrides)


def cmd_degree(args) -> int:
    spec = instancefile.load(args.instance)
    total, breakdown = _breakdown(spec, args)
    if args.json:
        _emit(json.dumps({"command": "degree", "total": total, "breakdown": _breakdown_rows(breakdown)}, indent=2))
        return EXIT_OK
    lines = _human_breakdown(breakdown) if args.per_active or args.active else []
    _emit("\n".join(lines + [f"total: {total}"]))
    return EXIT_OK


def cmd_bound(args) -> int:
    spec = instancefile.load(args.instance)
    overrides = spec.check_overrides()
    total, breakdown = _breakdown(spec, args, overrides)
    generic, _ = _breakdown(spec, args)
    if args.json:
        doc = {
            "command": "bound",
            "total": total,
            "breakdown": _breakdown_rows(breakdown),
            "generic_total": generic,
            "check_degrees": [{"player": i, "label": j, "degree": list(d)} for (i, j), d in sorted(overrides.items())],
        }
        _emit(json.dumps(doc, indent=2))
        return EXIT_OK
    _emit("\n".join(_human_breakdown(breakdown) + [f"total: {total}", f"generic total: {generic}"]))
    return EXIT_OK


def cmd_nep_degree(args) -> int:
    spec = instancefile.load(args.instance)
    shape = spec.shape
    if not shape.is_nep():
        raise PreconditionError("not an NEP: some constraint depends on another player's variables")
    total, breakdown = nep_degree_total(shape)
    via_gnep, _ = gnep_degree_total(shape, nep_overrides(shape))
    if args.json:
        doc = {"command": "nep-degree", "total": total, "breakdown": _breakdown_rows(breakdown), "gnep_path_total": via_gnep}
        _emit(json.dumps(doc, indent=2))
    else:
        lines = _human_breakdown(breakdown) if args.per_active else []
        _emit("\n".join(lines + [f"total: {total}", f"gnep path total: {via_gnep}"]))
    if via_gnep != total:
        print(f"warning: GNEP-path value {via_gnep} differs from {total}", file=sys.stderr)
    return EXIT_OK


def cmd_active_sets(args) -> int:
    spec = instancefile.load(args.instance)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", InfeasibleActiveSetWarning)
        tuples = lambda_active_sets(spec.shape)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.json:
        _emit(json.dumps({"command": "active-sets", "count": len(tuples),
                          "active_sets": [format_active(e) for e in tuples]}, indent=2))
    else:
        _emit("\n".join([format_active(e) for e in tuples] + [f"count: {len(tuples)}"]))
    return EXIT_OK


def cmd_generate(args) -> int:
    spec = instancefile.load(args.instance)
    if args.coeff_bound < 1:
        raise instancefile.InstanceFileError("--coeff-bound must be at least 1")
    out = instancefile.generate(spec, args.seed, args.coeff_bound)
    _write_output(out.dumps(), args.output)
    return EXIT_OK


def _export_text(instance, active, args) -> str:
    system = fjsys.build(instance, active, args.formulation, args.normalization_seed)
    if args.format == "json":
        return fjsys.export_json(system, instance.shape.nu)
    return fjsys.export_cas(system)


def cmd_export(args) -> int:
    spec = instancefile.load(args.instance)
    instance = spec.instance()
    if args.active is not None:
        active = parse_active(args.active, instance.shape.n_players)
        _write_output(_export_text(instance, active, args), args.output)
        return EXIT_OK
    # every admissible tuple, one file each
    if args.output is None:
        raise instancefile.InstanceFileError("without --active, -o must name an output directory")
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    suffix = "json" if args.format == "json" else "m2"
    for k, active in enumerate(lambda_active_sets(instance.shape), 1):
        path = outdir / f"active_{k:02d}.{suffix}"
        _write_output(_export_text(instance, active, args), str(path))
        print(f"{path}  {format_active(active)}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    extra = {}
    for path in args.fixture or []:
        extra[path] = instancefile.load(path)
    results = selfcheck.run(args.depth, extra)
    for r in results:
        print(f"{'ok  ' if r.ok else 'FAIL'}  {r.name}: {r.detail}")
    failed = sum(not r.ok for r in results)
    print(f"{len(results) - failed} passed, {failed} failed")
    return EXIT_SELFTEST if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gnepdeg", description="Algebraic degrees of generalized Nash equilibrium problems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    inst_help = "instance file (JSON) or the name of a bundled example"

    p = sub.add_parser("degree", help="generic number of complex Fritz-John points")
    p.add_argument("instance", help=inst_help)
    p.add_argument("--per-active", action="store_true", help="print the contribution of every active tuple")
    p.add_argument("--active", help="only this active tuple, e.g. '1:{1};2:{}'")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("bound", help="upper bound from the actual gradient degrees of concrete data")
    p.add_argument("instance", help=inst_help)
    p.add_argument("--active", help="only this active tuple")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("nep-degree", help="degree of an NEP via the own-block formula")
    p.add_argument("instance", help=inst_help)
    p.add_argument("--per-active", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_nep_degree)

    p = sub.add_parser("active-sets", help="list the admissible active tuples")
    p.add_argument("instance", help=inst_help)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_active_sets)

    p = sub.add_parser("generate", help="fill every slot with a seeded generic polynomial")
    p.add_argument("instance", help=inst_help)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coeff-bound", type=int, default=9)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("export", help="write the Fritz-John system for an external CAS")
    p.add_argument("instance", help=inst_help)
    p.add_argument("--active", help="active tuple; omit to export every tuple into the -o directory")
    p.add_argument("--formulation", choices=fjsys.FORMULATIONS, default=fjsys.MINORS)
    p.add_argument("--normalization-seed", type=int, default=None,
                   help="lagrange only: random affine multiplier normalisation instead of l<i>_0 = 1")
    p.add_argument("--format", choices=("cas", "json"), default="cas")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("selftest", help="run the built-in consistency checks")
    p.add_argument("--depth", type=int, default=1, help="0 = bundled examples only")
    p.add_argument("--fixture", action="append", help="extra instance file with an 'expected' block")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PreconditionError as exc:
        print(f"gnepdeg: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ValueError, OSError) as exc:
        print(f"gnepdeg: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
