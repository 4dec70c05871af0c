"""
cli.py - Command-line entry point for movstab.

Runs problem bundles, validates them, and offers single-command shortcuts that
build one query against a bundle. Reports go to stdout (or --output); logging
goes to stderr. The process exit code is the most severe one of the run.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from movstab import __version__
from movstab.bundle import COMMANDS, load_curves
from movstab.config import OUTPUT_FORMATS, get_config
from movstab.errors import SchemaError
from movstab.report import Report, emit, emit_many
from movstab.utils import ensure_dir
from movstab.workflow import (
    overall_exit_code,
    run_bundle,
    run_bundles,
    run_standalone,
    validate_bundle,
)

# Single-command forms that take a bundle and a polarization.
POLARIZED_COMMANDS = ("stability", "hn", "bgi", "flat", "projflat")


def _add_output_args(parser: argparse.ArgumentParser, config: Dict[str, Any]) -> None:
    parser.add_argument(
        "--format",
        choices=OUTPUT_FORMATS,
        default=config["format"],
        help=f"Report format (default: {config['format']})",
    )
    parser.add_argument("--output", help="Write the report to this file instead of stdout")


def build_parser(config: Dict[str, Any]) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="movstab",
        description="Exact slope stability with respect to movable curve classes",
    )
    parser.add_argument("--version", action="version", version=f"movstab {__version__}")
    parser.add_argument(
        "--log-level",
        default=config["log_level"],
        help=f"Logging level on stderr (default: {config['log_level']})",
    )
    subparsers = parser.add_subparsers(dest="command")

    # Bundle runs
    run = subparsers.add_parser("run", help="Run every query of one or more bundles")
    run.add_argument("bundles", nargs="+", help="Paths to bundle.json files")
    run.add_argument("--only", choices=sorted(COMMANDS), help="Run only queries with this command")
    run.add_argument(
        "--workers",
        type=int,
        default=config["workers"],
        help=f"Worker threads (default: {config['workers']})",
    )
    _add_output_args(run, config)

    validate = subparsers.add_parser("validate", help="Parse a bundle without running queries")
    validate.add_argument("bundle", help="Path to bundle.json")
    _add_output_args(validate, config)

    # Single-command shortcuts against a bundle
    cone = subparsers.add_parser("cone", help="Show a cone of the bundle and test membership")
    cone.add_argument("bundle", help="Path to bundle.json")
    cone.add_argument("--which", choices=("eff", "mov", "nef"), default="mov", help="Cone to show")
    cone.add_argument("--contains", help='Class to test, e.g. "1,-1"')
    cone.add_argument("--mode", choices=("closed", "interior"), default="closed")
    cone.add_argument("--dualize", action="store_true", help="Use the dual of the chosen cone")
    _add_output_args(cone, config)

    for name in POLARIZED_COMMANDS:
        sub = subparsers.add_parser(name, help=f"Run the {name} query at one polarization")
        sub.add_argument("bundle", help="Path to bundle.json")
        sub.add_argument("--at", "--alpha", dest="at", required=True, help='Polarization α, e.g. "1,1"')
        _add_output_args(sub, config)

    segment = subparsers.add_parser("segment", help="Stability intervals along a segment")
    segment.add_argument("bundle", help="Path to bundle.json")
    segment.add_argument("--from", dest="start", required=True, help="Start polarization")
    segment.add_argument("--to", dest="end", required=True, help="End polarization")
    segment.add_argument("--workers", type=int, default=config["workers"])
    _add_output_args(segment, config)

    walls = subparsers.add_parser("walls", help="Wall functionals of the family")
    walls.add_argument("bundle", help="Path to bundle.json")
    _add_output_args(walls, config)

    zariski = subparsers.add_parser("zariski", help="Zariski decomposition over the bundle's curves")
    zariski.add_argument("bundle", help="Path to bundle.json")
    zariski.add_argument("--divisor", required=True, help='Pseudo-effective class, e.g. "2,1"')
    zariski.add_argument("--curves", help="JSON file with candidate curves (default: the bundle's)")
    _add_output_args(zariski, config)

    # Lattice-free numeric gates
    higher = subparsers.add_parser("flat-higher", help="Numeric flatness gate in dimension n")
    higher.add_argument("--n", type=int, required=True, help="Dimension")
    higher.add_argument("--c1H", required=True, help="c1·H^(n-1)")
    higher.add_argument("--c1sqH", required=True, help="c1²·H^(n-2)")
    higher.add_argument("--c2H", required=True, help="c2·H^(n-2)")
    higher.add_argument("--rank", type=int, help="Sheaf rank (adds the λ checks)")
    _add_output_args(higher, config)

    torus = subparsers.add_parser("torus-gate", help="Numeric torus-quotient hypotheses")
    torus.add_argument("--n", type=int, required=True, help="Dimension")
    torus.add_argument("--c2H", required=True, help="c2·H^(n-2)")
    torus.add_argument(
        "--kx-trivial",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="Whether K_X is numerically trivial",
    )
    _add_output_args(torus, config)

    return parser


def _single_query(args: argparse.Namespace) -> Dict[str, Any]:
    """Build the query record of a single-command form."""
    if args.command == "cone":
        query: Dict[str, Any] = {"cmd": "cone", "which": args.which}
        if args.dualize:
            query["dualize"] = True
        if args.contains is not None:
            query["x"] = args.contains
            query["mode"] = args.mode
        return query
    if args.command in POLARIZED_COMMANDS:
        return {"cmd": args.command, "alpha": args.at}
    if args.command == "segment":
        return {"cmd": "segment", "from": args.start, "to": args.end}
    if args.command == "walls":
        return {"cmd": "walls"}
    if args.command == "zariski":
        query = {"cmd": "zariski", "D": args.divisor}
        if args.curves is not None:
            query["curves"] = load_curves(args.curves)
        return query
    if args.command == "flat-higher":
        query = {"cmd": "flat_higher", "n": args.n, "c1H": args.c1H, "c1sqH": args.c1sqH, "c2H": args.c2H}
        if args.rank is not None:
            query["rank"] = args.rank
        return query
    return {"cmd": "torus_gate", "n": args.n, "c2H": args.c2H, "kx_trivial": args.kx_trivial}


def _write(document: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(document)
        return
    path = Path(output)
    ensure_dir(path.parent)
    path.write_text(document, encoding="utf-8")
    print(f"Saved report to {path}", file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    config = get_config()
    parser = build_parser(config)
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

    if args.command is None:
        parser.print_help()
        return 0

    if args.command == "run":
        reports = run_bundles(args.bundles, workers=max(1, args.workers), only=args.only)
        if len(reports) == 1:
            _write(emit(reports[0], args.format), args.output)
        else:
            _write(emit_many(reports, args.format), args.output)
        return overall_exit_code(reports)

    if args.command == "validate":
        report = validate_bundle(args.bundle)
    elif args.command in ("flat-higher", "torus-gate"):
        report = run_standalone(_single_query(args))
    else:
        workers = max(1, getattr(args, "workers", config["workers"]))
        try:
            query = _single_query(args)
        except SchemaError as e:
            report = Report(bundle=args.bundle, exit_code=e.exit_code)
            report.errors.append({"type": "SchemaError", "message": e.message, "path": e.path or "$"})
        else:
            report = run_bundle(args.bundle, workers=workers, queries=[query])

    _write(emit(report, args.format), args.output)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
