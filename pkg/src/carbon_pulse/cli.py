"""Command-line interface: run, validate, report.

Exit codes: 0 success, 1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .config import load_config
from .core import ConfigError, DomainError, MappingError, ParseError
from .pipeline import run as run_pipeline
from .reporting import render_table
from .transport import FitError
from .validation import validate_fixtures

EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_USAGE = 2

REPORT_FILES = {
    "s2": "summary_s2.csv",
    "s3": "summary_s3.csv",
    "s4": "summary_s4.csv",
    "s6": "summary_s6.csv",
    "fig1": "fig1_running_mean.csv",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="carbon-pulse", description="Daily CO2 emission estimation pipeline")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute the pipeline on a fixture snapshot")
    run_p.add_argument("--config", required=True, type=Path, help="run-config TOML file")

    val_p = sub.add_parser("validate", help="schema-check a fixture directory")
    val_p.add_argument("fixture_dir", type=Path)

    rep_p = sub.add_parser("report", help="render a summary table from run outputs")
    rep_p.add_argument("--style", required=True, choices=sorted(REPORT_FILES), help="table shape to render")
    rep_p.add_argument("results_dir", type=Path)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; keep its codes.
        return int(exc.code or 0)

    try:
        if args.command == "run":
            config = load_config(args.config)
            out = run_pipeline(config)
            print(f"run complete: {out}")
            return EXIT_OK
        if args.command == "validate":
            report = validate_fixtures(args.fixture_dir)
            print(report.summary())
            return EXIT_OK if report.ok else EXIT_DATA_ERROR
        if args.command == "report":
            table = render_table(args.results_dir / REPORT_FILES[args.style])
            sys.stdout.write(table)
            return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, DomainError, MappingError, FitError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
