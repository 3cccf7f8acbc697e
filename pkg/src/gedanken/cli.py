"""Command-line entry point.

    gedanken <scenario> [--config FILE] [--out DIR] [--set key.path=value ...]

Scenarios: microscope | single-slit | double-slit | von-neumann | landau-peierls.
Exit codes: 0 success, 1 configuration/validation error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import SCENARIOS, parse_config
from .errors import ConfigurationError, GedankenError
from .reporting import emit_report
from .scenarios import run_scenario

_SCENARIO_HELP = {
    "microscope": "momentum-exchange scattering off a Gaussian packet",
    "single-slit": "single-slit diffraction and position detection at the screen",
    "double-slit": "two-slit interference with a fixed or recoiling diaphragm",
    "von-neumann": "ideal K-level measurement, moments before and after",
    "landau-peierls": "perturbative transition-probability scan",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gedanken",
        description="Run one of the canonical gedanken-experiment simulations.",
    )
    sub = parser.add_subparsers(dest="scenario", required=True, metavar="scenario")
    for name in SCENARIOS:
        sp = sub.add_parser(name, help=_SCENARIO_HELP[name])
        sp.add_argument("--config", type=Path, default=None, help="JSON configuration file")
        sp.add_argument(
            "--out", type=Path, default=None, help="output directory (default: runs/<scenario>)"
        )
        sp.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config key, e.g. --set kernel.s=2 (repeatable; wins over the file)",
        )
    return parser


def _headline(report) -> str:
    bits = []
    if report.visibility is not None:
        bits.append(f"visibility={report.visibility:.4f}")
    if report.fringe_spacing is not None:
        bits.append(f"fringe_spacing={report.fringe_spacing:.4f}")
    if report.tag_overlap is not None:
        bits.append(f"tag_overlap={report.tag_overlap:.4f}")
    if report.before is not None and report.after is not None:
        bits.append(
            f"std_p {report.before.std_p:.4f} -> {report.after.std_p:.4f}, "
            f"std_x {report.before.std_x:.4f} -> {report.after.std_x:.4f}"
        )
    if report.purity_after is not None:
        bits.append(f"purity={report.purity_after:.4f}")
    return "; ".join(bits) if bits else "done"


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.scenario, path=args.config, overrides=args.overrides)
    except ConfigurationError as exc:
        print(f"gedanken: configuration error: {exc}", file=sys.stderr)
        return 1
    out_dir = args.out if args.out is not None else Path("runs") / args.scenario
    try:
        report = run_scenario(cfg)
        paths = emit_report(report, out_dir)
    except GedankenError as exc:
        print(f"gedanken: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"gedanken: i/o error: {exc}", file=sys.stderr)
        return 2
    for warning in report.warnings:
        print(f"gedanken: warning: {warning}", file=sys.stderr)
    print(f"{args.scenario}: {_headline(report)}")
    print(f"wrote {paths['summary']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
