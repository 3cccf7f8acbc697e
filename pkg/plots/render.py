#!/usr/bin/env python3
"""Render comparison figures from gedanken run outputs.

Standalone: reads only the published summary.json / intensity.csv files, never
the simulation code.  Three figure kinds:

    pattern-overlay    fixed-diaphragm baseline vs tagged pattern, one run dir
    visibility-sweep   visibility vs gaussian kernel width across several runs,
                       with the analytic exp(-s^2 a^2 / 2) overlay
    lp-curve           transition-probability scan with its zeros marked

Usage:
    python3 render.py pattern-overlay --run DIR --out FIG.png
    python3 render.py visibility-sweep --out FIG.png SUMMARY.json [...]
    python3 render.py lp-curve --run DIR --out FIG.png

Exit codes: 0 on success, 1 on bad inputs (missing files, schema mismatch,
or sweep points outside the agreement band).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

EXPECTED_SCHEMA = 1
FIGSIZE = (7.5, 4.5)
DPI = 144
SWEEP_BAND = 0.02

plt.rcParams.update({
    "figure.figsize": FIGSIZE,
    "figure.dpi": DPI,
    "savefig.dpi": DPI,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
})


class PlotDataError(Exception):
    """Missing, malformed, or out-of-band input data."""


@dataclass(frozen=True)
class PlotSpec:
    kind: str  # pattern-overlay | visibility-sweep | lp-curve
    inputs: tuple[Path, ...]
    output: Path


def load_summary(path: Path) -> dict:
    if not path.is_file():
        raise PlotDataError(f"missing summary file: {path}")
    data = json.loads(path.read_text())
    version = data.get("schema_version")
    if version != EXPECTED_SCHEMA:
        raise PlotDataError(
            f"{path}: schema_version {version!r} not supported (expected {EXPECTED_SCHEMA})"
        )
    return data


def load_curve(path: Path) -> tuple[np.ndarray, np.ndarray]:
    if not path.is_file():
        raise PlotDataError(f"missing curve file: {path}")
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    return data[:, 0], data[:, 1]


def render_pattern_overlay(spec: PlotSpec) -> None:
    (run_dir,) = spec.inputs
    summary = load_summary(run_dir / "summary.json")
    x, pattern = load_curve(run_dir / "intensity.csv")
    ref_path = run_dir / "intensity_reference.csv"
    if not ref_path.is_file():
        raise PlotDataError(
            f"{run_dir}: no intensity_reference.csv; overlay needs a run with a "
            "which-way tag (double-slit recoiling/photon mode)"
        )
    _, reference = load_curve(ref_path)
    fig, ax = plt.subplots()
    ax.plot(x, reference, color="0.45", lw=1.0, label="fixed diaphragm")
    tag = summary.get("tag_overlap")
    label = "tagged" if tag is None else f"tagged, |D(a)| = {tag:.3f}"
    ax.plot(x, pattern, color="#c23b22", lw=1.2, label=label)
    vis = summary.get("visibility")
    if vis is not None:
        ax.annotate(
            f"visibility = {vis:.3f}",
            xy=(0.02, 0.92),
            xycoords="axes fraction",
            bbox={"boxstyle": "round", "fc": "white", "ec": "0.6"},
        )
    half = 0.35 * (x[-1] - x[0])
    center = 0.5 * (x[0] + x[-1])
    ax.set_xlim(center - half, center + half)
    ax.set_xlabel("screen position")
    ax.set_ylabel("intensity")
    ax.legend(loc="upper right")
    fig.savefig(spec.output, bbox_inches="tight")
    plt.close(fig)


def render_visibility_sweep(spec: PlotSpec) -> None:
    points = []
    separation = None
    for path in spec.inputs:
        summary = load_summary(path)
        config = summary.get("config", {})
        kernel = config.get("kernel", {})
        if kernel.get("kind") != "gaussian":
            raise PlotDataError(f"{path}: sweep overlay needs gaussian kernels, got {kernel.get('kind')!r}")
        a = config.get("aperture", {}).get("separation")
        if separation is None:
            separation = a
        elif a != separation:
            raise PlotDataError("sweep runs disagree on the slit separation")
        points.append((kernel["s"], summary["visibility"]))
    if len(points) < 2:
        raise PlotDataError("need at least two summaries for a sweep")
    points.sort()
    s_values = np.array([p[0] for p in points])
    visibilities = np.array([p[1] for p in points])
    analytic_at_points = np.exp(-(s_values**2) * separation**2 / 2.0)
    worst = float(np.abs(visibilities - analytic_at_points).max())
    if worst > SWEEP_BAND:
        raise PlotDataError(
            f"simulated visibility deviates from exp(-s^2 a^2/2) by {worst:.4f} "
            f"(band {SWEEP_BAND})"
        )
    dense = np.linspace(0.0, float(s_values[-1]) * 1.05, 400)
    fig, ax = plt.subplots()
    ax.plot(dense, np.exp(-(dense**2) * separation**2 / 2.0), color="0.45", lw=1.0,
            label=r"tag overlap $e^{-s^2 a^2/2}$")
    ax.plot(s_values, visibilities, "o", color="#c23b22", ms=5,
            label=f"simulated (max dev {worst:.4f})")
    ax.set_xlabel("kernel width s")
    ax.set_ylabel("central fringe visibility")
    ax.set_ylim(0.0, 1.05)
    ax.legend(loc="upper right")
    fig.savefig(spec.output, bbox_inches="tight")
    plt.close(fig)


def render_lp_curve(spec: PlotSpec) -> None:
    (run_dir,) = spec.inputs
    summary = load_summary(run_dir / "summary.json")
    delta_e, curve = load_curve(run_dir / "intensity.csv")
    details = summary.get("details", {})
    fig, ax = plt.subplots()
    ax.plot(delta_e, curve, color="#1f5fa8", lw=1.2)
    for i, zero in enumerate(details.get("zeros", [])):
        ax.axvline(zero, color="0.55", lw=0.8, ls="--",
                   label="zeros at $2\\pi n/t$" if i == 0 else None)
    half = details.get("half_width_delta_e")
    if half is not None:
        ax.axvspan(0.0, half, color="#1f5fa8", alpha=0.12,
                   label=f"half width {half:.3f}")
    ax.set_xlabel("energy mismatch")
    ax.set_ylabel("relative transition probability")
    ax.set_ylim(0.0, 1.05)
    ax.legend(loc="upper right")
    fig.savefig(spec.output, bbox_inches="tight")
    plt.close(fig)


RENDERERS = {
    "pattern-overlay": render_pattern_overlay,
    "visibility-sweep": render_visibility_sweep,
    "lp-curve": render_lp_curve,
}


def render(spec: PlotSpec) -> Path:
    """Validate inputs and write the figure for the given spec."""
    try:
        renderer = RENDERERS[spec.kind]
    except KeyError:
        raise PlotDataError(f"unknown figure kind {spec.kind!r}") from None
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    renderer(spec)
    return spec.output


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in ("pattern-overlay", "lp-curve"):
        sp = sub.add_parser(kind)
        sp.add_argument("--run", type=Path, required=True, help="run directory")
        sp.add_argument("--out", type=Path, required=True, help="output image path")
    sp = sub.add_parser("visibility-sweep")
    sp.add_argument("summaries", type=Path, nargs="+", help="summary.json paths")
    sp.add_argument("--out", type=Path, required=True, help="output image path")
    args = parser.parse_args(argv)
    inputs = tuple(args.summaries) if args.kind == "visibility-sweep" else (args.run,)
    try:
        out = render(PlotSpec(args.kind, inputs, args.out))
    except (PlotDataError, json.JSONDecodeError, OSError) as exc:
        print(f"render: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
