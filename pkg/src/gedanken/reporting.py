"""Serialization of scenario reports: summary.json and intensity CSVs.

``summary.json`` carries every scalar field (schema-versioned, keys sorted,
full float precision), ``intensity.csv`` the pattern samples, and
``intensity_reference.csv`` the fixed-diaphragm baseline when the run
produced one.  Identical runs produce byte-identical files apart from the
``duration_s`` field.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .config import SCHEMA_VERSION
from .scenarios import ScenarioReport


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def summary_dict(report: ScenarioReport) -> dict:
    """Scalar view of a report, ready for JSON."""
    return _jsonable(
        {
            "schema_version": SCHEMA_VERSION,
            "scenario": report.scenario,
            "config": report.config,
            "duration_s": report.duration_s,
            "before": report.before.as_dict() if report.before else None,
            "after": report.after.as_dict() if report.after else None,
            "purity_before": report.purity_before,
            "purity_after": report.purity_after,
            "visibility": report.visibility,
            "fringe_spacing": report.fringe_spacing,
            "tag_overlap": report.tag_overlap,
            "details": report.details,
            "warnings": list(report.warnings),
        }
    )


def _write_csv(path: Path, x: np.ndarray, values: np.ndarray) -> None:
    lines = ["x,intensity"]
    lines.extend(f"{float(a)!r},{float(b)!r}" for a, b in zip(x, values))
    path.write_text("\n".join(lines) + "\n")


def emit_report(report: ScenarioReport, out_dir: str | Path) -> dict[str, Path]:
    """Write the report files into ``out_dir`` (created if needed).

    Returns the mapping of artifact name to path.  I/O failures propagate as
    OSError with the offending path in the message.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}
    summary_path = out / "summary.json"
    summary_path.write_text(json.dumps(summary_dict(report), indent=2, sort_keys=True) + "\n")
    paths["summary"] = summary_path
    if report.x is not None and report.intensity is not None:
        csv_path = out / "intensity.csv"
        _write_csv(csv_path, report.x, report.intensity)
        paths["intensity"] = csv_path
    if report.x is not None and report.reference_intensity is not None:
        ref_path = out / "intensity_reference.csv"
        _write_csv(ref_path, report.x, report.reference_intensity)
        paths["intensity_reference"] = ref_path
    return paths
