"""Figure scripts: rendering, the sweep agreement band, schema checks, determinism."""

import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

import render
from render import PlotDataError, PlotSpec


class TestPatternOverlay:
    def test_renders(self, recoiling_run, tmp_path):
        out = render.render(PlotSpec("pattern-overlay", (recoiling_run,), tmp_path / "overlay.png"))
        assert out.is_file() and out.stat().st_size > 10_000

    def test_deterministic(self, recoiling_run, tmp_path):
        a = render.render(PlotSpec("pattern-overlay", (recoiling_run,), tmp_path / "a.png"))
        b = render.render(PlotSpec("pattern-overlay", (recoiling_run,), tmp_path / "b.png"))
        assert a.read_bytes() == b.read_bytes()

    def test_missing_reference_rejected(self, recoiling_run, tmp_path):
        partial = tmp_path / "partial"
        partial.mkdir()
        shutil.copy(recoiling_run / "summary.json", partial / "summary.json")
        shutil.copy(recoiling_run / "intensity.csv", partial / "intensity.csv")
        with pytest.raises(PlotDataError, match="intensity_reference"):
            render.render(PlotSpec("pattern-overlay", (partial,), tmp_path / "x.png"))


class TestVisibilitySweep:
    def test_points_agree_with_analytic_curve(self, sweep_runs, expected_overlap):
        # the [SECONDARY] acceptance band, checked from the files alone
        for path in sweep_runs:
            summary = json.loads(path.read_text())
            assert abs(summary["visibility"] - expected_overlap(path)) <= 0.02

    def test_renders_with_overlay(self, sweep_runs, tmp_path):
        out = render.render(
            PlotSpec("visibility-sweep", tuple(sweep_runs), tmp_path / "sweep.png")
        )
        assert out.is_file() and out.stat().st_size > 10_000

    def test_out_of_band_point_rejected(self, sweep_runs, tmp_path):
        doctored = []
        for i, path in enumerate(sweep_runs):
            summary = json.loads(path.read_text())
            if i == 2:
                summary["visibility"] = summary["visibility"] + 0.1
            copy = tmp_path / f"{i}.json"
            copy.write_text(json.dumps(summary))
            doctored.append(copy)
        with pytest.raises(PlotDataError, match="deviates"):
            render.render(PlotSpec("visibility-sweep", tuple(doctored), tmp_path / "x.png"))


class TestLpCurve:
    def test_renders_with_zero_markers(self, lp_run, tmp_path):
        summary = json.loads((lp_run / "summary.json").read_text())
        assert len(summary["details"]["zeros"]) >= 5
        out = render.render(PlotSpec("lp-curve", (lp_run,), tmp_path / "lp.png"))
        assert out.is_file() and out.stat().st_size > 10_000


class TestValidation:
    def test_schema_mismatch_rejected(self, lp_run, tmp_path):
        bad = tmp_path / "bad"
        bad.mkdir()
        summary = json.loads((lp_run / "summary.json").read_text())
        summary["schema_version"] = 99
        (bad / "summary.json").write_text(json.dumps(summary))
        shutil.copy(lp_run / "intensity.csv", bad / "intensity.csv")
        with pytest.raises(PlotDataError, match="schema_version"):
            render.render(PlotSpec("lp-curve", (bad,), tmp_path / "x.png"))

    def test_unknown_kind_rejected(self, tmp_path):
        with pytest.raises(PlotDataError, match="unknown figure kind"):
            render.render(PlotSpec("histogram", (), tmp_path / "x.png"))


class TestScriptInterface:
    def test_cli_invocation(self, recoiling_run, tmp_path):
        script = Path(render.__file__)
        out = tmp_path / "cli_overlay.png"
        proc = subprocess.run(
            [sys.executable, str(script), "pattern-overlay", "--run", str(recoiling_run), "--out", str(out)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert out.is_file()

    def test_cli_reports_bad_input(self, tmp_path):
        script = Path(render.__file__)
        proc = subprocess.run(
            [sys.executable, str(script), "lp-curve", "--run", str(tmp_path / "nope"), "--out", str(tmp_path / "x.png")],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 1
        assert "missing" in proc.stderr
