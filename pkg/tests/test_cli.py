"""Configuration parsing, report serialization, and the CLI surface."""

import json
import math

import pytest

from gedanken import ConfigurationError, parse_config, run_scenario
from gedanken.cli import main
from gedanken.reporting import emit_report


class TestParseConfig:
    def test_defaults_filled(self):
        cfg = parse_config("double-slit")
        assert cfg["grid"]["n_points"] == 8192
        assert cfg["aperture"]["separation"] == 1.0
        assert cfg["mode"] == "fixed"
        assert cfg["flight"]["p0"] == pytest.approx(40.0 * math.pi)

    def test_minimal_file(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text('{"kernel": {"kind": "identity"}}')
        cfg = parse_config("microscope", path=path)
        assert cfg["kernel"]["kind"] == "identity"
        assert cfg["grid"]["n_points"] == 4096  # default preserved

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigurationError, match="unknown key 'grid.bogus'"):
            parse_config("microscope", data={"grid": {"bogus": 1}})
        with pytest.raises(ConfigurationError, match="unknown key"):
            parse_config("microscope", data={"extra_section": {}})

    def test_power_of_two_message(self):
        with pytest.raises(ConfigurationError, match="power of two"):
            parse_config("microscope", data={"grid": {"n_points": 1000}})

    def test_flag_override_wins(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text('{"kernel": {"s": 1.0}}')
        cfg = parse_config("microscope", path=path, overrides=["kernel.s=2.0"])
        assert cfg["kernel"]["s"] == 2.0

    def test_parse_error_reports_location(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "grid": {,}\n}')
        with pytest.raises(ConfigurationError, match="line 2"):
            parse_config("microscope", path=path)

    def test_round_trip_echo(self):
        for scenario in ("microscope", "single-slit", "double-slit", "von-neumann", "landau-peierls"):
            cfg = parse_config(scenario)
            again = parse_config(scenario, data=cfg.echo())
            assert again.data == cfg.data

    def test_precondition_checked_at_parse_time(self):
        with pytest.raises(ConfigurationError, match="sigma_x"):
            parse_config("microscope", data={"packet": {"sigma_x": 1e-4}})
        with pytest.raises(ConfigurationError, match="separation"):
            parse_config("double-slit", data={"aperture": {"width": 2.0, "separation": 1.0}})
        with pytest.raises(ConfigurationError, match="epsilon"):
            parse_config(
                "microscope", data={"kernel": {"kind": "lens_aperture", "epsilon": 3.0}}
            )
        with pytest.raises(ConfigurationError, match="levels"):
            parse_config("von-neumann", data={"system": {"levels": 1}})

    def test_unknown_scenario_rejected(self):
        with pytest.raises(ConfigurationError, match="unknown scenario"):
            parse_config("photon-box")


class TestEmitReport:
    def test_files_and_round_trip(self, tmp_path):
        cfg = parse_config("double-slit", overrides=['mode="recoiling"', "kernel.s=1.0"])
        report = run_scenario(cfg)
        paths = emit_report(report, tmp_path / "out")
        assert set(paths) == {"summary", "intensity", "intensity_reference"}
        summary = json.loads(paths["summary"].read_text())
        assert summary["schema_version"] == 1
        assert summary["scenario"] == "double-slit"
        assert summary["visibility"] == pytest.approx(report.visibility)
        # the embedded config echo parses back to the same validated config
        again = parse_config("double-slit", data=summary["config"])
        assert again.data == cfg.data

    def test_csv_parses_back_exactly(self, tmp_path):
        cfg = parse_config("landau-peierls")
        report = run_scenario(cfg)
        paths = emit_report(report, tmp_path)
        lines = paths["intensity"].read_text().splitlines()
        assert lines[0] == "x,intensity"
        for i in (1, 57, len(lines) - 1):
            xs, ys = lines[i].split(",")
            idx = i - 1
            assert float(xs) == report.x[idx]
            assert float(ys) == report.intensity[idx]


class TestMain:
    def test_success_exit_zero(self, tmp_path, capsys):
        code = main(["landau-peierls", "--out", str(tmp_path / "lp")])
        assert code == 0
        assert (tmp_path / "lp" / "summary.json").exists()
        assert "wrote" in capsys.readouterr().out

    def test_validation_error_exit_one(self, tmp_path, capsys):
        code = main(["double-slit", "--set", "grid.n_points=1000", "--out", str(tmp_path)])
        assert code == 1
        assert "power of two" in capsys.readouterr().err

    def test_runtime_error_exit_two(self, tmp_path, capsys):
        # scan too short to reach the half maximum
        code = main(
            ["landau-peierls", "--set", "scan.delta_e_max=0.1", "--out", str(tmp_path)]
        )
        assert code == 2
        assert "EstimationError" in capsys.readouterr().err

    def test_determinism_modulo_duration(self, tmp_path):
        args = ["double-slit", "--set", 'mode="recoiling"', "--set", "kernel.s=1.0"]
        assert main(args + ["--out", str(tmp_path / "a")]) == 0
        assert main(args + ["--out", str(tmp_path / "b")]) == 0

        def canonical(path):
            data = json.loads(path.read_text())
            data["duration_s"] = None
            return json.dumps(data, sort_keys=True)

        assert canonical(tmp_path / "a" / "summary.json") == canonical(
            tmp_path / "b" / "summary.json"
        )
        assert (tmp_path / "a" / "intensity.csv").read_bytes() == (
            tmp_path / "b" / "intensity.csv"
        ).read_bytes()
        assert (tmp_path / "a" / "intensity_reference.csv").read_bytes() == (
            tmp_path / "b" / "intensity_reference.csv"
        ).read_bytes()
