"""Scenario runners: pipelines, reported fields, and cross-scenario consistency."""

import math

import numpy as np
import pytest

from gedanken import FraunhoferWarning, parse_config, run_scenario
from gedanken.config import parse_config as _parse

SMALL_GRID = ["grid.n_points=1024"]


def run(scenario, *overrides):
    cfg = parse_config(scenario, overrides=list(overrides))
    report = run_scenario(cfg)
    report.validate()
    return report


class TestMicroscope:
    def test_identity_kernel_changes_nothing(self):
        rep = run("microscope", *SMALL_GRID, 'kernel.kind="identity"')
        assert rep.after.std_x == pytest.approx(rep.before.std_x, abs=1e-9)
        assert rep.after.std_p == pytest.approx(rep.before.std_p, abs=1e-9)
        assert rep.after.mean_x == pytest.approx(rep.before.mean_x, abs=1e-9)
        assert rep.purity_after == pytest.approx(1.0, abs=1e-9)

    def test_gaussian_kernel_broadens_momentum_only(self):
        rep = run("microscope", *SMALL_GRID, "kernel.s=1.0")
        assert rep.after.std_x == pytest.approx(rep.before.std_x, rel=1e-9)
        assert rep.after.std_p == pytest.approx(math.sqrt(1.25), rel=5e-3)
        assert rep.after.std_p > rep.before.std_p
        assert rep.after.robertson_gap > 0.0

    def test_lens_kernel_boxcar_variance(self):
        rep = run("microscope", *SMALL_GRID, 'kernel.kind="lens_aperture"')
        width = 4.0 * math.pi * math.sin(math.pi / 6.0) / 0.5
        expected = rep.before.std_p**2 + width**2 / 12.0
        assert rep.after.std_p**2 == pytest.approx(expected, rel=5e-3)

    def test_purity_drops_with_entanglement(self):
        rep = run("microscope", *SMALL_GRID, "kernel.s=1.0")
        assert rep.purity_before == 1.0
        assert rep.purity_after < 0.5


class TestSingleSlit:
    def test_wide_slit_passes_through(self):
        # hard slit far wider than the packet: no diffraction at all
        rep = run(
            "single-slit",
            'slit_profile="hard"',
            "aperture.width=24.0",
        )
        assert rep.details["transmission"] == pytest.approx(1.0, abs=1e-12)
        assert rep.before.std_x == pytest.approx(1.0, rel=1e-4)
        assert rep.before.std_p == pytest.approx(0.5, rel=1e-4)
        # screen spread equals free Gaussian spreading
        t = rep.details["flight_time"]
        free = math.sqrt(1.0 + (t / 2.0) ** 2)
        assert rep.details["screen_record"]["std_x"] == pytest.approx(free, rel=1e-4)

    def test_far_field_width_scales_inversely_with_slit(self):
        widths = [0.2, 0.4, 0.8]
        far = []
        for w in widths:
            rep = run("single-slit", f"aperture.width={w}")
            far.append(rep.after.std_x)
        assert far[0] / far[1] == pytest.approx(2.0, rel=5e-2)
        assert far[1] / far[2] == pytest.approx(2.0, rel=5e-2)

    def test_projection_contract(self):
        rep = run("single-slit")
        assert rep.details["projection_intensity_defect"] < 1e-12
        assert rep.details["coherence_abs_sum_after"] < 1e-10
        assert rep.details["coherence_abs_sum_before"] > 1.0
        assert rep.after.std_p >= rep.details["screen_record"]["std_p"]
        assert rep.purity_after < 0.05


class TestDoubleSlit:
    def test_fixed_diaphragm_full_fringes(self):
        rep = run("double-slit")
        assert rep.tag_overlap == pytest.approx(1.0, abs=1e-12)
        assert rep.visibility == pytest.approx(1.0, abs=2e-2)
        assert rep.fringe_spacing == pytest.approx(rep.details["expected_fringe_spacing"], rel=2e-2)
        assert rep.details["expected_fringe_spacing"] == pytest.approx(5.0, rel=1e-12)
        assert rep.reference_intensity is None

    def test_recoiling_identity_equals_fixed(self):
        fixed = run("double-slit")
        recoiling = run("double-slit", 'mode="recoiling"', 'kernel.kind="identity"')
        assert recoiling.visibility == pytest.approx(fixed.visibility, abs=1e-9)
        assert recoiling.fringe_spacing == pytest.approx(fixed.fringe_spacing, abs=1e-9)
        assert recoiling.purity_after == pytest.approx(fixed.purity_after, abs=1e-9)
        for name in ("mean_x", "std_x", "mean_p", "std_p"):
            assert getattr(recoiling.after, name) == pytest.approx(
                getattr(fixed.after, name), abs=1e-9
            )
        assert np.abs(recoiling.intensity - fixed.intensity).max() < 1e-9

    def test_half_overlap_keeps_half_fringes(self):
        s = math.sqrt(-2.0 * math.log(0.5))
        rep = run("double-slit", 'mode="recoiling"', f"kernel.s={s}")
        assert rep.tag_overlap == pytest.approx(0.5, abs=1e-9)
        assert rep.visibility == pytest.approx(0.5, abs=2e-2)
        assert rep.fringe_spacing == pytest.approx(5.0, rel=2e-2)
        assert rep.reference_intensity is not None

    def test_orthogonal_tags_kill_fringes(self):
        # boxcar of width 2 pi: first overlap zero exactly at separation 1
        rep = run(
            "double-slit",
            'mode="recoiling"',
            'kernel.kind="lens_aperture"',
            "kernel.lam=1.0",
        )
        assert rep.tag_overlap < 1e-12
        assert rep.visibility < 0.02
        assert rep.fringe_spacing is None
        assert rep.purity_after == pytest.approx(0.5, abs=1e-6)

    def test_photon_mode_is_the_same_mechanism(self):
        recoiling = run("double-slit", 'mode="recoiling"', "kernel.s=1.0")
        photon = run("double-slit", 'mode="photon"', "kernel.s=1.0")
        assert photon.visibility == pytest.approx(recoiling.visibility, abs=1e-12)
        assert np.abs(photon.intensity - recoiling.intensity).max() < 1e-15

    def test_visibility_overlap_law_across_kernel_widths(self):
        # 6-point sweep of gaussian kernel widths
        for s in (0.3, 0.6, 0.9, 1.2, 1.5, 1.8):
            rep = run("double-slit", 'mode="recoiling"', f"kernel.s={s}")
            expected = math.exp(-(s**2) / 2.0)
            assert rep.tag_overlap == pytest.approx(expected, abs=1e-9)
            assert rep.visibility == pytest.approx(expected, abs=2e-2)

    def test_tagging_cannot_shrink_momentum_spread(self):
        for s in (0.5, 1.5):
            rep = run("double-slit", 'mode="recoiling"', f"kernel.s={s}")
            assert rep.after.std_p >= rep.before.std_p - 1e-9

    def test_near_field_warns(self):
        rep = run("double-slit", "flight.distance=10.0")
        assert any("FraunhoferWarning" in w for w in rep.warnings)

    def test_hard_profile_available_and_leaky(self):
        rep = run("double-slit", 'slit_profile="hard"')
        assert any("BoundaryLeakWarning" in w for w in rep.warnings)


class TestVonNeumann:
    def test_uniform_superposition(self):
        coeffs = "[[1,0],[1,0],[1,0],[1,0]]"
        rep = run("von-neumann", f"system.coeffs={coeffs}")
        assert rep.purity_before == 1.0
        assert rep.purity_after == pytest.approx(0.25, abs=1e-15)

    def test_basis_state_keeps_purity(self):
        rep = run("von-neumann", "system.coeffs=[[1,0],[0,0]]", "system.levels=2")
        assert rep.purity_after == pytest.approx(1.0, abs=1e-15)

    def test_random_state_moments_preserved(self):
        rep = run("von-neumann", "system.levels=8", "system.seed=123")
        before = rep.details["moments_before"]
        after = rep.details["moments_after"]
        for b, a in zip(before, after):
            assert a == pytest.approx(b, abs=1e-12)
        assert rep.details["delta_after"] == pytest.approx(rep.details["delta_before"], abs=1e-12)


class TestLandauPeierls:
    @pytest.mark.parametrize("t", [1.0, 2.0])
    def test_zero_locations(self, t):
        rep = run("landau-peierls", f"scan.t={t}")
        step = rep.details["scan_step"]
        zeros = rep.details["zeros"]
        expected = [2.0 * math.pi * n / t for n in range(1, 6)]
        for want in expected:
            assert min(abs(z - want) for z in zeros) <= step

    def test_curve_normalized_to_unit_peak(self):
        rep = run("landau-peierls")
        assert rep.intensity[0] == pytest.approx(1.0, abs=1e-15)
        assert rep.intensity.max() == pytest.approx(1.0, abs=1e-15)

    def test_half_width_scale(self):
        for t in (1.0, 3.0):
            rep = run("landau-peierls", f"scan.t={t}")
            assert rep.details["half_width_product"] == pytest.approx(2.78311, abs=1e-3)


class TestReportInvariants:
    def test_all_scenarios_produce_valid_reports(self):
        reports = [
            run("microscope", *SMALL_GRID),
            run("single-slit"),
            run("double-slit", 'mode="recoiling"', "kernel.s=1.0"),
            run("von-neumann"),
            run("landau-peierls"),
        ]
        for rep in reports:
            rep.validate()
            if rep.visibility is not None:
                assert 0.0 <= rep.visibility <= 1.0 + 1e-9
