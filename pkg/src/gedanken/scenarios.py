"""End-to-end experiment runners producing structured reports.

Each runner composes the state, propagation, scattering, observable, and
measurement operations into one of the five canonical setups:

  microscope      plane-wave partner scatters off a packet; uncertainties
                  before/after the momentum exchange.
  single-slit     diffraction through one slit, flight to the screen, and the
                  classical ensemble left by position detection.
  double-slit     fixed or recoiling diaphragm (or a partner photon at the
                  slits): interference loss governed by the tag overlap.
  von-neumann     ideal K-level measurement; moments of the measured
                  observable before and after.
  landau-peierls  perturbative transition-probability scan over the energy
                  mismatch.

Runs are deterministic: identical configurations give identical reports
(apart from the wall-clock duration field).
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .errors import (
    BoundaryLeakWarning,
    ConfigurationError,
    EmptyStateError,
    EstimationError,
    FraunhoferWarning,
    InvariantViolationError,
)
from .measurement import DiscreteState, project_position_detection, landau_peierls_probability, von_neumann_measure
from .observables import (
    UncertaintyRecord,
    fringe_spacing,
    record_from_branches,
    record_from_wavefunction,
    robertson_record,
    visibility,
)
from .propagation import Aperture, apply_aperture, propagate_branches, propagate_free
from .scattering import ScatteringKernel, entangle_at_slits, kernel_preset, scatter_reduced
from .state import (
    BranchState,
    Grid,
    WaveFunction,
    density_from_pure,
    gaussian_packet,
    make_grid,
)


@dataclass(frozen=True)
class ScenarioReport:
    """Structured record of one scenario run."""

    scenario: str
    config: dict
    duration_s: float
    before: UncertaintyRecord | None = None
    after: UncertaintyRecord | None = None
    purity_before: float | None = None
    purity_after: float | None = None
    visibility: float | None = None
    fringe_spacing: float | None = None
    tag_overlap: float | None = None
    x: np.ndarray | None = None
    intensity: np.ndarray | None = None
    reference_intensity: np.ndarray | None = None
    details: dict = field(default_factory=dict)
    warnings: tuple[str, ...] = ()

    def validate(self) -> None:
        """Check the report invariants; raises on non-finite or out-of-range fields."""
        for name in ("purity_before", "purity_after", "visibility", "fringe_spacing", "tag_overlap", "duration_s"):
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise InvariantViolationError(f"report field {name} is not finite: {value!r}")
        if self.visibility is not None and not -1e-9 <= self.visibility <= 1.0 + 1e-9:
            raise InvariantViolationError(f"visibility {self.visibility!r} outside [0, 1]")
        for rec in (self.before, self.after):
            if rec is not None and rec.robertson_gap < -1e-6:
                raise InvariantViolationError("uncertainty record violates the Robertson bound")
        for arr in (self.x, self.intensity, self.reference_intensity):
            if arr is not None and not np.all(np.isfinite(arr)):
                raise InvariantViolationError("report array contains non-finite entries")


class _capture_warnings(warnings.catch_warnings):
    """Collect physics warnings raised during a run into report strings."""

    def __enter__(self):
        self._log = super().__enter__()
        warnings.simplefilter("always")
        self._records = []
        warnings.showwarning = lambda msg, cat, *a, **k: self._records.append(
            f"{cat.__name__}: {msg}"
        )
        return self._records


def _build_kernel(kernel_cfg: dict) -> ScatteringKernel:
    kind = kernel_cfg["kind"]
    if kind == "identity":
        return kernel_preset("identity")
    if kind == "gaussian":
        return kernel_preset("gaussian", s=kernel_cfg["s"])
    return kernel_preset("lens_aperture", lam=kernel_cfg["lam"], epsilon=kernel_cfg["epsilon"])


def _transmit(wf: WaveFunction, ap: Aperture, profile: str) -> tuple[WaveFunction, float]:
    """Post-slit state and transmission probability.

    ``hard`` multiplies by the indicator of the openings.  ``gaussian`` (the
    scenario default) multiplies by a Gaussian window per slit with density
    std width/4: a band-limited transmission whose far field stays inside the
    periodic grid, where the hard cut would scatter >1e-2 probability into
    momenta that wrap around during the flight.
    """
    ap.validate_on(wf.grid)
    if profile == "hard":
        cut = apply_aperture(wf, ap)
        return cut.wavefunction, cut.transmission
    sigma = ap.width / 4.0
    x = wf.grid.x
    window = np.zeros(wf.grid.n_points)
    for center in ap.slit_centers():
        window += np.exp(-((x - center) ** 2) / (4.0 * sigma**2))
    cut_amp = wf.amp * window
    transmission = float(np.sum(np.abs(cut_amp) ** 2) * wf.grid.dx)
    if transmission <= 1e-300:
        raise EmptyStateError("no probability passes the slit window")
    return WaveFunction(wf.grid, cut_amp), transmission


def _central_window(grid: Grid, fraction: float) -> tuple[int, int]:
    half = max(4, int(round(grid.n_points * fraction / 2.0)))
    mid = grid.n_points // 2
    return mid - half, mid + half


def run_microscope(cfg: RunConfig) -> ScenarioReport:
    """Scatter a plane-wave partner off a Gaussian packet and compare uncertainties.

    The reduced state keeps |psi(x)|^2 on the diagonal, so the position spread
    cannot change; the momentum density is convolved with |C|^2 and broadens.
    """
    start = time.perf_counter()
    with _capture_warnings() as caught:
        grid = make_grid(**cfg["grid"])
        packet = cfg["packet"]
        wf = gaussian_packet(grid, packet["x0"], packet["p0"], packet["sigma_x"])
        kernel = _build_kernel(cfg["kernel"])
        # the pre-scattering state is pure, so its record can come straight
        # from the wavefunction instead of an O(n^2) projector
        before = record_from_wavefunction(wf)
        purity_before = 1.0
        rho1 = scatter_reduced(wf, kernel)
        after = robertson_record(rho1)
        purity_after = rho1.purity()
        pattern = rho1.intensity()
    return ScenarioReport(
        scenario="microscope",
        config=cfg.echo(),
        duration_s=time.perf_counter() - start,
        before=before,
        after=after,
        purity_before=purity_before,
        purity_after=purity_after,
        x=grid.x.copy(),
        intensity=pattern,
        details={
            "kernel_kind": cfg["kernel"]["kind"],
            "kernel_mean": kernel.mean(),
            "kernel_variance": kernel.variance(),
        },
        warnings=tuple(caught),
    )


def _coherence_abs_sum(rho_matrix: np.ndarray, dx: float) -> float:
    """Sum of |off-diagonal| entries with the continuum measure dx^2."""
    total = float(np.abs(rho_matrix).sum())
    diag = float(np.abs(np.diag(rho_matrix)).sum())
    return (total - diag) * dx * dx


def run_single_slit(cfg: RunConfig) -> ScenarioReport:
    """Diffraction through one slit, flight to the screen, position detection.

    Detection replaces the pure screen state by the diagonal ensemble: the
    intensity pattern is exactly preserved while every spatial coherence
    vanishes, and the momentum spread can only grow.
    """
    start = time.perf_counter()
    with _capture_warnings() as caught:
        grid = make_grid(**cfg["grid"])
        packet = cfg["packet"]
        wf0 = gaussian_packet(grid, packet["x0"], packet["p0"], packet["sigma_x"])
        ap = Aperture("single", cfg["aperture"]["center"], cfg["aperture"]["width"])
        post, transmission = _transmit(wf0, ap, cfg["slit_profile"])
        before = record_from_wavefunction(post)
        flight = cfg["flight"]
        t = flight["distance"] * flight["mass"] / flight["p0"]
        screen = propagate_free(post, t, flight["mass"])
        rho_screen = density_from_pure(screen)
        screen_record = robertson_record(rho_screen)
        coherence_before = _coherence_abs_sum(rho_screen.rho, grid.dx)
        intensity_screen = rho_screen.intensity()
        del rho_screen
        projected = project_position_detection(screen)
        after = robertson_record(projected)
        purity_after = projected.purity()
        intensity_projected = projected.intensity()
        coherence_after = _coherence_abs_sum(projected.rho, grid.dx)
        intensity_defect = float(np.abs(intensity_screen - intensity_projected).max())
    return ScenarioReport(
        scenario="single-slit",
        config=cfg.echo(),
        duration_s=time.perf_counter() - start,
        before=before,
        after=after,
        purity_before=1.0,
        purity_after=purity_after,
        x=grid.x.copy(),
        intensity=intensity_projected,
        details={
            "transmission": transmission,
            "flight_time": t,
            "screen_record": screen_record.as_dict(),
            "coherence_abs_sum_before": coherence_before,
            "coherence_abs_sum_after": coherence_after,
            "projection_intensity_defect": intensity_defect,
        },
        warnings=tuple(caught),
    )


def run_double_slit(cfg: RunConfig) -> ScenarioReport:
    """Two-slit interference with a fixed diaphragm or a which-way tag.

    ``fixed`` keeps the diaphragm state factored out (tag overlap 1).
    ``recoiling`` and ``photon`` attach a momentum-exchange tag at the slits;
    both reduce to the same mechanism, so they differ only in which kernel
    the configuration supplies.  The central fringe visibility equals the tag
    overlap |D(separation)| and the fringe spacing is lambda*distance/separation.
    """
    start = time.perf_counter()
    with _capture_warnings() as caught:
        grid = make_grid(**cfg["grid"])
        packet = cfg["packet"]
        wf0 = gaussian_packet(grid, packet["x0"], packet["p0"], packet["sigma_x"])
        a_cfg = cfg["aperture"]
        ap = Aperture("double", a_cfg["center"], a_cfg["width"], a_cfg["separation"])
        mode = cfg["mode"]
        kernel = kernel_preset("identity") if mode == "fixed" else _build_kernel(cfg["kernel"])
        post, transmission = _transmit(wf0, ap, cfg["slit_profile"])
        before = record_from_wavefunction(post)
        branches = entangle_at_slits(post, ap, kernel)
        overlap = complex(branches.gram[0, 1])

        flight = cfg["flight"]
        t = flight["distance"] * flight["mass"] / flight["p0"]
        wavelength = 2.0 * math.pi / flight["p0"]
        far_field_scale = 4.0 * a_cfg["separation"] ** 2 / wavelength
        if flight["distance"] < far_field_scale:
            warnings.warn(
                f"screen distance {flight['distance']} is below the far-field scale "
                f"4*separation^2/lambda = {far_field_scale:.4g}; the fringe-spacing "
                "formula lambda*distance/separation may be off",
                FraunhoferWarning,
                stacklevel=2,
            )
        evolved = propagate_branches(branches, t, flight["mass"])
        after = record_from_branches(evolved)
        purity_after = evolved.purity()
        pattern = evolved.intensity()
        window = _central_window(grid, cfg["window_fraction"])
        contrast = visibility(pattern, window)
        try:
            spacing = fringe_spacing(pattern, grid)
        except EstimationError:
            spacing = None
        reference = None
        if mode != "fixed":
            flat_gram = np.ones((branches.n_branches, branches.n_branches), dtype=np.complex128)
            baseline = BranchState(grid, branches.branches, branches.weights, flat_gram)
            reference = propagate_branches(baseline, t, flight["mass"]).intensity()
    return ScenarioReport(
        scenario="double-slit",
        config=cfg.echo(),
        duration_s=time.perf_counter() - start,
        before=before,
        after=after,
        purity_before=1.0,
        purity_after=purity_after,
        visibility=contrast,
        fringe_spacing=spacing,
        tag_overlap=abs(overlap),
        x=grid.x.copy(),
        intensity=pattern,
        reference_intensity=reference,
        details={
            "mode": mode,
            "kernel_kind": "identity" if mode == "fixed" else cfg["kernel"]["kind"],
            "transmission": transmission,
            "flight_time": t,
            "wavelength": wavelength,
            "expected_fringe_spacing": wavelength * flight["distance"] / a_cfg["separation"],
            "tag_overlap_phase": math.atan2(overlap.imag, overlap.real),
            "window": list(window),
        },
        warnings=tuple(caught),
    )


def run_von_neumann(cfg: RunConfig) -> ScenarioReport:
    """Ideal K-level measurement: moments of the observable before and after."""
    start = time.perf_counter()
    with _capture_warnings() as caught:
        system = cfg["system"]
        k = system["levels"]
        if system["eigenvalues"] is not None:
            eigenvalues = np.asarray(system["eigenvalues"], dtype=np.float64)
        else:
            eigenvalues = np.arange(k, dtype=np.float64)
        if system["coeffs"] is not None:
            coeffs = np.array([complex(re, im) for re, im in system["coeffs"]])
        else:
            rng = np.random.default_rng(system["seed"])
            coeffs = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        state = DiscreteState(coeffs, eigenvalues)
        ensemble = von_neumann_measure(state)
        moments_before = [state.moment(n) for n in range(1, 5)]
        moments_after = [ensemble.moment(n) for n in range(1, 5)]
    return ScenarioReport(
        scenario="von-neumann",
        config=cfg.echo(),
        duration_s=time.perf_counter() - start,
        purity_before=state.purity(),
        purity_after=ensemble.purity(),
        x=eigenvalues.astype(np.float64),
        intensity=ensemble.weights.copy(),
        details={
            "levels": k,
            "moments_before": moments_before,
            "moments_after": moments_after,
            "delta_before": state.delta(),
            "delta_after": ensemble.delta(),
            "weights": [float(w) for w in ensemble.weights],
        },
        warnings=tuple(caught),
    )


def run_landau_peierls(cfg: RunConfig) -> ScenarioReport:
    """Scan the transition-probability curve over the energy mismatch.

    The emitted curve is normalized to unit peak; zeros sit at
    delta_e * t = 2 pi n and the half-maximum of the central peak at
    delta_e * t ~ 2.783.
    """
    start = time.perf_counter()
    with _capture_warnings() as caught:
        scan = cfg["scan"]
        t = scan["t"]
        delta_e = np.linspace(0.0, scan["delta_e_max"], scan["n_scan"])
        curve = landau_peierls_probability(delta_e, t) / (t * t / 4.0)
        minima = _scan_minima(curve)
        zeros = [float(delta_e[i]) for i in minima if curve[i] < 1e-3]
        half_width = _half_maximum_crossing(delta_e, curve)
    return ScenarioReport(
        scenario="landau-peierls",
        config=cfg.echo(),
        duration_s=time.perf_counter() - start,
        x=delta_e,
        intensity=curve,
        details={
            "t": t,
            "scan_step": float(delta_e[1] - delta_e[0]),
            "zeros": zeros,
            "half_width_delta_e": half_width,
            "half_width_product": half_width * t,
        },
        warnings=tuple(caught),
    )


def _scan_minima(curve: np.ndarray) -> list[int]:
    inner = (curve[1:-1] <= curve[:-2]) & (curve[1:-1] <= curve[2:])
    return [int(i) + 1 for i in np.nonzero(inner)[0]]


def _half_maximum_crossing(delta_e: np.ndarray, curve: np.ndarray) -> float:
    below = np.nonzero(curve < 0.5)[0]
    if below.size == 0:
        raise EstimationError("scan range too short to reach the half maximum")
    i = int(below[0])
    x0, x1 = delta_e[i - 1], delta_e[i]
    y0, y1 = curve[i - 1], curve[i]
    return float(x0 + (0.5 - y0) * (x1 - x0) / (y1 - y0))


RUNNERS = {
    "microscope": run_microscope,
    "single-slit": run_single_slit,
    "double-slit": run_double_slit,
    "von-neumann": run_von_neumann,
    "landau-peierls": run_landau_peierls,
}


def run_scenario(cfg: RunConfig) -> ScenarioReport:
    """Dispatch a validated configuration to its runner and validate the report."""
    try:
        runner = RUNNERS[cfg.scenario]
    except KeyError:
        raise ConfigurationError(f"unknown scenario {cfg.scenario!r}") from None
    report = runner(cfg)
    report.validate()
    return report
