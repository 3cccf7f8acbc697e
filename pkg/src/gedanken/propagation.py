"""Free spectral propagation and slit apertures.

Free evolution multiplies the momentum representation by
exp(-i p^2 t / (2 m)), which is exactly unitary on the periodic lattice.
The grid has no absorbing layers: probability reaching an edge wraps around,
so propagation monitors the outermost cells and emits a
:class:`BoundaryLeakWarning` instead of silently corrupting the state.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from . import fourier
from .errors import BoundaryLeakWarning, ConfigurationError, EmptyStateError
from .state import BranchState, DensityMatrix, Grid, WaveFunction

# Probability allowed in the outermost cells before a wrap-around warning.
LEAK_THRESHOLD = 1e-6
# Samples per edge counted as "boundary".
_EDGE_CELLS = 2


@dataclass(frozen=True)
class Aperture:
    """One or two open slits in an otherwise opaque diaphragm.

    ``separation`` is center-to-center and only meaningful for the double
    slit, where the openings sit at center +- separation/2.
    """

    kind: Literal["single", "double"]
    center: float
    width: float
    separation: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("single", "double"):
            raise ConfigurationError(f"unknown aperture kind {self.kind!r}")
        if self.width <= 0.0:
            raise ConfigurationError("slit width must be positive")
        if self.kind == "double":
            if self.separation is None:
                raise ConfigurationError("double slit needs a separation")
            if self.separation <= self.width:
                raise ConfigurationError(
                    f"slits overlap: separation {self.separation} must exceed width {self.width}"
                )
        elif self.separation is not None:
            raise ConfigurationError("separation is only meaningful for a double slit")

    def slit_centers(self) -> tuple[float, ...]:
        if self.kind == "single":
            return (self.center,)
        return (self.center - self.separation / 2.0, self.center + self.separation / 2.0)

    def intervals(self) -> tuple[tuple[float, float], ...]:
        half = self.width / 2.0
        return tuple((c - half, c + half) for c in self.slit_centers())

    def validate_on(self, grid: Grid) -> None:
        if self.width < 4.0 * grid.dx:
            raise ConfigurationError(
                f"slit width {self.width} is not resolvable: need >= 4*dx = {4.0 * grid.dx:.6g}"
            )
        for lo, hi in self.intervals():
            if lo < grid.x_min or hi > grid.x_max:
                raise ConfigurationError(f"slit [{lo}, {hi}] extends outside the grid")


def single_slit(center: float, width: float) -> Aperture:
    return Aperture("single", center, width)


def double_slit(center: float, width: float, separation: float) -> Aperture:
    return Aperture("double", center, width, separation)


class ApertureResult(NamedTuple):
    wavefunction: WaveFunction
    transmission: float


def _edge_probability(grid: Grid, density: np.ndarray) -> float:
    band = np.concatenate([density[:_EDGE_CELLS], density[-_EDGE_CELLS:]])
    return float(np.sum(band) * grid.dx)


def _check_boundary(grid: Grid, density: np.ndarray, what: str) -> None:
    leak = _edge_probability(grid, density)
    if leak > LEAK_THRESHOLD:
        warnings.warn(
            f"{what}: probability {leak:.3e} in the outermost grid cells; "
            "the periodic boundary will wrap it around",
            BoundaryLeakWarning,
            stacklevel=3,
        )


def propagate_free(wf: WaveFunction, t: float, mass: float) -> WaveFunction:
    """Evolve a wavefunction freely for time t >= 0 with the given mass.

    Norm and momentum density are preserved to rounding error; a Gaussian
    packet of width sigma0 spreads as sigma(t)^2 = sigma0^2 (1 + (t/(2 m sigma0^2))^2).
    """
    if t < 0.0:
        raise ConfigurationError("propagation time must be nonnegative")
    if mass <= 0.0:
        raise ConfigurationError("mass must be positive")
    amp = fourier.evolve_amplitudes(wf.grid, wf.amp, t, mass)
    out = WaveFunction(wf.grid, amp)
    _check_boundary(wf.grid, out.position_density(), "free propagation")
    return out


def propagate_density(rho: DensityMatrix, t: float, mass: float) -> DensityMatrix:
    """Free evolution U rho U^dagger; Hermiticity, trace and purity are preserved."""
    if t < 0.0:
        raise ConfigurationError("propagation time must be nonnegative")
    if mass <= 0.0:
        raise ConfigurationError("mass must be positive")
    evolved = fourier.evolve_density(rho.grid, rho.rho, t, mass)
    out = DensityMatrix(rho.grid, evolved)
    _check_boundary(rho.grid, out.intensity(), "density propagation")
    return out


def propagate_branches(bs: BranchState, t: float, mass: float) -> BranchState:
    """Evolve every branch wavefunction; weights and tag Gram are unaffected.

    Valid because the tags ride along unitarily: their later evolution cancels
    inside every overlap, so the Gram matrix is a constant of the free motion.
    """
    branches = tuple(propagate_free(wf, t, mass) for wf in bs.branches)
    return BranchState(bs.grid, branches, bs.weights, bs.gram)


def apply_aperture(wf: WaveFunction, ap: Aperture) -> ApertureResult:
    """Cut the wavefunction down to the open slit interval(s).

    The amplitude is multiplied by the indicator function of the openings
    (closed intervals on the lattice) and renormalized: the returned state is
    post-selected on transmission, whose probability is reported alongside.
    """
    ap.validate_on(wf.grid)
    x = wf.grid.x
    mask = np.zeros(wf.grid.n_points, dtype=bool)
    for lo, hi in ap.intervals():
        mask |= (x >= lo) & (x <= hi)
    cut = np.where(mask, wf.amp, 0.0)
    transmission = float(np.sum(np.abs(cut) ** 2) * wf.grid.dx)
    if transmission <= 1e-300:
        raise EmptyStateError("no probability passes the aperture")
    return ApertureResult(WaveFunction(wf.grid, cut), transmission)
