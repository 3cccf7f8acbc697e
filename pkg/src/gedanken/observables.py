"""Moments, uncertainty records, intensity patterns, visibility, fringe spacing.

Standard deviations are ensemble quantities of the state: position moments
come from the density-matrix diagonal, momentum moments from the diagonal of
the double spectral transform.  For any valid state the product obeys
std_x * std_p >= 1/2 (natural units), and ``robertson_gap`` records the
distance to that bound.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import fourier
from .errors import EstimationError, InvariantViolationError
from .state import BranchState, DensityMatrix, Grid, WaveFunction

ROBERTSON_BOUND = 0.5
_GAP_TOL = 1e-6


@dataclass(frozen=True)
class UncertaintyRecord:
    """Position/momentum means and standard deviations of one state."""

    mean_x: float
    std_x: float
    mean_p: float
    std_p: float
    robertson_gap: float

    def __post_init__(self) -> None:
        if self.std_x < 0.0 or self.std_p < 0.0:
            raise InvariantViolationError("standard deviations must be nonnegative")
        if self.robertson_gap < -_GAP_TOL:
            raise InvariantViolationError(
                f"uncertainty product {self.std_x * self.std_p!r} fell below "
                f"{ROBERTSON_BOUND} by more than {_GAP_TOL}; this indicates a numerics bug"
            )

    @classmethod
    def from_moments(cls, mean_x: float, std_x: float, mean_p: float, std_p: float) -> "UncertaintyRecord":
        return cls(mean_x, std_x, mean_p, std_p, std_x * std_p - ROBERTSON_BOUND)

    def as_dict(self) -> dict:
        return asdict(self)


def moments_of_distribution(values: np.ndarray, density: np.ndarray, step: float) -> tuple[float, float]:
    """Mean and standard deviation of a sampled probability density.

    The density is renormalized against its own quadrature sum, so inputs that
    integrate to 1 only within constructor tolerance do not bias the moments.
    """
    weights = np.asarray(density, dtype=np.float64) * step
    total = float(weights.sum())
    if total <= 0.0:
        raise EstimationError("cannot take moments of an empty distribution")
    mean = float(np.dot(values, weights) / total)
    var = float(np.dot((values - mean) ** 2, weights) / total)
    return mean, math.sqrt(max(var, 0.0))


def position_moments(rho: DensityMatrix) -> tuple[float, float]:
    """Mean and std of the position diagonal rho(x, x) dx."""
    return moments_of_distribution(rho.grid.x, rho.intensity(), rho.grid.dx)


def momentum_moments(rho: DensityMatrix) -> tuple[float, float]:
    """Mean and std of the momentum marginal, the diagonal of F rho F^dagger.

    Evaluated by Hermitian diagonal folding (see
    :func:`gedanken.fourier.momentum_marginal`), which equals the diagonal of
    the full double spectral transform to rounding error.
    """
    marginal = fourier.momentum_marginal(rho.grid, rho.rho)
    return moments_of_distribution(rho.grid.p, marginal, rho.grid.dp)


def robertson_record(rho: DensityMatrix) -> UncertaintyRecord:
    """Assemble the uncertainty record of a density matrix.

    Raises :class:`InvariantViolationError` if std_x * std_p undershoots 1/2
    beyond tolerance, which no valid state can do.
    """
    mean_x, std_x = position_moments(rho)
    mean_p, std_p = momentum_moments(rho)
    return UncertaintyRecord.from_moments(mean_x, std_x, mean_p, std_p)


def record_from_wavefunction(wf: WaveFunction) -> UncertaintyRecord:
    """Uncertainty record of a pure state, without materializing its projector."""
    mean_x, std_x = moments_of_distribution(wf.grid.x, wf.position_density(), wf.grid.dx)
    mean_p, std_p = moments_of_distribution(wf.grid.p, wf.momentum_density(), wf.grid.dp)
    return UncertaintyRecord.from_moments(mean_x, std_x, mean_p, std_p)


def record_from_branches(bs: BranchState) -> UncertaintyRecord:
    """Uncertainty record of a branch decomposition, via branch-space algebra."""
    mean_x, std_x = moments_of_distribution(bs.grid.x, bs.intensity(), bs.grid.dx)
    mean_p, std_p = moments_of_distribution(bs.grid.p, bs.momentum_density(), bs.grid.dp)
    return UncertaintyRecord.from_moments(mean_x, std_x, mean_p, std_p)


def intensity(rho: DensityMatrix) -> np.ndarray:
    """Screen probability density rho(x_j, x_j); integrates to 1 against dx."""
    return rho.intensity()


def _strict_extrema(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Interior local maxima/minima indices, tolerant of flat runs.

    Equal-value runs are compressed first; an extremum inside a run is
    reported at the run midpoint.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size < 3:
        return np.empty(0, dtype=int), np.empty(0, dtype=int)
    boundaries = np.nonzero(np.diff(v) != 0.0)[0]
    starts = np.concatenate([[0], boundaries + 1])
    ends = np.concatenate([boundaries, [v.size - 1]])
    mids = (starts + ends) // 2
    run_values = v[starts]
    if run_values.size < 3:
        return np.empty(0, dtype=int), np.empty(0, dtype=int)
    s = np.sign(np.diff(run_values))
    is_max = (s[:-1] > 0) & (s[1:] < 0)
    is_min = (s[:-1] < 0) & (s[1:] > 0)
    return mids[1:-1][is_max], mids[1:-1][is_min]


def visibility(intensity_values: np.ndarray, window: tuple[int, int]) -> float:
    """Fringe contrast (I_max - I_min)/(I_max + I_min) inside an index window.

    Local maxima are paired with their flanking minima (geometric mean of the
    two, which cancels a slowly varying envelope to first order) and the
    per-pair contrasts are averaged.  A window with no alternating extrema,
    e.g. a flat or single-lobe pattern, has zero visibility.
    """
    values = np.asarray(intensity_values, dtype=np.float64)
    start, stop = int(window[0]), int(window[1])
    if not 0 <= start < stop <= values.size:
        raise EstimationError(f"window ({start}, {stop}) is not a valid index range")
    if stop - start < 8:
        raise EstimationError(f"window of {stop - start} samples is too narrow")
    seg = values[start:stop]
    maxima, minima = _strict_extrema(seg)
    if maxima.size == 0 or minima.size == 0:
        return 0.0
    contrasts = []
    for m in maxima:
        left = minima[minima < m]
        right = minima[minima > m]
        if left.size == 0 or right.size == 0:
            continue
        floor = math.sqrt(max(seg[left[-1]], 0.0) * max(seg[right[0]], 0.0))
        peak = seg[m]
        if peak + floor > 0.0:
            contrasts.append((peak - floor) / (peak + floor))
    if not contrasts:
        return 0.0
    return float(np.clip(np.mean(contrasts), 0.0, 1.0))


def fringe_spacing(intensity_values: np.ndarray, grid: Grid) -> float:
    """Mean spacing of successive local maxima in the central half of the pattern.

    Peak positions are refined by parabolic interpolation; maxima below
    1e-4 of the central-segment peak are ignored.  Fewer than 3 detectable
    maxima (a single-lobe or featureless pattern) is an estimation error.
    """
    values = np.asarray(intensity_values, dtype=np.float64)
    if values.size != grid.n_points:
        raise EstimationError("intensity array does not match the grid")
    lo = grid.n_points // 4
    hi = 3 * grid.n_points // 4
    seg = values[lo:hi]
    maxima, _ = _strict_extrema(seg)
    if maxima.size:
        maxima = maxima[seg[maxima] >= 1e-4 * float(seg.max())]
    if maxima.size < 3:
        raise EstimationError(
            f"only {maxima.size} fringe maxima detected; need at least 3 for a spacing"
        )
    positions = []
    for m in maxima:
        j = lo + int(m)
        x = grid.x[j]
        if 0 < j < grid.n_points - 1:
            denom = values[j - 1] - 2.0 * values[j] + values[j + 1]
            if abs(denom) > 1e-300:
                x += 0.5 * grid.dx * (values[j - 1] - values[j + 1]) / denom
        positions.append(x)
    positions = np.asarray(positions)
    return float((positions[-1] - positions[0]) / (positions.size - 1))
