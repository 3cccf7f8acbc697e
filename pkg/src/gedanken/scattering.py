"""Momentum-exchange entanglement: scattering kernels, decoherence, reduced states.

An instantaneous interaction transfers momentum dp to the particle with
probability amplitude C(dp).  Tagging the partner state by the scattering
position r attaches a tag overlap

    D(xi) = integral |C(dp)|^2 exp(i dp xi) d(dp),      D(0) = 1,

so the particle's reduced density matrix is the pure projector multiplied by
D(x - x'): the position diagonal is untouched while momentum is convolved
with |C|^2.  A brute-force two-particle amplitude (``build_joint_state``)
provides the independent oracle for that reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import fourier
from .errors import ConfigurationError, EmptyStateError
from .state import BranchState, DensityMatrix, Grid, WaveFunction
from .propagation import Aperture

_NORM_TOL = 1e-10


@dataclass(frozen=True)
class ScatteringKernel:
    """Probability amplitude C(dp) for each momentum exchange, on its own lattice.

    ``spacing`` is the quadrature weight of the lattice; the kernel always
    satisfies sum |c|^2 * spacing == 1, so D(0) = 1 exactly.  A single-point
    lattice represents a definite exchange (no entanglement).
    """

    dp: np.ndarray
    c: np.ndarray
    spacing: float

    def __post_init__(self) -> None:
        dp = np.ascontiguousarray(self.dp, dtype=np.float64)
        c = np.ascontiguousarray(self.c, dtype=np.complex128)
        if dp.ndim != 1 or c.shape != dp.shape or dp.size == 0:
            raise ConfigurationError("kernel needs matching 1-D dp and c arrays")
        if self.spacing <= 0.0:
            raise ConfigurationError("kernel lattice spacing must be positive")
        if dp.size > 1 and np.any(np.diff(dp) <= 0.0):
            raise ConfigurationError("kernel dp lattice must be strictly increasing")
        total = float(np.sum(np.abs(c) ** 2) * self.spacing)
        if abs(total - 1.0) > _NORM_TOL:
            raise ConfigurationError(f"kernel is not L2-normalized: sum |c|^2 d(dp) = {total!r}")
        dp.flags.writeable = False
        c.flags.writeable = False
        object.__setattr__(self, "dp", dp)
        object.__setattr__(self, "c", c)

    @property
    def is_singleton(self) -> bool:
        return self.dp.size == 1

    def density(self) -> np.ndarray:
        return np.abs(self.c) ** 2

    def support(self) -> tuple[float, float]:
        return float(self.dp[0]), float(self.dp[-1])

    def mean(self) -> float:
        return float(np.sum(self.density() * self.dp) * self.spacing)

    def variance(self) -> float:
        mu = self.mean()
        return float(np.sum(self.density() * (self.dp - mu) ** 2) * self.spacing)


def kernel_preset(
    kind: Literal["identity", "gaussian", "lens_aperture"],
    *,
    s: float | None = None,
    lam: float | None = None,
    epsilon: float | None = None,
    n_points: int | None = None,
) -> ScatteringKernel:
    """Build one of the shipped exchange-amplitude shapes.

    identity        no exchange: C concentrated at dp = 0.
    gaussian        |C|^2 a zero-mean Gaussian of standard deviation ``s``.
    lens_aperture   |C|^2 uniform over the momentum window accepted by a lens
                    of half-angle ``epsilon`` at wavelength ``lam``: full width
                    4 pi sin(epsilon) / lam  (h = 2 pi in natural units).
    """
    if kind == "identity":
        return ScatteringKernel(np.array([0.0]), np.array([1.0 + 0.0j]), 1.0)
    if kind == "gaussian":
        if s is None or s <= 0.0:
            raise ConfigurationError("gaussian kernel needs a width s > 0")
        n = 513 if n_points is None else int(n_points)
        if n < 16:
            raise ConfigurationError(f"gaussian kernel cannot be resolved with {n} points")
        half_span = 8.0 * s
        dp = np.linspace(-half_span, half_span, n)
        spacing = dp[1] - dp[0]
        density = np.exp(-(dp**2) / (2.0 * s**2))
        density /= np.sum(density) * spacing
        return ScatteringKernel(dp, np.sqrt(density).astype(np.complex128), float(spacing))
    if kind == "lens_aperture":
        if lam is None or lam <= 0.0:
            raise ConfigurationError("lens_aperture kernel needs a wavelength lam > 0")
        if epsilon is None or not 0.0 < epsilon < math.pi / 2.0:
            raise ConfigurationError("lens_aperture needs a half-angle 0 < epsilon < pi/2")
        width = 4.0 * math.pi * math.sin(epsilon) / lam
        n = 1024 if n_points is None else int(n_points)
        if n < 16:
            raise ConfigurationError(f"lens_aperture kernel cannot be resolved with {n} points")
        spacing = width / n
        # midpoint lattice: the boxcar transform then has its zeros exactly at
        # width * xi = 2 pi m, matching the continuum sinc
        dp = -width / 2.0 + (np.arange(n) + 0.5) * spacing
        c = np.full(n, 1.0 / math.sqrt(width), dtype=np.complex128)
        return ScatteringKernel(dp, c, float(spacing))
    raise ConfigurationError(f"unknown kernel preset {kind!r}")


@dataclass(frozen=True)
class DecoherenceKernel:
    """Tag overlap D(xi) sampled on a separation lattice.

    D(0) = 1, |D| <= 1 and D(-xi) = D(xi)* whenever the lattice is symmetric.
    """

    xi: np.ndarray
    d: np.ndarray

    def __post_init__(self) -> None:
        xi = np.ascontiguousarray(self.xi, dtype=np.float64)
        d = np.ascontiguousarray(self.d, dtype=np.complex128)
        if xi.ndim != 1 or d.shape != xi.shape:
            raise ConfigurationError("decoherence kernel needs matching 1-D xi and d arrays")
        if float(np.abs(d).max()) > 1.0 + 1e-10:
            raise ConfigurationError("|D(xi)| exceeds 1: kernel not normalized")
        at_zero = np.abs(xi) < 1e-12
        if at_zero.any() and np.abs(d[at_zero] - 1.0).max() > 1e-10:
            raise ConfigurationError("D(0) must equal 1")
        if np.allclose(xi[::-1], -xi, rtol=0.0, atol=1e-12):
            if np.abs(d - np.conj(d[::-1])).max() > 1e-10:
                raise ConfigurationError("D(-xi) must equal D(xi)*")
        xi.flags.writeable = False
        d.flags.writeable = False
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "d", d)


def tag_overlap(kernel: ScatteringKernel, xi: float | np.ndarray) -> complex | np.ndarray:
    """D(xi) = sum |c|^2 exp(i dp xi) d(dp) for one or many separations."""
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    weights = kernel.density() * kernel.spacing
    values = np.exp(1j * np.outer(xi_arr, kernel.dp)) @ weights
    if np.isscalar(xi) or np.ndim(xi) == 0:
        return complex(values[0])
    return values


def decoherence_kernel(kernel: ScatteringKernel, xi_grid: np.ndarray) -> DecoherenceKernel:
    """Evaluate the tag overlap on a separation lattice by direct quadrature."""
    xi = np.asarray(xi_grid, dtype=np.float64)
    return DecoherenceKernel(xi, np.asarray(tag_overlap(kernel, xi)))


def scatter_reduced(wf: WaveFunction, kernel: ScatteringKernel) -> DensityMatrix:
    """Reduced particle state after an entangling momentum exchange.

    rho(x, x') = psi(x) psi*(x') D(x - x'): the position diagonal equals
    |psi|^2 exactly, and the momentum marginal is the pre-scattering momentum
    density convolved with |C|^2.
    """
    grid = wf.grid
    n = grid.n_points
    # D on the nonnegative offsets only; D(-xi) = D(xi)* because |C|^2 is real
    weights = kernel.density() * kernel.spacing
    d_pos = np.exp(1j * np.outer(grid.dx * np.arange(n), kernel.dp)) @ weights
    d_all = np.concatenate([np.conj(d_pos[:0:-1]), d_pos])
    rho = np.outer(wf.amp, np.conj(wf.amp))
    cols = np.arange(n, dtype=np.int64)
    block = 512
    for start in range(0, n, block):
        stop = min(start + block, n)
        idx = (cols[start:stop, None] - cols[None, :]) + (n - 1)
        rho[start:stop, :] *= d_all[idx]
    return DensityMatrix(grid, rho)


def entangle_at_slits(
    wf_post_aperture: WaveFunction, ap: Aperture, kernel: ScatteringKernel
) -> BranchState:
    """Split a post-aperture state into per-slit branches with which-way tags.

    Branch j is the restriction of the wavefunction to slit j's half of the
    line (split at the midpoint between the slit centers), renormalized, with
    weight sqrt(per-slit probability).  The tags attached at the two slit
    centers overlap by D(separation), which is all the later dynamics ever
    sees of them.  A single slit yields one branch with a trivial Gram.
    """
    grid = wf_post_aperture.grid
    ap.validate_on(grid)
    centers = ap.slit_centers()
    if len(centers) == 1:
        return BranchState(
            grid, (wf_post_aperture,), np.array([1.0 + 0.0j]), np.array([[1.0 + 0.0j]])
        )
    midpoint = 0.5 * (centers[0] + centers[1])
    masks = (grid.x <= midpoint, grid.x > midpoint)
    branches = []
    weights = []
    for which, mask in zip(("left", "right"), masks):
        cut = np.where(mask, wf_post_aperture.amp, 0.0)
        prob = float(np.sum(np.abs(cut) ** 2) * grid.dx)
        if prob <= 1e-300:
            raise EmptyStateError(f"no probability in the {which} slit")
        branches.append(WaveFunction(grid, cut))
        weights.append(math.sqrt(prob))
    overlap = complex(tag_overlap(kernel, float(ap.separation)))
    gram = np.array([[1.0, overlap], [np.conj(overlap), 1.0]], dtype=np.complex128)
    return BranchState(grid, tuple(branches), np.asarray(weights, dtype=np.complex128), gram)


@dataclass(frozen=True)
class JointState:
    """Two-particle amplitude Psi(p, dp) = phi(p - dp) C(dp), momentum representation.

    Rows follow the particle's FFT-ordered momentum lattice; columns follow the
    exchange lattice ``tag_dp`` with quadrature weight ``tag_spacing``.
    """

    grid: Grid
    tag_dp: np.ndarray
    tag_spacing: float
    amp: np.ndarray

    def norm(self) -> float:
        return float(
            np.sqrt(np.sum(np.abs(self.amp) ** 2) * self.grid.dp * self.tag_spacing)
        )

    def reduced_density(self) -> DensityMatrix:
        """Trace out the tag index and return the particle's position-space state."""
        rho_p = (self.amp * self.tag_spacing) @ self.amp.conj().T
        rho_x = fourier.density_to_position(self.grid, rho_p)
        rho_x = 0.5 * (rho_x + rho_x.conj().T)
        return DensityMatrix(self.grid, rho_x)

    def reduced_purity(self) -> float:
        rho_p = (self.amp * self.tag_spacing) @ self.amp.conj().T
        return float(np.sum(np.abs(rho_p) ** 2) * self.grid.dp**2)


def build_joint_state(wf: WaveFunction, kernel: ScatteringKernel, tag_grid: Grid) -> JointState:
    """Explicit entangled two-particle amplitude for oracle use.

    The exchange quadrature runs over the kernel's own lattice; ``tag_grid``
    must be able to host it (its momentum lattice spans the kernel support at
    a spacing fine enough to resolve the kernel's width), otherwise the
    discretized partner space cannot represent the entanglement and a
    configuration error is raised.  Tracing out the tag index reproduces
    :func:`scatter_reduced` to rounding error.
    """
    lo, hi = kernel.support()
    p_lo = float(tag_grid.p.min())
    p_hi = float(tag_grid.p.max())
    if lo < p_lo - 1e-12 or hi > p_hi + 1e-12:
        raise ConfigurationError(
            f"tag grid momentum range [{p_lo:.4g}, {p_hi:.4g}] does not cover "
            f"the kernel support [{lo:.4g}, {hi:.4g}]"
        )
    if not kernel.is_singleton:
        span = hi - lo
        if tag_grid.dp > span / 4.0 + 1e-12:
            raise ConfigurationError(
                f"tag grid momentum spacing {tag_grid.dp:.4g} is too coarse to resolve "
                f"a kernel of support width {span:.4g}"
            )
    grid = wf.grid
    # column j: phi evaluated on the lattice shifted by dp_j, via modulation
    modulated = wf.amp[None, :] * np.exp(1j * np.outer(kernel.dp, grid.x))
    phi_shifted = fourier.to_momentum(grid, modulated, axis=1)
    amp = phi_shifted.T * kernel.c[None, :]
    joint = JointState(grid, kernel.dp, kernel.spacing, amp)
    nrm = joint.norm()
    if nrm <= 1e-300:
        raise EmptyStateError("joint state has zero norm")
    return JointState(grid, kernel.dp, kernel.spacing, amp / nrm)
