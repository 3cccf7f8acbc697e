"""Discretized quantum states: grids, wavefunctions, density matrices, branches.

Everything lives on a uniform 1-D lattice with natural units (hbar = 1).
All values are immutable after construction and every constructor enforces
its normalization contract, so any object of these types can be trusted to
satisfy its invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    ConfigurationError,
    EmptyStateError,
    InvalidEntanglementError,
)
from . import fourier

_HERMITICITY_TOL = 1e-10
_TRACE_TOL = 1e-10
_PURITY_TOL = 1e-8
_GRAM_PSD_TOL = 1e-8


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform position lattice with its conjugate momentum lattice.

    The momentum lattice spans [-pi/dx, pi/dx) with spacing
    dp = 2 pi / (n_points * dx), i.e. dp * dx * n_points = 2 pi exactly.
    """

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self) -> None:
        if not isinstance(self.n_points, (int, np.integer)):
            raise ConfigurationError("n_points must be an integer")
        if self.n_points < 16 or not _is_power_of_two(int(self.n_points)):
            raise ConfigurationError(
                f"n_points must be a power of two >= 16, got {self.n_points}"
            )
        if not self.x_max > self.x_min:
            raise ConfigurationError(
                f"degenerate extent: x_max={self.x_max} must exceed x_min={self.x_min}"
            )

    @property
    def extent(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.extent / self.n_points

    @property
    def dp(self) -> float:
        return 2.0 * np.pi / self.extent

    @cached_property
    def x(self) -> np.ndarray:
        """Position samples x_j = x_min + j dx (the right endpoint is excluded)."""
        x = self.x_min + self.dx * np.arange(self.n_points)
        x.flags.writeable = False
        return x

    @cached_property
    def p(self) -> np.ndarray:
        """Momentum samples in FFT ordering, covering [-pi/dx, pi/dx)."""
        p = 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)
        p.flags.writeable = False
        return p

    def norm(self, amp: np.ndarray) -> float:
        return float(np.sqrt(np.sum(np.abs(amp) ** 2) * self.dx))

    def inner(self, bra: np.ndarray, ket: np.ndarray) -> complex:
        return complex(np.sum(np.conj(bra) * ket) * self.dx)


def make_grid(x_min: float, x_max: float, n_points: int) -> Grid:
    """Build a validated grid; see :class:`Grid` for the lattice conventions."""
    return Grid(float(x_min), float(x_max), int(n_points))


@dataclass(frozen=True)
class WaveFunction:
    """Complex amplitude field on a grid, always held at unit norm."""

    grid: Grid
    amp: np.ndarray

    def __post_init__(self) -> None:
        amp = np.ascontiguousarray(self.amp, dtype=np.complex128)
        if amp.shape != (self.grid.n_points,):
            raise ConfigurationError(
                f"amplitude length {amp.shape} does not match grid n_points={self.grid.n_points}"
            )
        nrm = self.grid.norm(amp)
        if not np.isfinite(nrm) or nrm < 1e-150:
            raise EmptyStateError("cannot normalize a wavefunction with zero norm")
        amp = amp / nrm
        amp.flags.writeable = False
        object.__setattr__(self, "amp", amp)

    def norm(self) -> float:
        return self.grid.norm(self.amp)

    def position_density(self) -> np.ndarray:
        return np.abs(self.amp) ** 2

    def momentum_amplitudes(self) -> np.ndarray:
        """phi(p) on the FFT-ordered momentum lattice."""
        return fourier.to_momentum(self.grid, self.amp)

    def momentum_density(self) -> np.ndarray:
        return np.abs(self.momentum_amplitudes()) ** 2


def gaussian_packet(grid: Grid, x0: float, p0: float, sigma_x: float) -> WaveFunction:
    """Minimum-uncertainty packet exp(-(x-x0)^2/(4 sigma_x^2) + i p0 x).

    On the grid this reproduces position std sigma_x and momentum std
    1/(2 sigma_x) to well below 0.1% as long as the packet is resolvable
    (sigma_x >= 4 dx) and contained (sigma_x <= extent/8).
    """
    if sigma_x < 4.0 * grid.dx:
        raise ConfigurationError(
            f"sigma_x={sigma_x} is not resolvable: need sigma_x >= 4*dx = {4.0 * grid.dx:.6g}"
        )
    if sigma_x > grid.extent / 8.0:
        raise ConfigurationError(
            f"sigma_x={sigma_x} is not contained: need sigma_x <= extent/8 = {grid.extent / 8.0:.6g}"
        )
    x = grid.x
    amp = np.exp(-((x - x0) ** 2) / (4.0 * sigma_x**2) + 1j * p0 * x)
    return WaveFunction(grid, amp)


def _max_hermiticity_defect(rho: np.ndarray, block: int = 512) -> float:
    n = rho.shape[0]
    worst = 0.0
    for start in range(0, n, block):
        stop = min(start + block, n)
        defect = np.abs(rho[start:stop, :] - rho[:, start:stop].conj().T)
        worst = max(worst, float(defect.max()))
    return worst


def _abs_square_sum(rho: np.ndarray, block: int = 512) -> float:
    n = rho.shape[0]
    total = 0.0
    for start in range(0, n, block):
        blk = rho[start : start + block, :]
        total += float(np.sum(blk.real**2 + blk.imag**2))
    return total


@dataclass(frozen=True)
class DensityMatrix:
    """rho(x_j, x_k) over a grid: Hermitian, unit trace, purity <= 1.

    Positivity is not checked at construction (it costs a full eigensolve);
    call :meth:`min_eigenvalue` on demand.
    """

    grid: Grid
    rho: np.ndarray

    def __post_init__(self) -> None:
        rho = np.ascontiguousarray(self.rho, dtype=np.complex128)
        n = self.grid.n_points
        if rho.shape != (n, n):
            raise ConfigurationError(f"density matrix shape {rho.shape} does not match grid ({n}, {n})")
        defect = _max_hermiticity_defect(rho)
        if defect > _HERMITICITY_TOL:
            raise ConfigurationError(f"density matrix is not Hermitian: max defect {defect:.3e}")
        tr = float(np.trace(rho).real) * self.grid.dx
        if abs(tr - 1.0) > _TRACE_TOL:
            raise ConfigurationError(f"density matrix trace {tr!r} is not 1 within {_TRACE_TOL}")
        pur = _abs_square_sum(rho) * self.grid.dx**2
        if pur > 1.0 + _PURITY_TOL:
            raise ConfigurationError(f"density matrix purity {pur!r} exceeds 1")
        rho.flags.writeable = False
        object.__setattr__(self, "rho", rho)

    def trace(self) -> float:
        return float(np.trace(self.rho).real) * self.grid.dx

    def purity(self) -> float:
        """Tr(rho^2) with the continuum measure (dx^2); equals 1 for pure states."""
        return _abs_square_sum(self.rho) * self.grid.dx**2

    def intensity(self) -> np.ndarray:
        """Position diagonal rho(x_j, x_j); integrates to 1 against dx."""
        return np.ascontiguousarray(np.diag(self.rho).real)

    def momentum_matrix(self) -> np.ndarray:
        return fourier.density_to_momentum(self.grid, self.rho)

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue of the discrete kernel rho*dx (>= -1e-8 when valid)."""
        return float(np.linalg.eigvalsh(self.rho * self.grid.dx)[0])


def density_from_pure(wf: WaveFunction) -> DensityMatrix:
    """Rank-1 projector rho(x, x') = psi(x) psi*(x')."""
    rho = np.outer(wf.amp, np.conj(wf.amp))
    return DensityMatrix(wf.grid, rho)


@dataclass(frozen=True)
class BranchState:
    """Superposition branches tagged by (generally non-orthogonal) partner states.

    ``weights[j]`` is the complex coefficient of branch j (each branch
    wavefunction is itself unit-normalized); ``gram[j, k]`` is the overlap
    <tag_k | tag_j> of the attached tag states, so the implied reduced state is

        rho(x, x') ~ sum_jk  w_j w_k* gram_jk  psi_j(x) psi_k*(x')

    up to trace normalization.
    """

    grid: Grid
    branches: tuple[WaveFunction, ...]
    weights: np.ndarray
    gram: np.ndarray

    def __post_init__(self) -> None:
        branches = tuple(self.branches)
        if not branches:
            raise ConfigurationError("a branch state needs at least one branch")
        for wf in branches:
            if wf.grid != self.grid:
                raise ConfigurationError("all branches must share the same grid")
        m = len(branches)
        weights = np.ascontiguousarray(self.weights, dtype=np.complex128)
        gram = np.ascontiguousarray(self.gram, dtype=np.complex128)
        if weights.shape != (m,):
            raise ConfigurationError(f"weights shape {weights.shape} does not match {m} branches")
        if gram.shape != (m, m):
            raise ConfigurationError(f"gram shape {gram.shape} does not match {m} branches")
        if np.abs(gram - gram.conj().T).max() > _HERMITICITY_TOL:
            raise InvalidEntanglementError("tag Gram matrix is not Hermitian")
        if np.abs(np.diag(gram) - 1.0).max() > _HERMITICITY_TOL:
            raise InvalidEntanglementError("tag states must be normalized (unit Gram diagonal)")
        if float(np.linalg.eigvalsh(gram)[0]) < -_GRAM_PSD_TOL:
            raise InvalidEntanglementError("tag Gram matrix is not positive semidefinite")
        weights.flags.writeable = False
        gram.flags.writeable = False
        object.__setattr__(self, "branches", branches)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "gram", gram)

    @property
    def n_branches(self) -> int:
        return len(self.branches)

    def coefficient_matrix(self) -> np.ndarray:
        """W_jk = w_j w_k* gram_jk, the branch-space kernel of the reduced state."""
        return np.outer(self.weights, np.conj(self.weights)) * self.gram

    def overlap_matrix(self) -> np.ndarray:
        """S_ab = <psi_a | psi_b> between branch wavefunctions."""
        amps = np.stack([wf.amp for wf in self.branches])
        return np.conj(amps) @ amps.T * self.grid.dx

    def trace_weight(self) -> float:
        """Trace of the unnormalized reduced state; used as the normalizer."""
        w = self.coefficient_matrix()
        s = self.overlap_matrix()
        # Tr sum_jk W_jk |psi_j><psi_k|  =  sum_jk W_jk S_kj
        return float(np.sum(w * s.T).real)

    def _normalizer(self) -> float:
        z = self.trace_weight()
        if z <= 1e-300:
            raise EmptyStateError("branch state carries no probability")
        return z

    def intensity(self) -> np.ndarray:
        """Normalized position diagonal of the implied reduced state."""
        z = self._normalizer()
        w = self.coefficient_matrix()
        amps = np.stack([wf.amp for wf in self.branches])
        out = np.einsum("jk,jx,kx->x", w, amps, np.conj(amps)).real
        return out / z

    def momentum_density(self) -> np.ndarray:
        """Normalized momentum diagonal of the implied reduced state."""
        z = self._normalizer()
        w = self.coefficient_matrix()
        phis = np.stack([wf.momentum_amplitudes() for wf in self.branches])
        out = np.einsum("jk,jx,kx->x", w, phis, np.conj(phis)).real
        return out / z

    def purity(self) -> float:
        """Tr(rho^2) of the implied reduced state, via branch-space algebra."""
        z = self._normalizer()
        w = self.coefficient_matrix()
        s = self.overlap_matrix()
        # Tr(rho0^2) = sum_jklm W_jk S_kl W_lm S_mj = Tr(W S W S) with S_ab = <psi_a|psi_b>
        ws = w @ s
        return float(np.trace(ws @ ws).real) / z**2


def density_from_branches(bs: BranchState) -> DensityMatrix:
    """Materialize the reduced density matrix of a branch decomposition.

    For two equal-weight branches with tag overlap gamma the diagonal is the
    two-beam interference law: |psi_1|^2 + |psi_2|^2 + 2 Re[gamma psi_1 psi_2*],
    renormalized to unit trace.
    """
    z = bs._normalizer()
    w = bs.coefficient_matrix()
    amps = np.stack([wf.amp for wf in bs.branches])
    rho = np.einsum("jk,jx,ky->xy", w, amps, np.conj(amps)) / z
    # einsum's rounding can leave a ~1e-16 Hermiticity defect; symmetrize it away
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(bs.grid, rho)
