"""Ideal measurement, position-detection projection, and perturbative transitions.

An ideal measurement correlates the system basis with orthonormal apparatus
states; tracing the apparatus out leaves the diagonal ensemble, which carries
every moment of the measured observable unchanged.  Position detection is the
continuum analogue: the detector tags are taken exactly orthonormal, so the
projection is total and only the off-diagonal coherences die.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .state import DensityMatrix, WaveFunction


@dataclass(frozen=True)
class DiscreteState:
    """Pure state over an orthonormal K-level basis carrying real eigenvalues."""

    coeffs: np.ndarray
    eigenvalues: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.ascontiguousarray(self.coeffs, dtype=np.complex128)
        eigenvalues = np.ascontiguousarray(self.eigenvalues, dtype=np.float64)
        if coeffs.ndim != 1 or coeffs.size < 2:
            raise ConfigurationError("need at least a 2-level state")
        if eigenvalues.shape != coeffs.shape:
            raise ConfigurationError("one eigenvalue per basis state required")
        nrm = float(np.sqrt(np.sum(np.abs(coeffs) ** 2)))
        if nrm < 1e-150:
            raise ConfigurationError("cannot normalize a zero state vector")
        coeffs = coeffs / nrm
        coeffs.flags.writeable = False
        eigenvalues.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "eigenvalues", eigenvalues)

    @property
    def dimension(self) -> int:
        return self.coeffs.size

    def probabilities(self) -> np.ndarray:
        return np.abs(self.coeffs) ** 2

    def moment(self, n: int) -> float:
        return float(np.sum(self.probabilities() * self.eigenvalues ** n))

    def delta(self) -> float:
        return math.sqrt(max(self.moment(2) - self.moment(1) ** 2, 0.0))

    def purity(self) -> float:
        return 1.0


@dataclass(frozen=True)
class MeasuredEnsemble:
    """Diagonal post-measurement state: classical weights over the same basis."""

    weights: np.ndarray
    eigenvalues: np.ndarray

    def __post_init__(self) -> None:
        weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        eigenvalues = np.ascontiguousarray(self.eigenvalues, dtype=np.float64)
        if weights.ndim != 1 or eigenvalues.shape != weights.shape:
            raise ConfigurationError("weights and eigenvalues must be matching 1-D arrays")
        if weights.min() < -1e-12 or abs(float(weights.sum()) - 1.0) > 1e-12:
            raise ConfigurationError("weights must be a probability vector")
        weights.flags.writeable = False
        eigenvalues.flags.writeable = False
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "eigenvalues", eigenvalues)

    def moment(self, n: int) -> float:
        return float(np.sum(self.weights * self.eigenvalues ** n))

    def delta(self) -> float:
        return math.sqrt(max(self.moment(2) - self.moment(1) ** 2, 0.0))

    def purity(self) -> float:
        return float(np.sum(self.weights**2))


def von_neumann_measure(state: DiscreteState) -> MeasuredEnsemble:
    """Trace out an apparatus perfectly correlated with the measured basis.

    The result is the diagonal ensemble with weights |psi_k|^2; every moment
    of the measured observable, and hence its standard deviation, is exactly
    the pre-measurement value.
    """
    return MeasuredEnsemble(state.probabilities(), state.eigenvalues)


def project_position_detection(wf: WaveFunction) -> DensityMatrix:
    """Position detection as a total projection onto the lattice basis.

    Returns the strictly diagonal density matrix with entries |psi(x_j)|^2:
    the intensity pattern is untouched while all spatial coherences vanish,
    so no later free evolution can revive interference between distant points.
    """
    return DensityMatrix(wf.grid, np.diag(wf.position_density()).astype(np.complex128))


def landau_peierls_probability(delta_e, t: float):
    """Perturbative transition weight sin^2(delta_e t / 2) / delta_e^2 (hbar = 1).

    ``delta_e`` is the total energy mismatch between initial and final states
    of system plus partner.  The value is an unnormalized weight with analytic
    limit t^2/4 at delta_e = 0 and zeros exactly at delta_e * t = 2 pi n.
    Accepts scalars or arrays.
    """
    if t < 0.0:
        raise ConfigurationError("elapsed time must be nonnegative")
    u = np.asarray(delta_e, dtype=np.float64) * (t / 2.0)
    out = (t * t / 4.0) * np.sinc(u / np.pi) ** 2
    if np.ndim(delta_e) == 0:
        return float(out)
    return out
