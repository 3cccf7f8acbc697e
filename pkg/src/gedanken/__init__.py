"""Numerical quantum mechanics of the canonical gedanken experiments.

1-D wavepackets on periodic grids (hbar = 1), spectral free propagation,
momentum-exchange entanglement with which-way tags, reduced density matrices,
uncertainty records, and interference diagnostics, plus scenario runners and
a CLI that serializes their reports.
"""

from .errors import (
    BoundaryLeakWarning,
    ConfigurationError,
    EmptyStateError,
    EstimationError,
    FraunhoferWarning,
    GedankenError,
    InvalidEntanglementError,
    InvariantViolationError,
)
from .state import (
    BranchState,
    DensityMatrix,
    Grid,
    WaveFunction,
    density_from_branches,
    density_from_pure,
    gaussian_packet,
    make_grid,
)
from .propagation import (
    Aperture,
    ApertureResult,
    apply_aperture,
    double_slit,
    propagate_branches,
    propagate_density,
    propagate_free,
    single_slit,
)
from .scattering import (
    DecoherenceKernel,
    JointState,
    ScatteringKernel,
    build_joint_state,
    decoherence_kernel,
    entangle_at_slits,
    kernel_preset,
    scatter_reduced,
    tag_overlap,
)
from .observables import (
    UncertaintyRecord,
    fringe_spacing,
    intensity,
    momentum_moments,
    position_moments,
    record_from_branches,
    record_from_wavefunction,
    robertson_record,
    visibility,
)
from .measurement import (
    DiscreteState,
    MeasuredEnsemble,
    landau_peierls_probability,
    project_position_detection,
    von_neumann_measure,
)
from .scenarios import (
    ScenarioReport,
    run_double_slit,
    run_landau_peierls,
    run_microscope,
    run_scenario,
    run_single_slit,
    run_von_neumann,
)
from .config import RunConfig, parse_config
from .reporting import emit_report, summary_dict

__version__ = "0.1.0"
