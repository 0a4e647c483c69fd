"""Teleportation fidelities and benchmarks for single-mode Gaussian ensembles.

Compares the deterministic continuous-variable teleportation scheme
(two-mode entangled resource, double homodyne, gain-scaled displacement
correction) against the probabilistic hybrid scheme (N-branch splitting,
qubit teleporters, post-selected recombination) over ensembles of pure
Gaussian input states, at fixed entanglement entropy or mean energy of
the resources, against the optimal classical measure-and-prepare
thresholds.  Every analytic path is cross-checked by brute-force
truncated Fock-space oracles.
"""

from .ar import ArConfig, ar_fidelity, ar_success_prob
from .ensemble import (
    Prior,
    benchmark_general,
    benchmark_squeezed,
    mean_fidelity_ar,
    mean_fidelity_vbk,
    resource_accounting,
    sample_prior,
)
from .errors import (
    BranchCountUnsupported,
    ConstraintUnreachable,
    CutoffTooSmall,
    DivisionByZeroSuccess,
    GridResolutionInsufficient,
    ModeIndexOutOfRange,
    QuadratureNotConverged,
    SingularCovariance,
    TailTooLarge,
    TelefidError,
)
from .fock import (
    FockVector,
    TruncationPolicy,
    apply_beam_splitter,
    apply_displace_1m,
    apply_squeeze_1m,
    apply_two_mode_squeeze,
    char_fn_1m,
    char_fn_2m,
    project_and_renormalize,
)
from .gauss import GaussianPure, char_fn, db_to_s, fock_overlap, fock_overlaps, squeezing_db
from .optimize import (
    Optimum,
    ResourceConstraint,
    SchemeComparison,
    compare_schemes,
    optimize_vbk,
    solve_constraint_r,
)
from .oracles import PhaseSpaceGrid, oracle_ar_teleport, oracle_vbk_teleport
from .reports import AverageReport, FidelityReport
from .resource import (
    BellBundle,
    SqueezedBellResource,
    bundle_metrics,
    char_fn_sb,
    energy_sb,
    entropy_sb,
    entropy_tmsv,
    schmidt_coefficients,
    tmsv,
)
from .vbk import (
    QuadratureSettings,
    VbkConfig,
    vbk_fidelity,
    vbk_fidelity_closed_gaussian,
    vbk_fidelity_quadrature,
    vbk_fidelity_values,
)

__version__ = "0.1.0"
