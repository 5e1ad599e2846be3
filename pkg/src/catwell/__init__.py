"""Parity-readout interferometry with the two-mode double-well condensate.

Exact diagonalization of the two-site Bose-Hubbard model in its collective
spin form, the phase-imprint / beam-splitter / parity-readout measurement
pipeline, closed-form reference signals, and sweeps of the near-degenerate
ground-state gap.
"""

from .states import Basis, State, basis_state
from .eigen import (
    ConvergenceError,
    EigenDecomposition,
    Tridiag,
    apply_unitary,
    jacobi_eigen,
    rotation_about_x,
    spin_x_tridiag,
    sturm_count_below,
    tridiag_eigen,
)
from .spin import (
    ParityOperator,
    SpinOperators,
    build_spin_operators,
    cat_state,
    parity_operator,
    sy_extreme_eigenstates,
)
from .model import (
    GapRow,
    GroundSolution,
    ModelParams,
    build_hamiltonian,
    chi,
    collapse_atom_bound,
    gap_scan,
    ground_and_gap,
    interaction_for_chi,
)
from .interferometer import (
    Mixture,
    ResidualError,
    ScanRow,
    analytic_cat_parity,
    beam_splitter,
    mixture_parity,
    mixture_pipeline,
    parity_derivative,
    parity_stats,
    perturbative_parity,
    phase_imprint,
    run_pipeline,
    scan,
    theta_grid,
    thermal_cat_mixture,
)
from .wigner import wigner_d_matrix, wigner_little_d

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "State",
    "basis_state",
    "ConvergenceError",
    "EigenDecomposition",
    "Tridiag",
    "apply_unitary",
    "jacobi_eigen",
    "rotation_about_x",
    "spin_x_tridiag",
    "sturm_count_below",
    "tridiag_eigen",
    "ParityOperator",
    "SpinOperators",
    "build_spin_operators",
    "cat_state",
    "parity_operator",
    "sy_extreme_eigenstates",
    "GapRow",
    "GroundSolution",
    "ModelParams",
    "build_hamiltonian",
    "chi",
    "collapse_atom_bound",
    "gap_scan",
    "ground_and_gap",
    "interaction_for_chi",
    "Mixture",
    "ResidualError",
    "ScanRow",
    "analytic_cat_parity",
    "beam_splitter",
    "mixture_parity",
    "mixture_pipeline",
    "parity_derivative",
    "parity_stats",
    "perturbative_parity",
    "phase_imprint",
    "run_pipeline",
    "scan",
    "theta_grid",
    "thermal_cat_mixture",
    "wigner_d_matrix",
    "wigner_little_d",
    "__version__",
]
