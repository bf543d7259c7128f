"""Transmute qubit Hamiltonians into generalized 3- and 4-state Ising models.

The package turns k-local spin-1/2 models into diagonal-interaction qudit
models with a single transverse-field family, verifies the operator algebra
behind the construction, and checks the solvable physics numerically: exact
diagonalization sweeps, the free-fermion Kitaev solution, perturbative Potts
chains, Rydberg couplings, and Bose-Hubbard realizations.
"""

__version__ = "0.1.0"

from .errors import (
    CatalogueError,
    DegeneracyError,
    DimensionError,
    GaplessError,
    HierarchyWarning,
    InputError,
    IsingForgeError,
    NonConvergenceError,
    NonProjectiveError,
    PathMismatchError,
    PresetError,
    SchemaError,
    SingularityError,
)
from .model_ir import (
    Bond,
    IsingModel,
    Lattice,
    PauliTerm,
    QubitModel,
    build_lattice,
    deserialize,
    load_model,
    pauli_string_dict,
    resolve_site_op,
    save_model,
    serialize,
    standard_model,
)
from .qudit_algebra import (
    AntiUnitaryOp,
    antiunitary_symmetry,
    catalogue_names,
    check_symmetry,
    commutator,
    embed,
    make_fixed_matrix,
    majorana_field_residual,
    max_abs,
    pauli_algebra_residual,
    projective_phase,
)
from .transmute import (
    DoubletBasis,
    EffectiveCouplings,
    FieldSpec,
    build_projector,
    custom_field,
    effective_qubit_model,
    field_matrix,
    four_state_field,
    project_operator,
    projected_density_curve,
    theta_field,
    three_state_field,
    tilde_x_field,
    transmute_qubit_model,
    x_of_q_field,
)
from .exact_diag import (
    EntanglementReport,
    Spectrum,
    SweepResult,
    assemble,
    classical_ground_count,
    convergence_sweep,
    entanglement,
    lowest_k,
    staggered_chain_ground,
    string_order,
    two_site_spt,
)
from .kitaev_solver import (
    CriticalFields,
    KitaevParams,
    ScanRow,
    barycentric_grid,
    bloch,
    chern_number,
    corner_det_check,
    critical_fields,
    gap,
    phase_label,
    phase_scan,
    scan_center,
    scan_corners,
)
from .potts_pt import (
    PerturbationResult,
    ValidationRow,
    effective_model_chain,
    effective_xxz,
    first_order_chain,
    luttinger_K,
    potts_chain_model,
    relevance_threshold,
    validate_against_ed,
)
from .rydberg import (
    PairEnergies,
    SpinCouplings,
    bundled_pair_energies,
    couplings,
    effective_spin_model,
    from_c6,
    load_c6_cases,
    theta_field_analysis,
)
from .bose_hubbard import (
    BHModel,
    ClusterCheck,
    KitaevEffective,
    TriangleLevels,
    assemble_cluster,
    build_preset,
    effective_kitaev,
    intra_triangle_matrix,
    projected_density,
    triangle_spectrum,
    verify_small_cluster,
    zero_field_nu,
)
