"""CHSH tests with mode-pair measurement operators on truncated Fock spaces."""

from .bell_ops import (
    ANGLE_PRESETS,
    AngleSet,
    BellOpSpec,
    DichotomyReport,
    bell_operator,
    bell_side_matrix,
    commuting_sides_check,
    dichotomy_check,
)
from .chsh import (
    CLASSICAL_BOUND,
    ChshReport,
    ConvergenceRow,
    TSIRELSON_BOUND,
    canonical_preset,
    chsh,
    coherent_damping,
    convergence_table,
    correlator_closed_form,
    correlator_matrix,
    violation_window,
)
from .fock import (
    ContractError,
    DensityMatrix,
    DimensionError,
    FockSpace,
    LinOp,
    Side,
    StateVector,
    apply,
    basis_state,
    commutator,
    expectation,
    identity,
    inner,
    lift,
)
from .optimize import (
    BracketingError,
    OptimizationResult,
    SweepRow,
    find_threshold,
    optimal_chsh,
    optimize_angles,
    parameter_sweep,
)
from .pseudospin import (
    UnitVector,
    pair_count,
    pair_spin,
    rest_identity,
    spin_dot,
    spin_dot_on_modes,
    spin_on_modes,
    total_spin,
)
from .selfcheck import algebra_report
from .states import (
    CoherentSuperposition,
    GenericPair,
    Noon,
    StateSpec,
    TruncationBound,
    TwoModeSqueezed,
    Werner,
    build_state,
    canonical_bell_pairs,
    coherent_superposition_state,
    default_space,
    generic_pair_state,
    noon_state,
    parse_state_spec,
    spec_parameter,
    state_spec_to_dict,
    tail_bound,
    two_mode_squeezed_state,
    werner_state,
)

__version__ = "0.1.0"
