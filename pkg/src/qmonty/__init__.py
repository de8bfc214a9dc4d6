"""qmonty: exact simulator and equilibrium laboratory for the quantum Monty Hall game."""

from .errors import (
    DegenerateStateError,
    DomainError,
    InvalidBasisError,
    InvalidOperatorError,
    NormalizationError,
    ProtocolViolationError,
    QmontyError,
    ResourceLimitError,
    ScanFailureError,
    ShapeError,
)
from .quantum import (
    DensityMatrix,
    MeasurementBasis,
    StateVector,
    apply_local_unitary_aux,
    basis_ket,
    density_from_pure,
    measure_projective,
    mix,
    partial_trace,
    random_unitary,
    rotated_basis,
    superpose,
    tensor,
)
from .game import (
    AliceMeasurementStrategy,
    BobStrategy,
    GameSession,
    PayoffReport,
    Placement,
    alice_post_measurement_state,
    auto_play,
    bob_win_probability,
    expected_payoff,
    mixture_win_probability,
    post_measurement_entries,
    post_reveal_state,
    quantum_win_probability,
    session_step,
)
from .equilibrium import (
    EquilibriumReport,
    ScanCertificate,
    StrategyProfile,
    SweepTable,
    alice_best_response,
    bob_best_response,
    exploitability,
    nash_profile,
    no_pure_equilibrium_scan,
    profile_value,
    sweep_payoff,
    verify_nash,
)
from .nstage import (
    BobPolicy,
    NStageConfig,
    classical_value,
    final_stage_weights,
    optimal_classical_policy,
    quantum_nstage_equilibrium,
)
from .montecarlo import (
    McComparison,
    McEstimate,
    compare_with_analytic,
    simulate,
)

__version__ = "0.1.0"
