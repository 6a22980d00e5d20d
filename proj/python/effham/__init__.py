"""Search toolkit for optimal effective Hamiltonians of many-body systems."""

from ._core import (  # noqa: F401
    AnsatzCircuit,
    AnsatzGate,
    Axis,
    CandidateSet,
    ConfigError,
    EffectiveParams,
    EvolutionMethod,
    ExactPropagator,
    ExperimentConfig,
    GridAxis,
    GroverRunSummary,
    GroverState,
    HamiltonianSum,
    HamiltonianTerm,
    NumericError,
    PauliString,
    PhaseDistribution,
    PhaseGrid,
    ScanMethod,
    ScanOptions,
    ScanPoint,
    ScanResult,
    ScanRunSummary,
    SearchIteration,
    SearchMode,
    SearchReport,
    StateVector,
    TFIMParams,
    Trial,
    TrialSet,
    VariationalOptions,
    VariationalRunSummary,
    VariationalTrajectory,
    apply_exp_pauli_term,
    apply_pauli,
    apply_sum,
    average_fidelity,
    build_A,
    build_C,
    build_sw_effective,
    build_tfim,
    cache_fidelities,
    candidate_grid,
    composite_fidelity,
    dense_matrix,
    derivative_state,
    error_bound,
    evolve_trajectory,
    exact_evolve,
    exact_sw_coefficients,
    flip_coefficient,
    flip_coefficient_direct,
    grid_points,
    grover_iterate,
    ideal_flip,
    initial_states,
    inner_product,
    is_perturbative_regime,
    landscape_scan,
    optimal_iterations,
    overall_fidelity,
    phase_distribution,
    phase_distribution_direct,
    prepare_state,
    run_grover,
    run_oracle,
    run_scan,
    run_search,
    run_variational,
    subtract,
    theta_of_fidelity,
    threshold_window_radius,
    trial_fidelities,
    trial_fidelity,
    trotter_evolve,
    vqs_step,
)
from ._core import __version__  # noqa: F401
