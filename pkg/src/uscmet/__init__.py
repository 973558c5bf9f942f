"""Frequency metrology with virtual excitations in ultrastrongly coupled cavity QED."""

from .dicke import (
    CoherentQfi,
    NormalFrequencies,
    SqueezingPair,
    bare_mode_occupation,
    coherent_qfi,
    dfreq_lower,
    ground_state_qfi,
    ground_state_qfi_near_threshold,
    normal_frequencies,
    real_squeezing_qfi,
    soft_mode_occupation,
    squeezing_parameters,
    virtual_mode_occupation,
    xi_derivatives,
)
from .driven import (
    SteadyResponse,
    driven_qfi_total,
    homodyne_variance,
    lindblad_steady_state,
    optimal_amplitude_detuning,
    snr_amplitude,
    snr_amplitude_near_threshold,
    snr_phase,
    steady_state_response,
)
from .errors import (
    BeyondThreshold,
    ConvergenceError,
    DimensionCap,
    DimensionMismatch,
    GridTooCoarse,
    InvalidSpec,
    NoRootInBracket,
    NotResonant,
    SingularDrift,
    SolverFailure,
    StepTooSmall,
    UscmetError,
)
from .figures import FIGURES, FigureTable, emit_figure
from .gaussian import GaussianState, SymplecticOp, evolve_free, fidelity_qfi, overlap
from .params import (
    DISPERSIVE_RATIO,
    RESONANCE_RTOL,
    THRESHOLD_GUARD,
    DerivativeConvention,
    DickeParams,
    DriveParams,
    RabiParams,
)
from .rabi import (
    DispersiveRegimeWarning,
    RabiEffective,
    StrategyId,
    StrategyResult,
    effective_gap_derivative,
    n_virtual_near_threshold,
    rabi_coherent_qfi,
    rabi_effective,
    rabi_ground_qfi,
    strategy_displaced,
    strategy_extract_evolved,
    strategy_extract_static,
    strategy_normal_mode,
    strategy_synergy,
)
from .strategies import (
    ComparisonGrid,
    ComparisonRow,
    crossover_coupling,
    run_comparison,
    scaling_exponent,
)
from .sweeps import (
    RangeSpec,
    SweepResult,
    SweepSpec,
    evaluate_point,
    parse_csv,
    run_sweep,
    to_csv,
    to_json,
    write_result,
    write_table,
)
from .validate import CHECK_NAMES, CheckResult, ValidationReport, run_validation

__version__ = "0.1.0"

__all__ = [
    "BeyondThreshold",
    "CHECK_NAMES",
    "CheckResult",
    "CoherentQfi",
    "ComparisonGrid",
    "ComparisonRow",
    "ConvergenceError",
    "DerivativeConvention",
    "DickeParams",
    "DimensionCap",
    "DimensionMismatch",
    "DISPERSIVE_RATIO",
    "DispersiveRegimeWarning",
    "DriveParams",
    "FIGURES",
    "FigureTable",
    "GaussianState",
    "GridTooCoarse",
    "InvalidSpec",
    "NoRootInBracket",
    "NormalFrequencies",
    "NotResonant",
    "RabiEffective",
    "RabiParams",
    "RangeSpec",
    "RESONANCE_RTOL",
    "SingularDrift",
    "SolverFailure",
    "SqueezingPair",
    "SteadyResponse",
    "StepTooSmall",
    "StrategyId",
    "StrategyResult",
    "SweepResult",
    "SweepSpec",
    "SymplecticOp",
    "THRESHOLD_GUARD",
    "UscmetError",
    "ValidationReport",
    "__version__",
    "bare_mode_occupation",
    "coherent_qfi",
    "crossover_coupling",
    "dfreq_lower",
    "driven_qfi_total",
    "effective_gap_derivative",
    "emit_figure",
    "evaluate_point",
    "evolve_free",
    "fidelity_qfi",
    "ground_state_qfi",
    "ground_state_qfi_near_threshold",
    "homodyne_variance",
    "lindblad_steady_state",
    "n_virtual_near_threshold",
    "normal_frequencies",
    "optimal_amplitude_detuning",
    "overlap",
    "parse_csv",
    "rabi_coherent_qfi",
    "rabi_effective",
    "rabi_ground_qfi",
    "real_squeezing_qfi",
    "run_comparison",
    "run_sweep",
    "run_validation",
    "scaling_exponent",
    "snr_amplitude",
    "snr_amplitude_near_threshold",
    "snr_phase",
    "soft_mode_occupation",
    "squeezing_parameters",
    "steady_state_response",
    "strategy_displaced",
    "strategy_extract_evolved",
    "strategy_extract_static",
    "strategy_normal_mode",
    "strategy_synergy",
    "to_csv",
    "to_json",
    "virtual_mode_occupation",
    "write_result",
    "write_table",
    "xi_derivatives",
]
