"""Exact discretization of SISO LTI systems under aperiodic and periodic sampling."""

from ._expm import expm
from ._thresholds import DEFAULT_THRESHOLDS, Thresholds, hadamard_ratio
from .admissibility import (
    AdmissibilityReport,
    ArcSet,
    Finding,
    ReductionPreconditionError,
    allowed_arcs_third_order,
    check_generic,
    check_second_order,
    check_third_order,
    reduction_check_fourth_order,
    third_order_delta,
)
from .aperiodic import (
    SamplingSchedule,
    StepCoefficients,
    f_coeffs_closed,
    f_coeffs_solve,
    g_coeffs_impulse,
    g_coeffs_zoh,
    g_vectors,
    model_coefficients,
    simulate,
    step_coefficients,
)
from .estimators import AperiodicDiscretizer, PeriodicDiscretizer
from .exceptions import (
    AperiodicLTIError,
    ClusteredRootsWarning,
    ConfigError,
    ExpmOverflowError,
    IllConditionedWindowWarning,
    InadmissibleSequenceError,
    InvalidScheduleError,
    InvalidSystemError,
    RootFindingError,
    ScheduleGenerationError,
)
from .lti_core import (
    CompanionRealization,
    Spectrum,
    TransferFunction,
    impulse_response,
    markov_parameters,
    realize,
    spectrum,
    step_realization,
)
from .periodic import (
    PeriodicModel,
    a_coeffs,
    b_coeffs,
    check_periodic_resonance,
    dead_time_model,
    gain_identity,
    periodic_model,
    sweep,
)
from .validation import (
    ComparisonResult,
    compare,
    convolution_oracle,
    random_admissible_schedule,
    random_stable_system,
    state_update_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "a_coeffs",
    "AdmissibilityReport",
    "allowed_arcs_third_order",
    "AperiodicDiscretizer",
    "AperiodicLTIError",
    "ArcSet",
    "b_coeffs",
    "check_generic",
    "check_periodic_resonance",
    "check_second_order",
    "check_third_order",
    "ClusteredRootsWarning",
    "CompanionRealization",
    "compare",
    "ComparisonResult",
    "ConfigError",
    "convolution_oracle",
    "dead_time_model",
    "DEFAULT_THRESHOLDS",
    "expm",
    "ExpmOverflowError",
    "f_coeffs_closed",
    "f_coeffs_solve",
    "Finding",
    "g_coeffs_impulse",
    "g_coeffs_zoh",
    "g_vectors",
    "gain_identity",
    "hadamard_ratio",
    "IllConditionedWindowWarning",
    "impulse_response",
    "InadmissibleSequenceError",
    "InvalidScheduleError",
    "InvalidSystemError",
    "markov_parameters",
    "model_coefficients",
    "periodic_model",
    "PeriodicDiscretizer",
    "PeriodicModel",
    "random_admissible_schedule",
    "random_stable_system",
    "realize",
    "reduction_check_fourth_order",
    "ReductionPreconditionError",
    "RootFindingError",
    "SamplingSchedule",
    "ScheduleGenerationError",
    "simulate",
    "spectrum",
    "Spectrum",
    "state_update_oracle",
    "step_coefficients",
    "step_realization",
    "StepCoefficients",
    "sweep",
    "third_order_delta",
    "Thresholds",
    "TransferFunction",
]
