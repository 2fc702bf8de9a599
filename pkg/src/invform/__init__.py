"""Closed-form Lead, Lag, Lead-Lag and PID synthesis from frequency-domain specs.

Coefficients are ascending everywhere; angles are radians.
"""

from .errors import (
    ConvergenceFailure,
    DegeneratePhase,
    DelayUnsupported,
    DesignError,
    EvalOnPole,
    Infeasible,
    InfeasibleAtFrequency,
    NoFeasibleCrossover,
    NumericFailure,
    ParseError,
    TypeMismatch,
)
from .networks import (
    LagParams,
    LeadLagComplexParams,
    LeadLagRealParams,
    LeadParams,
    design_lag,
    design_lead,
    design_leadlag,
    leadlag_complex_to_real,
    leadlag_real_to_complex,
    leadlag_search,
    solve_pq,
)
from .pid import (
    PdParams,
    PidParams,
    PiParams,
    controller_tf,
    design_pd,
    design_pi,
    design_pid_fix_td,
    design_pid_fix_ti,
    design_pid_gm,
    design_pid_ki,
    design_pid_sigma,
    pid_zeros,
)
from .polyfreq import Polynomial, TransferFunction, even_components, poly_all_roots, tf_eval
from .stability import (
    MarginReport,
    closed_loop_charpoly,
    is_hurwitz,
    measure_margins,
    routh,
    stable_gm_intervals,
)
from .targets import (
    DesignTargets,
    SteadyStateSpec,
    classify,
    dc_gain_from_spec,
    ki_from_spec,
    pid_targets_constrained_ki,
    pm_range_lag,
    pm_range_lead,
    targets_at_gain_crossover,
    targets_at_phase_crossover,
    wrap_angle,
)

__all__ = [
    "ConvergenceFailure",
    "DegeneratePhase",
    "DelayUnsupported",
    "DesignError",
    "EvalOnPole",
    "Infeasible",
    "InfeasibleAtFrequency",
    "NoFeasibleCrossover",
    "NumericFailure",
    "ParseError",
    "TypeMismatch",
    "LagParams",
    "LeadLagComplexParams",
    "LeadLagRealParams",
    "LeadParams",
    "design_lag",
    "design_lead",
    "design_leadlag",
    "leadlag_complex_to_real",
    "leadlag_real_to_complex",
    "leadlag_search",
    "solve_pq",
    "PdParams",
    "PidParams",
    "PiParams",
    "controller_tf",
    "design_pd",
    "design_pi",
    "design_pid_fix_td",
    "design_pid_fix_ti",
    "design_pid_gm",
    "design_pid_ki",
    "design_pid_sigma",
    "pid_zeros",
    "Polynomial",
    "TransferFunction",
    "even_components",
    "poly_all_roots",
    "tf_eval",
    "MarginReport",
    "closed_loop_charpoly",
    "is_hurwitz",
    "measure_margins",
    "routh",
    "stable_gm_intervals",
    "DesignTargets",
    "SteadyStateSpec",
    "classify",
    "dc_gain_from_spec",
    "ki_from_spec",
    "pid_targets_constrained_ki",
    "pm_range_lag",
    "pm_range_lead",
    "targets_at_gain_crossover",
    "targets_at_phase_crossover",
    "wrap_angle",
]
