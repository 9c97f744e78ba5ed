"""Fractional-order LMS variants (FCLMS, FNLMS), their classical baselines,
and a Monte Carlo system-identification harness for comparing them."""

from fraclms.fractional import (
    gamma,
    gl_fractional_derivative_oracle,
    principal_power,
    rl_power_derivative,
)
from fraclms.objectives import (
    QuadraticObjective,
    frac_gradient_corrected,
    frac_gradient_oracle,
    frac_gradient_paper,
    instantaneous_correlations,
    objective_correct,
    objective_flawed,
)
from fraclms.filters import FilterConfig, FilterState, init, step
from fraclms.harness import (
    ProtocolSpec,
    RunResult,
    SystemSpec,
    generate_input,
    preset,
    run_monte_carlo,
    run_single,
    synthesize_desired,
)
from fraclms.metrics import (
    LearningCurve,
    SteadyStateReport,
    build_table,
    classify_divergence,
    steady_state_db,
)

__version__ = "0.1.0"
