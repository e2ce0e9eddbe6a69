"""Numerical laboratory for nonlocal p-diffusion on a bounded interval.

Simulates the Dirichlet evolution driven by the fractional p-Laplacian
(zero exterior data), constructs the decaying separate-variable
solution and the first eigenpair, and checks the quantitative
properties of the flow as executable diagnostics.
"""

from .diagnostics import (
    CheckResult,
    check_convergence_to_profile,
    check_extinction,
    check_positivity,
    check_reflection,
    check_sharp_sandwich,
    check_universal_bound,
    fit_decay_exponent,
    monitor_lq_decay,
)
from .domain import Grid, Params, check_field, make_grid, scale_grid
from .errors import ConvergenceFailure, GridMismatchError, ParameterError
from .evolution import (
    StepRecord,
    TimeSchedule,
    Trajectory,
    bump_data,
    constant_data,
    evolve,
    from_rescaled,
    indicator_data,
    single_cell_data,
    step_time_derivative,
    to_extinction_rescaled,
    to_rescaled,
)
from .kernel import KernelWeights, build_weights, kernel_cell_integral, tail_mass_coefficient
from .operator import (
    apply_operator,
    energy,
    lp_norm_p,
    phi,
    rayleigh_quotient,
    weak_form,
)
from .profiles import (
    EigenPair,
    GiantProfile,
    compute_eigenpair,
    compute_giant,
    denormalize_profile,
    giant_residual,
    normalize_profile,
)
from .prox import ProxReport, prox_residual, prox_step

__version__ = "0.1.0"
