"""Numerics for the two real inverse branches of sinh(a*w)*exp(w), the
branch transition function that generalizes swapping the Lambert W
branches, and the p,q-binomial distributions they parameterize."""

from .core import (
    AccuracyError,
    AsymmetryParam,
    BranchConstants,
    BranchId,
    ConvergenceError,
    DomainError,
    ParamKind,
    RangeError,
    SingularityError,
    UnsupportedError,
    as_param,
    branch_constants,
    forward,
    forward_dw,
    lambert_w,
    special_point,
)
from .branches import (
    ClosedFormTag,
    PsiQuery,
    omega,
    omega_closed_form,
    omega_finite_n,
    psi,
    psi_closed_form,
)
from .series import (
    SeriesExpansion,
    SeriesKind,
    asymptotic_psi0,
    asymptotic_psi1,
    bell,
    branch_point_series,
    derivative_series_check,
    envelope_crossover_estimates,
    psi0_bounds,
    psi1_bounds,
    taylor_at_zero,
)
from .calculus import (
    PnPolynomial,
    integral_omega,
    integral_omega_quadrature,
    integral_psi,
    integral_psi_quadrature,
    pn_next,
    pn_sequence,
    psi_derivative,
    psi_primitive,
)
from .parametrize import AlphaPoint, param_alpha, param_beta
from .pqbinom import (
    DegenerateRatioError,
    PqDistribution,
    PqParams,
    build_distribution,
    equal_ratio_residual,
    log_pq_binomial,
    peak_drift,
)

__version__ = "0.1.0"
