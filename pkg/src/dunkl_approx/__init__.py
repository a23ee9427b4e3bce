"""Dunkl-Gamma operators built from two-variable Hermite polynomials."""

from ._backend import BACKEND
from .dunkl_core import (
    DunklParam,
    LogValue,
    Polynomial,
    Ratio,
    SeriesControl,
    dunkl_derivative,
    dunkl_exp,
    dunkl_exp_ratio,
    gamma_nu_log,
    gamma_nu_log_direct,
    log_gamma,
    theta,
)
from .errors import (
    ConfigError,
    DomainError,
    DunklApproxError,
    GrowthViolation,
    NonConvergence,
    QuadratureFailure,
)
from .hermite import (
    HermiteParam,
    hermite_H,
    hermite_term,
    shifted_closed_form,
    shifted_series_sum,
)
from .moduli import (
    ModulusEstimate,
    ModulusKind,
    SmoothnessNorms,
    bound_final,
    bound_lemma8,
    bound_theorem6,
    bound_theorem7,
    lipschitz_constant,
    modulus,
    second_modulus,
    theorem7_radicand,
)
from .moments import (
    MomentReport,
    central_moment_closed,
    moment_closed,
    moment_report,
    shifted_apply,
    upsilon,
)
from .operators import (
    Bounded,
    Evaluation,
    Family,
    OperatorConfig,
    PolynomialDegree,
    QuadratureControl,
    TargetFunction,
    WeightSeries,
    apply,
    gamma_kernel_expectation,
    weights,
)
from .presets import PRESETS, preset

__version__ = "0.1.0"
