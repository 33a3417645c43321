"""Evaluation and large-argument asymptotics of the Humbert function Psi_1.

``Psi_1[a, b; c, c'; x, y] = sum (a)_{m+n} (b)_m / ((c)_m (c')_n) x^m y^n / (m! n!)``
for ``|x| < 1``, continued to ``x`` off ``[1, inf)``.
"""

from .errors import (
    ConvergenceError,
    ConvergenceFailure,
    DivergentSeriesError,
    DomainError,
    ExclusionZoneError,
    GammaPoleError,
    HumbertError,
    NoMethodError,
    NonFiniteError,
    PreconditionError,
)
from .gamma_core import (
    BoundReport,
    gamma,
    gamma_ratio,
    gamma_ratio_bound,
    log_gamma,
    pochhammer,
    pochhammer_ratio,
    shifted_ratio_product,
)
from .hyper_series import (
    ApproxResult,
    HypParams,
    TruncationPolicy,
    f3f2_unity_terminating,
    pfq,
    psi1_double_series,
)
from .params import EvalPoint, Psi1Params, classify_region
from .psi1_asym import (
    Expansion13Config,
    RayScaling,
    choose_w_thm13,
    coeff_a_k,
    leading_term,
    psi1_asym_thm12,
    psi1_asym_thm13,
)
from .psi1_eval import psi1_eval, psi1_kummer, psi1_laplace, psi1_series_thm11
from .scalars import Exact, parse_scalar, precision
from .two_f_two import (
    TwoF2Family,
    WSelection,
    choose_w,
    coeff_c_kn,
    f2f2_growth_check_plus_n,
    f2f2_large_z,
    s_n_sum,
    t_n_sum,
)

__version__ = "0.1.0"
