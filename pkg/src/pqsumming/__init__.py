"""Few-vector (p,q)-summing norms of finite-rank operators between lp spaces."""

from .ascent import AscentConfig
from .core import Exponent, REL_TOL, conjugate, holder_split, p_norm
from .operators import (
    CapExceeded,
    MatrixOperator,
    NormEstimate,
    SigmaDiagonal,
    bennett_sample,
    compose,
    inclusion,
    operator_norm,
)
from .summing import (
    SummingParams,
    VectorFamily,
    jameson_bound,
    jameson_truncate,
    kwapien_check,
    pi_estimate,
    pi_exact_linf_q1,
    strong_norm,
    weak_norm,
)
from .reductions import InequalityReport, QuotientInstance, maurey_reduce, quotient_verify
from .cotype import (
    CotypeParams,
    EmbeddedNorm,
    cotype_estimate,
    gaussian_average,
    lp_space,
    rademacher_average,
    theorem3_budget,
)

__version__ = "0.1.0"

__all__ = [
    "AscentConfig",
    "CapExceeded",
    "CotypeParams",
    "EmbeddedNorm",
    "Exponent",
    "InequalityReport",
    "MatrixOperator",
    "NormEstimate",
    "QuotientInstance",
    "REL_TOL",
    "SigmaDiagonal",
    "SummingParams",
    "VectorFamily",
    "__version__",
    "bennett_sample",
    "compose",
    "conjugate",
    "cotype_estimate",
    "gaussian_average",
    "holder_split",
    "inclusion",
    "jameson_bound",
    "jameson_truncate",
    "kwapien_check",
    "lp_space",
    "maurey_reduce",
    "operator_norm",
    "p_norm",
    "pi_estimate",
    "pi_exact_linf_q1",
    "quotient_verify",
    "rademacher_average",
    "strong_norm",
    "theorem3_budget",
    "weak_norm",
]
