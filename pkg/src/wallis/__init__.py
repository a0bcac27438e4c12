"""Wallis-ratio approximation toolkit.

Exact Wallis ratios, validated enclosures of the classical approximant
families, exact derivation of the exponential correction coefficients,
convergence-rate estimation, and certified inequality sweeps.
"""

from .approximants import (
    ApproximantSpec,
    Chi,
    CoefficientSource,
    Corrected,
    ErrorTableRow,
    FamilyA,
    FamilyBC,
    Mu,
    SeriesCoefficients,
    correction_sum,
    error_table,
    evaluate,
    residual,
)
from .certify import (
    CertificateReport,
    ExactPolynomial,
    Inequality,
    PolyCertificate,
    SECOND_DERIVATIVE_NUMERATORS,
    SignSample,
    Verdict,
    check_inequality,
    closed_form_difference,
    difference_consistency,
    finite_difference_convexity,
    poly_nonneg_certificate,
    second_derivative_value,
    sweep,
)
from .errors import (
    DigitsNotCertified,
    DomainError,
    InconsistentTrend,
    RangeError,
    WallisError,
)
from .numerics import (
    DEFAULT_POLICY,
    ExactRational,
    Ordering,
    PrecisionPolicy,
    RealInterval,
    compare,
    decide_order,
    e_enclosure,
    e_over_pi,
    elementary,
    enclose_rational,
    exp,
    intervals_overlap,
    ln,
    pi_enclosure,
    pow_rational,
    rational,
    sqrt,
    wallis_exact,
    wallis_range,
)
from .series import (
    ConvergenceReport,
    LogRatioCoefficients,
    RankedCandidate,
    best_parameter_check,
    default_correction,
    estimate_rate,
    log_ratio_coeffs,
    solve_triangular,
    verify_log_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "ApproximantSpec", "Chi", "CoefficientSource", "Corrected", "ErrorTableRow",
    "FamilyA", "FamilyBC", "Mu", "SeriesCoefficients", "correction_sum",
    "error_table", "evaluate", "residual",
    "CertificateReport", "ExactPolynomial", "Inequality", "PolyCertificate",
    "SECOND_DERIVATIVE_NUMERATORS", "SignSample", "Verdict", "check_inequality",
    "closed_form_difference", "difference_consistency",
    "finite_difference_convexity", "poly_nonneg_certificate",
    "second_derivative_value", "sweep",
    "DigitsNotCertified", "DomainError", "InconsistentTrend", "RangeError",
    "WallisError",
    "DEFAULT_POLICY", "ExactRational", "Ordering", "PrecisionPolicy",
    "RealInterval", "compare", "decide_order", "e_enclosure", "e_over_pi",
    "elementary", "enclose_rational", "exp", "intervals_overlap", "ln",
    "pi_enclosure", "pow_rational", "rational", "sqrt", "wallis_exact",
    "wallis_range",
    "ConvergenceReport", "LogRatioCoefficients", "RankedCandidate",
    "best_parameter_check", "default_correction", "estimate_rate",
    "log_ratio_coeffs", "solve_triangular", "verify_log_ratio",
    "__version__",
]
