"""Power sums on the unit circle: lower bounds, kernel identities, extremal
constructions, and empirical inf-max estimation.

The package sandwiches the unknown quantity inf max_{nu=1..m} |S(nu)| between
closed-form lower bounds, the value of an explicit character construction,
and an empirical upper estimate from smoothed minimax search.
"""
from .backend import BACKEND, available_backends
from .bounds import (
    BoundResult,
    Formula,
    best_lower_bound,
    ceil_envelope,
    classical_bounds,
    corollary1,
    corollary2,
    corollary3,
    phi,
    pure_moments,
    theorem3_bounds,
    theorem4,
)
from .constructions import (
    CertificateError,
    ConstructionCertificate,
    NotPrimeError,
    certify,
    is_prime,
    montgomery_system,
    primitive_root,
)
from .core import (
    EvaluationRange,
    MalformedInputError,
    MomentSummary,
    RealExponentialSum,
    UnimodularSystem,
    WeightedSystem,
    abs_sq_over_range,
    e,
    eval_pure,
    eval_weighted,
    frac_mul,
    max_abs_over_range,
    moments,
    pair_spectrum,
    reduce_turns,
    split_signs,
)
from .fejer import (
    AlphaBeta,
    FejerWeights,
    alpha_beta,
    fejer_closed_form,
    fejer_sum_form,
    lemma1_check,
    lemma2_check,
    partial_sum_check,
    theorem1_bound,
    theorem2_bound,
)
from .optimizer import (
    OptimizerConfig,
    OptimizerReport,
    finite_difference_gradient,
    hard_max,
    minimize,
    objective,
    seeded_systems,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AlphaBeta",
    "BoundResult",
    "CertificateError",
    "ConstructionCertificate",
    "EvaluationRange",
    "FejerWeights",
    "Formula",
    "MalformedInputError",
    "MomentSummary",
    "NotPrimeError",
    "OptimizerConfig",
    "OptimizerReport",
    "RealExponentialSum",
    "UnimodularSystem",
    "WeightedSystem",
    "abs_sq_over_range",
    "alpha_beta",
    "available_backends",
    "best_lower_bound",
    "ceil_envelope",
    "certify",
    "classical_bounds",
    "corollary1",
    "corollary2",
    "corollary3",
    "e",
    "eval_pure",
    "eval_weighted",
    "fejer_closed_form",
    "fejer_sum_form",
    "finite_difference_gradient",
    "frac_mul",
    "hard_max",
    "is_prime",
    "lemma1_check",
    "lemma2_check",
    "max_abs_over_range",
    "minimize",
    "moments",
    "montgomery_system",
    "objective",
    "pair_spectrum",
    "partial_sum_check",
    "phi",
    "primitive_root",
    "pure_moments",
    "reduce_turns",
    "seeded_systems",
    "split_signs",
    "theorem1_bound",
    "theorem2_bound",
    "theorem3_bounds",
    "theorem4",
]
