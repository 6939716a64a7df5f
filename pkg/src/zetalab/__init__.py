"""zetalab: a desk-scale numerical laboratory for critical-line statistics.

Evaluators for theta, zeta, Hardy's Z, S and S1; the Gram sequence;
interval moments with an empirical Selberg constant; reverse ladder
iterations; Gram-indexed pair and fourth-power sums with their
asymptotic main terms; the three cross-bred limit functionals; and
exact Fermat-rational arithmetic with a two-channel consistency check.
"""

__version__ = "0.1.0"

from .argz import ArgTrace, S1Evaluator, ZeroCache, s1_of_t, s_of_t, shared_s1_evaluator
from .config import (
    AmbiguousBranchError,
    CacheMissError,
    DEFAULT_CONFIG,
    DomainError,
    PoleError,
    PrecisionConfig,
    PrecisionError,
    RootError,
    TrackingError,
    ZetaLabError,
)
from .fermat import FermatWitness, fermat_equivalence_check, fermat_rational, fermat_search
from .functionals import (
    ChainReport,
    FunctionalApproximant,
    chain_compare,
    functional_approximant,
    quotient_s1,
    quotient_zeta,
    substitution_constant,
)
from .gram import GramPoint, GramRange, gram_count_estimate, gram_point, gram_points, gram_range
from .ladders import LadderChain, PartitionReport, ladder_chain, partition_report, reverse_iterate
from .moments import (
    CbarEstimate,
    ConstantsCache,
    MomentEstimate,
    estimate_cbar,
    s1_moment,
    second_moment_critical,
    second_moment_sigma,
)
from .sums import SumResult, TrendReport, fourth_power_sum, titchmarsh_sum, verify_asymptotic_trend
from .zeta import EULER_GAMMA, RS_CROSSOVER, hardy_z, hardy_z_many, theta, theta_deriv, zeta

__all__ = [
    "ArgTrace",
    "AmbiguousBranchError",
    "CacheMissError",
    "CbarEstimate",
    "ChainReport",
    "ConstantsCache",
    "DEFAULT_CONFIG",
    "DomainError",
    "EULER_GAMMA",
    "FermatWitness",
    "FunctionalApproximant",
    "GramPoint",
    "GramRange",
    "LadderChain",
    "MomentEstimate",
    "PartitionReport",
    "PoleError",
    "PrecisionConfig",
    "PrecisionError",
    "RootError",
    "RS_CROSSOVER",
    "S1Evaluator",
    "SumResult",
    "TrackingError",
    "TrendReport",
    "ZeroCache",
    "ZetaLabError",
    "chain_compare",
    "estimate_cbar",
    "fermat_equivalence_check",
    "fermat_rational",
    "fermat_search",
    "fourth_power_sum",
    "functional_approximant",
    "gram_count_estimate",
    "gram_point",
    "gram_points",
    "gram_range",
    "hardy_z",
    "hardy_z_many",
    "ladder_chain",
    "partition_report",
    "quotient_s1",
    "quotient_zeta",
    "reverse_iterate",
    "s1_moment",
    "s1_of_t",
    "s_of_t",
    "second_moment_critical",
    "second_moment_sigma",
    "shared_s1_evaluator",
    "substitution_constant",
    "theta",
    "theta_deriv",
    "titchmarsh_sum",
    "verify_asymptotic_trend",
    "zeta",
]
