"""Randomized greedy maximization of non-monotone submodular functions
under k-system constraints, with brute-force ratio verification."""

from .adaptive import (
    AdaptiveSocialInstance,
    FiniteAdaptiveInstance,
    PolicyTrace,
    adapt_random_greedy,
    adaptive_ratio_bound,
    expected_marginal_gain,
    policy_average_value,
)
from .batched import batched_random_greedy, rand_seq, survivor_count
from .generate import InstanceBundle, adaptivity_instance, generate_instance
from .greedy import (
    MultiGreedyConfig,
    accelerated_random_multi_greedy,
    random_multi_greedy,
    ratio_bound,
    repeated_greedy,
    standard_greedy,
    usm_double_greedy,
)
from .objectives import (
    CoverageDiversityObjective,
    FacilityLocationObjective,
    FunctionOracle,
    GraphCutObjective,
    ImageSummaryObjective,
    ModularObjective,
    SocialRevenueObjective,
    ValueOracle,
    cosine_similarity,
    marginal_gain,
    similarity_from_features,
)
from .report import RoundLedger, RunReport
from .rng import make_rng
from .systems import (
    CardinalitySystem,
    ExplicitSystem,
    GroundSet,
    IndependenceSystem,
    MultiLabelBoundSystem,
    PartitionMatroidSystem,
    SocialSeedingSystem,
    rank_upper_bound,
)
from .verify import (
    ExhaustiveResult,
    RatioCheckReport,
    adaptive_submodular_check,
    down_closed_check,
    exhaustive_max,
    exhaustive_optimal_policy,
    measured_k,
    monte_carlo_ratio_check,
    pointwise_submodular_check,
    submodularity_check,
)

__version__ = "0.1.0"
