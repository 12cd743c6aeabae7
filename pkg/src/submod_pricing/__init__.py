"""Stable pricing of submodular bundles for single, independent and collaborating buyers."""

from .baselines import BASELINES, ascending_pricing, greedy_demand, random_pricing, scaled_pricing, sell_all
from .collab import (
    AggregatedValuation,
    aggregate_value,
    brute_force_collab,
    exact_collab_prices,
    solve_collab,
    solve_collab_budgeted,
)
from .instances import (
    EventLogSpec,
    SyntheticSpec,
    gen_3sat_fixture,
    gen_harmonic,
    gen_hidden_set_fixture,
    gen_partition_fixture,
    gen_synthetic,
    gen_x3c_fixture,
    ingest_event_log,
    random_3sat_clauses,
)
from .multi import AttainmentError, Buyer, Instance, UnsupportedConfigurationError, partition_assignment, solve_multi
from .single import (
    brute_force_single,
    discount_to_budget,
    price_for_assignment,
    solve_single,
    solve_single_budgeted,
)
from .solution import PriceVector, PricingSolution
from .valuation import (
    CapacityError,
    CoverageValuation,
    CurvatureProfile,
    ExplicitValuation,
    GroundSet,
    Valuation,
    curvature_profile,
    curvature_upper_bound,
    curvature_upper_profile,
    evaluate,
    exact_curvature,
    marginal,
    profit_potential,
)
from .verify import (
    CheckReport,
    check_curvature_bound,
    check_monotone_submodular,
    check_stable,
    exhaustive_multi_opt,
    exhaustive_multi_search,
    find_stable_assignment,
    welfare_profit_gap,
)

__version__ = "0.1.0"
