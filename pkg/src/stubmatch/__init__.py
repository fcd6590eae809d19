"""Stable stub matchings of one-dimensional point processes.

Point configurations live on an interval or cycle; each point carries a
number of stubs (half-edges). Matching schemes pair stubs into edges, and
the analysis layer measures components, crossings, stability, and tails.
"""

from .analysis import (
    ComponentSummary,
    EdgeStats,
    check_cross_closure,
    classify_beaks,
    components,
    crossing_count,
    crossing_pairs,
    crossings_at,
    desire_profile,
    f_walk,
    is_good,
    point_stats,
    spanning_path,
    stability_audit,
)
from .degrees import (
    DegreeDistribution,
    MarkedConfig,
    assign_degrees,
    assign_directions,
    parse_degree_spec,
)
from .estimators import (
    CoreMatching,
    IteratedStableMatching,
    RandomDirectionMatching,
    StableMultiMatching,
)
from .matching import (
    Matching,
    core_match,
    iterated_stable_match,
    opposite_stub_match,
    random_direction_match,
    seed_group_match,
    stable_multimatch,
)
from .montecarlo import (
    ExperimentReport,
    binomial_tail,
    block_combination_check,
    clopper_pearson,
    renorm_iterate,
    renorm_map,
    renorm_threshold,
    replica_rng,
    run_goodness,
    run_table1,
    tail_suite,
)
from .pointsets import (
    CYCLE,
    INTERVAL,
    PointConfig,
    PointFileError,
    Topology,
    gen_perturbed_lattice,
    load_points,
    sample_poisson_interval,
    sample_uniform_cycle,
    save_points,
)

__version__ = "0.1.0"

__all__ = [
    "CYCLE",
    "INTERVAL",
    "ComponentSummary",
    "CoreMatching",
    "DegreeDistribution",
    "EdgeStats",
    "ExperimentReport",
    "IteratedStableMatching",
    "MarkedConfig",
    "Matching",
    "PointConfig",
    "PointFileError",
    "RandomDirectionMatching",
    "StableMultiMatching",
    "Topology",
    "assign_degrees",
    "assign_directions",
    "binomial_tail",
    "block_combination_check",
    "check_cross_closure",
    "classify_beaks",
    "clopper_pearson",
    "components",
    "core_match",
    "crossing_count",
    "crossing_pairs",
    "crossings_at",
    "desire_profile",
    "f_walk",
    "gen_perturbed_lattice",
    "is_good",
    "iterated_stable_match",
    "load_points",
    "opposite_stub_match",
    "parse_degree_spec",
    "point_stats",
    "random_direction_match",
    "renorm_iterate",
    "renorm_map",
    "renorm_threshold",
    "replica_rng",
    "run_goodness",
    "run_table1",
    "sample_poisson_interval",
    "sample_uniform_cycle",
    "save_points",
    "seed_group_match",
    "spanning_path",
    "stability_audit",
    "stable_multimatch",
    "tail_suite",
]
