"""Typed random geometric graphs: samplers, empirical measures, the
balls-into-bins coupling, and rate-function evaluation."""

from ._trgg import (  # noqa: F401
    AllocationOutcome,
    ConfigError,
    DegreeDistribution,
    InfeasibleError,
    LocalityMeasure,
    PairCollisionSchedule,
    PairCountMatrix,
    PairMeasure,
    TypeAlphabet,
    TypedGraph,
    TypeMeasure,
    __version__,
    bennett_h,
    bennett_tail_bound,
    check_consistency,
    collision_schedule,
    degree_distribution,
    degree_distribution_from_graph,
    degree_rate,
    detached_rate,
    detached_rate_oracle,
    empirical_locality_measure,
    empirical_pair_measure,
    empirical_type_measure,
    l1_count_distance,
    locality_marginals,
    locality_rate,
    make_pair_measure,
    make_type_measure,
    neighbor_pairs,
    poisson_pmf,
    relative_entropy,
    run_allocation_coupling,
    run_experiment,
    sample_conditional_trgg,
    sample_gnm_geometric,
    sample_positions,
    sample_trgg,
    solve_detached_alpha,
    tv_distance,
    unit_ball_volume,
)
