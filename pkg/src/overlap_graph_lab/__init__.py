"""Random graphs built from overlapping random layers: sampling, exact subgraph
counts, moment-based predictions and Monte Carlo checks."""

from .covers import check_clique_splits, check_cover_excess, check_disjoint_partitions, enumerate_partitions
from .counting import CountResult, count_cliques, count_cycles, count_pattern, count_pattern_bruteforce
from .generator import ModelParams, child_seed, generate, generate_layers
from .graph import Graph, SubgraphPattern, automorphism_count, falling_factorial, incident_node_count
from .layers import (
    BinomialSize,
    FiniteTable,
    LayerDistribution,
    PointMass,
    cross_moment,
    parse_distribution,
    sample_layer,
    truncated_cross_moment,
)
from .theory import (
    closed_form_bounds,
    exact_L,
    exact_U,
    expected_cliques_leading,
    expected_count_bracket,
    expected_cycles_leading,
    inclusion_bounds,
    matched_er_probability,
)
from .experiment import ExperimentConfig, run_experiment, run_regime_demo, summarize_convergence

__version__ = "0.1.0"
