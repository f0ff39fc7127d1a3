"""Linear triple systems, bow-tie graphs and (k+3, k)-configuration search."""

from .bowtie import BowtieGraph, ComponentStats, build_bowtie, components, dense_census
from .config_search import (
    Configuration,
    SearchBudget,
    SearchResult,
    Status,
    component_guided_search,
    exhaustive_search,
    greedy_extend,
    is_config,
    seed_from_bowtie_edge,
)
from .graph_census import (
    SimpleGraph,
    TriadCensus,
    count_cherries,
    count_triangles,
    goodman_slack,
    triad_census,
    underlying_graph,
)
from .pipeline import AnalysisReport, Thresholds, compute_thresholds, density_sweep, theorem_pipeline
from .triple_system import (
    LinearTripleSystem,
    dilute,
    generate_random_linear,
    generate_steiner,
    linear_density,
    parse,
    serialize,
    validate,
)

__version__ = "0.1.0"
