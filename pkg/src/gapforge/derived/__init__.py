"""Downstream reductions: unique games, independent set, graph colouring."""

from gapforge.derived.colour import (
    TMatrix,
    alternative_forms,
    arc_arc,
    build_T,
    certify_3colouring,
    labelling_colouring,
    to_3colouring,
    to_colouring_step1,
)
from gapforge.derived.graphs import (
    DiGraph,
    Graph,
    arc_graph,
    chromatic_leq,
    dir_graph,
    find_colouring,
    graph_from_json,
    is_bipartite,
    is_independent,
    is_proper,
    is_value_bruteforce,
    sym,
    vc_value,
)
from gapforge.derived.ug import to_unique_games
from gapforge.derived.vc import (
    DEFAULT_P,
    WeightedGraph,
    cloud_expand,
    cloud_sizes,
    labelling_measure,
    labelling_set,
    to_independent_set,
    weighted_is_value,
)

__all__ = [
    "DEFAULT_P",
    "DiGraph",
    "Graph",
    "TMatrix",
    "WeightedGraph",
    "alternative_forms",
    "arc_arc",
    "arc_graph",
    "build_T",
    "certify_3colouring",
    "chromatic_leq",
    "cloud_expand",
    "cloud_sizes",
    "dir_graph",
    "find_colouring",
    "graph_from_json",
    "is_bipartite",
    "is_independent",
    "is_proper",
    "is_value_bruteforce",
    "labelling_colouring",
    "labelling_measure",
    "labelling_set",
    "sym",
    "to_3colouring",
    "to_colouring_step1",
    "to_independent_set",
    "to_unique_games",
    "vc_value",
    "weighted_is_value",
]
