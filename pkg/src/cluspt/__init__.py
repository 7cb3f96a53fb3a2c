"""Evolutionary solver for the clustered shortest-path tree problem."""

__version__ = "0.1.0"

from .decoder import (  # noqa: E402
    CostBreakdown,
    Decoder,
    Decoding,
    SolutionTree,
    check_clustered_tree,
    decode,
    evaluate_direct,
    evaluate_fast,
    is_valid,
)
from .ga import GAConfig, RunRecord, crossover, diversity, init_individual, mutate, run  # noqa: E402
from .graph import (  # noqa: E402
    ClusteredInstance,
    ShortestPathTree,
    VertexSetView,
    dijkstra_spt,
    edge_weight,
    induced,
    is_connected,
)
from .instance_io import augment_source, parse_instance, read_instance, write_instance  # noqa: E402
from .metrics import BatchSummary, ComparisonRow, pearson, pi, rpd, summarize  # noqa: E402
from .oracles import OracleResult, enumerate_roots, enumerate_trees  # noqa: E402
