"""Layered-graph gadgets and streaming MIS baselines.

The package builds average-free direction sets, disjoint-path collection
graphs, graph-family embeddings, and recursively embedded two-copy hard
instances, together with predicate oracles and pass/space-accounted
streaming MIS algorithms over them.
"""

from .budgets import Budget, default_budget
from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    FormatError,
    InconsistentMisError,
    InvalidInputError,
    InvalidSequenceError,
    MisforgeError,
    NotAnMisError,
    ScheduleError,
    SizeRelationViolatedError,
    TooSmallError,
)
from .avgfree import AvgFreeSet, build_avg_free_set, verify_avg_free
from .dupgraph import (
    DupGraph,
    LayeredGraph,
    build_dup,
    build_dup_from_size,
    derive_dup_dimensions,
    enumerate_layered_paths,
    pad_dup,
    read_dup,
    verify_dup,
    verify_upc,
    write_dup,
)
from .embedding import (
    EmbeddedGraph,
    GraphFamily,
    embed,
    induced_on_upc,
    read_embedded,
    verify_all_inducedness,
    verify_inducedness,
    write_embedded,
)
from .hardness import (
    Instance,
    ParamTable,
    ToyParams,
    build_instance,
    check_properties,
    compute_parameters,
    plan_levels,
    read_instance,
    sample_base_instance,
    sample_instance,
    sample_tree,
    write_instance,
)
from .oracle import (
    enumerate_all_mis,
    eval_predicate,
    extract_predicate_from_mis,
    greedy_mis,
    is_mis,
)
from .streaming import (
    BufferedGreedyMIS,
    EdgeStream,
    FlatGraph,
    LubyMIS,
    ResidualSparsityMIS,
    gnp_graph,
    make_algorithm,
    parse_schedule,
    run_greedy_buffered,
    run_luby,
    run_residual_sparsity,
    simulate_protocol_from_stream,
    tradeoff_bench,
)

__version__ = "0.1.0"

__all__ = [
    "AvgFreeSet",
    "Budget",
    "BudgetExceededError",
    "BufferedGreedyMIS",
    "DimensionMismatchError",
    "DupGraph",
    "EdgeStream",
    "EmbeddedGraph",
    "FlatGraph",
    "FormatError",
    "GraphFamily",
    "InconsistentMisError",
    "Instance",
    "InvalidInputError",
    "InvalidSequenceError",
    "LayeredGraph",
    "LubyMIS",
    "MisforgeError",
    "NotAnMisError",
    "ParamTable",
    "ResidualSparsityMIS",
    "ScheduleError",
    "SizeRelationViolatedError",
    "TooSmallError",
    "ToyParams",
    "build_avg_free_set",
    "build_dup",
    "build_dup_from_size",
    "build_instance",
    "check_properties",
    "compute_parameters",
    "default_budget",
    "derive_dup_dimensions",
    "embed",
    "enumerate_all_mis",
    "enumerate_layered_paths",
    "eval_predicate",
    "extract_predicate_from_mis",
    "gnp_graph",
    "greedy_mis",
    "induced_on_upc",
    "is_mis",
    "make_algorithm",
    "pad_dup",
    "parse_schedule",
    "plan_levels",
    "read_dup",
    "read_embedded",
    "read_instance",
    "run_greedy_buffered",
    "run_luby",
    "run_residual_sparsity",
    "sample_base_instance",
    "sample_instance",
    "sample_tree",
    "simulate_protocol_from_stream",
    "tradeoff_bench",
    "verify_all_inducedness",
    "verify_avg_free",
    "verify_dup",
    "verify_inducedness",
    "verify_upc",
    "write_dup",
    "write_embedded",
    "write_instance",
]
