"""Maximal-independent-set checks and the bit predicates they reveal.

Works over any graph object exposing vertices and edges: LayeredGraph,
the lightweight Subgraph view below, a streaming FlatGraph, or a plain
(vertices, edges) pair.

The predicate operations walk a recursive hard instance: a search
sequence K = (k_r, ..., k_1) picks one special sub-instance per level,
ending at a base instance whose edge slots give the bits.  Any maximal
independent set of the full graph determines those bits: at the base,
an edge slot with an edge keeps exactly one endpoint in the set, and a
slot without an edge keeps both.  extract_predicate_from_mis recovers
the bits from a set alone; eval_predicate reads the constructed truth.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import networkx as nx

from .errors import (
    BudgetExceededError,
    InconsistentMisError,
    InvalidInputError,
    InvalidSequenceError,
    NotAnMisError,
)

PredicateBits = str
SearchSequence = tuple[int, ...]


@dataclass(frozen=True)
class Subgraph:
    """Vertex-induced view used for restriction checks."""

    vertices: frozenset
    edges: frozenset


def vertex_edge_view(graph) -> tuple[list, list]:
    """Normalize the supported graph shapes to (vertices, edges)."""
    if isinstance(graph, Subgraph):
        return sorted(graph.vertices), sorted(graph.edges)
    if isinstance(graph, tuple) and len(graph) == 2:
        return sorted(graph[0]), sorted(tuple(e) for e in graph[1])
    if hasattr(graph, "vertices") and hasattr(graph, "edges"):
        verts = graph.vertices() if callable(graph.vertices) else graph.vertices
        return sorted(verts), sorted(graph.edges)
    raise InvalidInputError(f"unsupported graph object: {type(graph).__name__}")


def is_mis(graph, candidate: Iterable) -> bool:
    """True iff candidate is an independent dominating set of graph."""
    vertices, edges = vertex_edge_view(graph)
    vset = set(vertices)
    s = set(candidate)
    if not s <= vset:
        return False
    dominated = set(s)
    for u, v in edges:
        if u in s and v in s:
            return False
        if u in s:
            dominated.add(v)
        if v in s:
            dominated.add(u)
    return dominated == vset


def enumerate_all_mis(graph, max_vertices: int = 24) -> list[frozenset]:
    """Every maximal independent set, as maximal cliques of the complement."""
    vertices, edges = vertex_edge_view(graph)
    if len(vertices) > max_vertices:
        raise BudgetExceededError(
            f"{len(vertices)} vertices exceed the enumeration cap {max_vertices}"
        )
    if not vertices:
        return [frozenset()]
    comp = nx.Graph()
    comp.add_nodes_from(vertices)
    present = {frozenset(e) for e in edges}
    comp.add_edges_from(
        (u, v) for u, v in combinations(vertices, 2) if frozenset((u, v)) not in present
    )
    sets = [frozenset(c) for c in nx.find_cliques(comp)]
    return sorted(sets, key=lambda s: sorted(s))


def greedy_mis(graph, order: Iterable) -> frozenset:
    """First-fit along the given vertex order."""
    vertices, edges = vertex_edge_view(graph)
    order = list(order)
    if sorted(order) != vertices:
        raise InvalidInputError("order must be a permutation of the vertex set")
    adj: dict = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    chosen: set = set()
    for v in order:
        if not adj[v] & chosen:
            chosen.add(v)
    return frozenset(chosen)


def _validate_sequence(inst, seq: SearchSequence) -> None:
    if len(seq) != inst.r:
        raise InvalidSequenceError(
            f"sequence length {len(seq)} does not match recursion depth {inst.r}"
        )
    cur = inst
    for depth, k in enumerate(seq):
        if not 1 <= k <= cur.p_achieved:
            raise InvalidSequenceError(
                f"entry {k} at position {depth} outside 1..{cur.p_achieved}"
            )
        cur = cur.subinstance(cur.t, k)


def eval_predicate(inst, seq: SearchSequence) -> PredicateBits:
    """Read the base bits reached by following the special sub-instances."""
    _validate_sequence(inst, tuple(seq))
    cur = inst
    for k in seq:
        cur = cur.subinstance(cur.t, k)
    return cur.base_bits


def extract_predicate_from_mis(inst, candidate: Iterable, seq: SearchSequence) -> PredicateBits:
    """Recover the same bits from a maximal independent set alone.

    At every level the set restricted to each special subgraph of one of
    the two copies is a maximal independent set of that subgraph; the
    left copy is preferred when both qualify.  A set for which neither
    copy works is evidence of a corrupt instance.
    """
    seq = tuple(seq)
    _validate_sequence(inst, seq)
    s = set(candidate)
    if not is_mis(inst.graph, s):
        raise NotAnMisError("candidate is not a maximal independent set of the instance")
    cur, cur_s = inst, s
    for k in seq:
        descended = False
        for side in ("L", "R"):
            sub = cur.special_subgraph(side, k)
            restriction = cur_s & sub.vertices
            if is_mis(sub, restriction):
                cur_s = cur.pullback_special(side, k, restriction)
                cur = cur.subinstance(cur.t, k)
                descended = True
                break
        if not descended:
            raise InconsistentMisError(
                f"restriction fits neither copy at depth {cur.r} (path entry {k})"
            )
    bits = []
    half = cur.graph.layer_size
    for i in range(half):
        both = (1, i) in cur_s and (2, i) in cur_s
        bits.append("0" if both else "1")
    return "".join(bits)
