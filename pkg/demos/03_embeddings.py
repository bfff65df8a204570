"""Embedding a graph family into the paths of a DUP host.

Given a family of q*p small layered graphs, each of width w, member (i, j)
is routed along path j of collection i: inner vertex (layer, x) lands in
the block of w host slots owned by that path's layer-m vertex.  Because
the host's paths are unique, the image of each member stays induced -- the
host contributes no shortcut edges between blocks of the same collection.
"""

import itertools

from misforge import (
    GraphFamily,
    build_dup,
    embed,
    induced_on_upc,
    verify_all_inducedness,
)
from misforge.dupgraph import LayeredGraph, make_edge


def matching_family(dup, w: int) -> GraphFamily:
    """Every member is the same perfect matching between consecutive layers."""
    P = dup.params
    layers = P.k + 1
    edges = frozenset(
        make_edge((m, x), (m + 1, x)) for m in range(1, layers) for x in range(w)
    )
    g = LayeredGraph(layers, w, edges)
    members = tuple(tuple(g for _ in range(P.p)) for _ in range(P.q))
    return GraphFamily(q=P.q, p=P.p, num_layers=layers, layer_size=w, members=members)


def varied_family(dup, w: int, density: float = 0.5) -> GraphFamily:
    """Members differ: edge (m, a)-(m+1, b) kept when a hash of (i,j,m,a,b) says so."""
    P = dup.params
    layers = P.k + 1
    rows = []
    for i in range(1, P.q + 1):
        row = []
        for j in range(1, P.p + 1):
            edges = set()
            for m, a, b in itertools.product(range(1, layers), range(w), range(w)):
                if (hash((i, j, m, a, b)) % 1000) / 1000 < density:
                    edges.add(make_edge((m, a), (m + 1, b)))
            row.append(LayeredGraph(layers, w, frozenset(edges)))
        rows.append(tuple(row))
    return GraphFamily(q=P.q, p=P.p, num_layers=layers, layer_size=w,
                       members=tuple(rows))


if __name__ == "__main__":
    dup = build_dup(ell=2, d=2, k=2)
    w = 3

    fam = matching_family(dup, w)
    emb = embed(fam, dup)
    per_member = len(fam.member(1, 1).edges)
    print(f"host: {dup.graph.num_layers} layers x {dup.graph.layer_size} slots, "
          f"q={dup.params.q}, p={dup.params.p}")
    print(f"matching family: {per_member} edges per member, "
          f"{len(emb.graph.edges)} embedded "
          f"(= {dup.params.q} * {dup.params.p} * {per_member}: "
          f"{len(emb.graph.edges) == dup.params.q * dup.params.p * per_member})")

    # What one collection sees: the union of its members on relabeled blocks.
    sub = induced_on_upc(emb, dup, 1)
    print(f"collection 1 induces {len(sub.edges)} edges on "
          f"{sub.num_layers} layers x {sub.layer_size} slots")

    fam2 = varied_family(dup, w)
    emb2 = embed(fam2, dup)
    ok = verify_all_inducedness(emb2, dup, fam2)
    sizes = sorted({len(fam2.member(i, j).edges)
                    for i in range(1, 3) for j in range(1, 3)})
    print(f"varied family (member sizes include {sizes}): "
          f"all {dup.params.q} collections induced = {ok}")
    assert ok
