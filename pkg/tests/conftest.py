"""Shared brute-force oracles: slow, obviously-correct reference code."""

from __future__ import annotations

import itertools


def brute_is_mis(vertices, edges, candidate) -> bool:
    s = set(candidate)
    if not s <= set(vertices):
        return False
    adj = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    if any(u in s and v in s for u, v in edges):
        return False
    return all(v in s or adj[v] & s for v in vertices)


def brute_all_mis(vertices, edges):
    """Every maximal independent set, found by scanning all subsets."""
    vertices = sorted(vertices)
    assert len(vertices) <= 14, "subset scan is exponential"
    found = []
    for size in range(len(vertices) + 1):
        for combo in itertools.combinations(vertices, size):
            if brute_is_mis(vertices, edges, combo):
                found.append(frozenset(combo))
    return sorted(found, key=sorted)


def brute_avg_free(members, t_max: int) -> bool:
    """Check the average condition by enumerating every multiset directly."""
    members = [tuple(m) for m in members]
    member_set = set(members)
    d = len(members[0]) if members else 0
    for t in range(2, t_max + 1):
        for combo in itertools.combinations_with_replacement(members, t):
            if len(set(combo)) == 1:
                continue
            sums = [sum(vec[c] for vec in combo) for c in range(d)]
            if all(s % t == 0 for s in sums):
                if tuple(s // t for s in sums) in member_set:
                    return False
    return True
