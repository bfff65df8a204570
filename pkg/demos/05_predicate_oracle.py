"""Reading the hidden predicate out of any maximal independent set.

The instances are built so that every MIS of the whole graph, restricted to
the right special blocks, reveals one bit of the hidden base string per
search sequence K = (k_r, ..., k_1).  eval_predicate walks the instance
tree directly; extract_predicate_from_mis only looks at the candidate set.
On toy sizes we can enumerate every MIS and confirm the two agree on every
(MIS, K) pair -- which is exactly why a low-pass streaming algorithm that
outputs an MIS would have to learn the hidden bits.
"""

import itertools

from misforge import (
    ToyParams,
    enumerate_all_mis,
    eval_predicate,
    extract_predicate_from_mis,
    is_mis,
    sample_instance,
)
from misforge.errors import NotAnMisError


def all_sequences(inst):
    choices = []
    cur = inst
    while cur.r >= 1:
        choices.append(range(1, cur.p_achieved + 1))
        cur = cur.subinstance(cur.t, 1)
    return [tuple(seq) for seq in itertools.product(*choices)] or [()]


if __name__ == "__main__":
    params = ToyParams(n_0=4, levels=((1, 1),))
    inst = sample_instance(1, params, seed=3)
    g = inst.graph
    print(f"depth-1 toy on {g.n_vertices} vertices, hidden t={inst.t}, "
          f"base bits of the live copy: "
          f"{inst.subinstance(inst.t, 1).base_bits!r}")

    sets = enumerate_all_mis(g)
    seqs = all_sequences(inst)
    print(f"{len(sets)} maximal independent sets, {len(seqs)} search sequences")

    agree = 0
    for s in sets:
        assert is_mis(g, s)
        for seq in seqs:
            got = extract_predicate_from_mis(inst, s, seq)
            want = eval_predicate(inst, seq)
            assert got == want, (s, seq, got, want)
            agree += 1
    print(f"extraction agrees with direct evaluation on all "
          f"{agree} (MIS, K) pairs")

    # A non-MIS candidate is rejected rather than silently misread.
    some = next(iter(sets))
    broken = set(some)
    broken.pop()
    try:
        extract_predicate_from_mis(inst, broken, seqs[0])
        print("corrupted candidate was accepted (unexpected)")
    except NotAnMisError as exc:
        print(f"corrupted candidate rejected: {exc}")
