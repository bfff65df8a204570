"""Average-free sets: construction, density, and the verifier at work.

An average-free set here is a subset A of the grid {1..ell}^d such that no
member is the exact average of t other members (any t, duplicates allowed)
unless all t of them equal that member.  The construction groups grid points
by squared norm and keeps the largest class, which pins the size above
ell^d / (d * ell^2) by pigeonhole.
"""

import time

from misforge import build_avg_free_set, verify_avg_free
from misforge.avgfree import AvgFreeSet


def density_table(max_cells: int = 3000) -> None:
    print(f"{'ell':>4} {'d':>3} {'grid':>6} {'|A|':>5} {'bound':>6} {'ratio':>6}")
    for d in range(1, 5):
        for ell in (2, 3, 4, 6, 8, 12):
            if ell**d > max_cells:
                continue
            a = build_avg_free_set(ell, d)
            bound = -(-(ell**d) // (d * ell * ell))  # ceil
            print(f"{ell:>4} {d:>3} {ell**d:>6} {a.size:>5} {bound:>6} "
                  f"{a.size / ell**d:>6.3f}")


def reject_bad_set() -> None:
    # {1, 2, 3} in one dimension is not average-free: (1 + 3) / 2 = 2.
    bad = AvgFreeSet(ell=3, d=1, norm_sq=0, members=((1,), (2,), (3,)))
    ok = verify_avg_free(bad, 4)
    print(f"\n{{1, 2, 3}} inside [3]: verifier says average-free = {ok}")
    assert not ok


if __name__ == "__main__":
    density_table()

    t0 = time.monotonic()
    a = build_avg_free_set(8, 3)
    ok = verify_avg_free(a, 5)
    print(f"\n(ell=8, d=3): {a.size} members, shared squared norm {a.norm_sq}, "
          f"verified up to 5-way averages = {ok} in {time.monotonic() - t0:.2f}s")
    print("first members:", ", ".join(map(str, a.members[:5])), "...")

    reject_bad_set()
