"""Multi-pass edge-stream MIS algorithms and their protocol view.

Streams replay a fixed edge order each pass; the driver counts passes
and tracks a peak word count.  Accounting convention: state retained
between stream elements counts one word per vertex id, priority value
or status entry and two words per buffered edge; O(1) counters are
exempt; the output set is written to an output tape and not counted.

A run over a stream whose edges are grouped by owner simulates a
blackboard protocol: at the end of each owner's section the live memory
words are written out as one message.  Messages in a round are padded
to the round's longest, so the total transcript size is at most
passes * k * peak_words * word_bits for k owners, which is the
communication bound this package exists to measure.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass, field
from typing import IO, Callable, Iterable

import numpy as np

from .errors import InvalidInputError, MisforgeError, ScheduleError
from .hardness import Instance
from .oracle import is_mis

FlatEdge = tuple[int, int]

UNDECIDED, IN_MIS, OUT = 0, 1, 2


@dataclass(frozen=True)
class FlatGraph:
    n: int
    edges: frozenset[FlatEdge]

    @property
    def vertices(self) -> list[int]:
        return list(range(self.n))


def flat_edge(u: int, v: int) -> FlatEdge:
    if u == v:
        raise InvalidInputError(f"self loop at {u}")
    return (u, v) if u < v else (v, u)


def gnp_graph(n: int, p: float, seed: int) -> FlatGraph:
    """Erdos-Renyi graph with a counter-based generator."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    us, vs = np.triu_indices(n, k=1)
    mask = rng.random(len(us)) < p
    edges = frozenset(
        (int(u), int(v)) for u, v in zip(us[mask], vs[mask])
    )
    return FlatGraph(n=n, edges=edges)


class EdgeStream:
    """A fixed edge order, optionally split into per-owner sections."""

    def __init__(self, sections: list[list[FlatEdge]]):
        self.sections_list = [list(s) for s in sections]
        self.passes = 0

    @property
    def edges(self) -> list[FlatEdge]:
        return [e for s in self.sections_list for e in s]

    @classmethod
    def from_edges(cls, edges: Iterable[FlatEdge], order: str = "file",
                   seed: int | None = None) -> "EdgeStream":
        edges = list(edges)
        if order == "file":
            pass
        elif order == "random":
            if seed is None:
                raise InvalidInputError("random order needs a seed")
            rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
            edges = [edges[int(i)] for i in rng.permutation(len(edges))]
        else:
            raise InvalidInputError(f"unknown order {order!r} for a plain edge list")
        return cls([edges])

    @classmethod
    def from_instance(cls, inst: Instance, order: str = "player",
                      seed: int | None = None) -> "EdgeStream":
        flat = inst.graph.flat_id
        per_player = [
            sorted(flat_edge(flat(u), flat(v)) for u, v in part) for part in inst.players
        ]
        if order == "player":
            return cls(per_player)
        return cls.from_edges([e for s in per_player for e in s], order=order, seed=seed)

    def iter_sections(self):
        self.passes += 1
        for section in self.sections_list:
            yield section


@dataclass
class StreamReport:
    algorithm: str
    n: int
    passes: int
    peak_words: int
    output: frozenset[int]
    seed: int
    extras: dict = field(default_factory=dict)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


class LubyMIS:
    """Rounds of random priorities: local minima join, neighbors leave.

    Each round costs two passes: one to find undecided vertices that
    beat every undecided neighbor (ties by vertex id), one to retire
    the neighbors of the new members.
    """

    name = "luby"

    def __init__(self, n: int, seed: int):
        self.n = n
        self.seed = seed
        self.rng = _rng(seed)
        self.status = [UNDECIDED] * n
        self.phase = "select"
        self.prio: dict[int, int] = {}
        self.blocked: set[int] = set()
        self.newly: set[int] = set()
        self.rounds = 0
        self._done = n == 0

    def done(self) -> bool:
        return self._done

    def begin_pass(self) -> None:
        if self.phase == "select":
            self.rounds += 1
            undecided = [v for v in range(self.n) if self.status[v] == UNDECIDED]
            draws = self.rng.integers(0, 1 << 62, size=len(undecided))
            self.prio = {v: int(x) for v, x in zip(undecided, draws)}
            self.blocked = set()

    def step(self, e: FlatEdge) -> None:
        u, v = e
        if self.phase == "select":
            if self.status[u] == UNDECIDED and self.status[v] == UNDECIDED:
                loser = v if (self.prio[u], u) < (self.prio[v], v) else u
                self.blocked.add(loser)
        else:
            if u in self.newly and self.status[v] == UNDECIDED:
                self.status[v] = OUT
            if v in self.newly and self.status[u] == UNDECIDED:
                self.status[u] = OUT

    def end_pass(self) -> None:
        if self.phase == "select":
            self.newly = {
                v for v in self.prio if v not in self.blocked
            }
            for v in self.newly:
                self.status[v] = IN_MIS
            self.prio = {}
            self.blocked = set()
            self.phase = "remove"
        else:
            self.newly = set()
            self.phase = "select"
            self._done = all(s != UNDECIDED for s in self.status)

    @property
    def current_words(self) -> int:
        return self.n + len(self.prio) + len(self.blocked) + len(self.newly)

    def state_words(self) -> list[int]:
        words = list(self.status)
        words += [self.prio[v] for v in sorted(self.prio)]
        words += sorted(self.blocked)
        words += sorted(self.newly)
        return words

    def result(self) -> frozenset[int]:
        return frozenset(v for v in range(self.n) if self.status[v] == IN_MIS)

    def extras(self) -> dict:
        return {"rounds": self.rounds}


def parse_schedule(schedule: list, n: int) -> list:
    """Validate a phase schedule: non-increasing sizes, final phase covers all."""
    if not schedule:
        raise ScheduleError("schedule must have at least one phase")
    sizes = []
    for pos, entry in enumerate(schedule):
        last = pos == len(schedule) - 1
        if entry == "all":
            if not last:
                raise ScheduleError("'all' is only allowed as the final phase")
            sizes.append(None)
            continue
        if not isinstance(entry, int) or entry < 1:
            raise ScheduleError(f"phase sizes must be positive integers, got {entry!r}")
        if sizes and sizes[-1] is not None and entry > sizes[-1]:
            raise ScheduleError("phase sizes must not increase")
        if entry > n:
            raise ScheduleError(f"phase size {entry} exceeds vertex count {n}")
        sizes.append(entry)
    return sizes


class ResidualSparsityMIS:
    """Phased sampling: solve a shrinking random sample, retire its neighbors.

    Each phase stores only edges inside the current sample plus edges
    from the sample to already chosen vertices, runs a random-order
    greedy respecting prior choices, then spends one more pass retiring
    neighbors.  The final phase samples every still-alive vertex, so no
    retirement pass is needed after it.
    """

    name = "residual"

    def __init__(self, n: int, schedule: list, seed: int):
        self.n = n
        self.seed = seed
        self.schedule = parse_schedule(schedule, n)
        self.rng = _rng(seed)
        self.status = [UNDECIDED] * n
        self.phase_idx = 0
        self.mode = "store"
        self.sampled: set[int] = set()
        self.stored: list[FlatEdge] = []
        self.newly: set[int] = set()
        self.phase_peaks: list[int] = []
        self.alive_after: list[frozenset[int]] = []
        self._phase_peak = 0
        self._done = n == 0

    def done(self) -> bool:
        return self._done

    def _final_phase(self) -> bool:
        return self.phase_idx == len(self.schedule) - 1

    def _note_words(self) -> None:
        if self.current_words > self._phase_peak:
            self._phase_peak = self.current_words

    def begin_pass(self) -> None:
        if self.mode != "store":
            return
        alive = [v for v in range(self.n) if self.status[v] == UNDECIDED]
        size = self.schedule[self.phase_idx]
        if self._final_phase() or size is None or size >= len(alive):
            take = len(alive)
        else:
            take = size
        order = self.rng.permutation(len(alive))
        self.sampled = {alive[int(i)] for i in order[:take]}
        self.stored = []
        self._phase_peak = 0
        self._note_words()

    def step(self, e: FlatEdge) -> None:
        u, v = e
        if self.mode == "store":
            u_in, v_in = u in self.sampled, v in self.sampled
            if (u_in and v_in) or (u_in and self.status[v] == IN_MIS) or (
                v_in and self.status[u] == IN_MIS
            ):
                self.stored.append(e)
                self._note_words()
        else:
            if u in self.newly and self.status[v] == UNDECIDED:
                self.status[v] = OUT
            if v in self.newly and self.status[u] == UNDECIDED:
                self.status[u] = OUT

    def end_pass(self) -> None:
        if self.mode == "store":
            self._note_words()
            adj: dict[int, set[int]] = {v: set() for v in self.sampled}
            blocked: set[int] = set()
            for u, v in self.stored:
                if u in adj and v in adj:
                    adj[u].add(v)
                    adj[v].add(u)
                else:
                    blocked.add(u if u in adj else v)
            members = sorted(self.sampled)
            order = self.rng.permutation(len(members))
            self.newly = set()
            for idx in order:
                v = members[int(idx)]
                if v in blocked or adj[v] & self.newly:
                    continue
                self.newly.add(v)
            for v in self.sampled:
                self.status[v] = IN_MIS if v in self.newly else OUT
            self.stored = []
            self.sampled = set()
            if self._final_phase() or not any(s == UNDECIDED for s in self.status):
                self._finish_phase()
            else:
                self.mode = "remove"
        else:
            self.newly = set()
            self._finish_phase()
            self.mode = "store"

    def _finish_phase(self) -> None:
        self.phase_peaks.append(self._phase_peak)
        self.alive_after.append(
            frozenset(v for v in range(self.n) if self.status[v] == UNDECIDED)
        )
        self.newly = set()
        self.phase_idx += 1
        self._done = self.phase_idx >= len(self.schedule) or not self.alive_after[-1]

    @property
    def current_words(self) -> int:
        return self.n + len(self.sampled) + 2 * len(self.stored) + len(self.newly)

    def state_words(self) -> list[int]:
        words = list(self.status)
        words += sorted(self.sampled)
        for u, v in self.stored:
            words += [u, v]
        words += sorted(self.newly)
        return words

    def result(self) -> frozenset[int]:
        return frozenset(v for v in range(self.n) if self.status[v] == IN_MIS)

    def extras(self) -> dict:
        return {
            "phases": self.phase_idx,
            "phase_peaks": tuple(self.phase_peaks),
            "alive_after_phase": tuple(self.alive_after),
        }


class BufferedGreedyMIS:
    """Store the whole stream in one pass, then greedy in random order."""

    name = "greedy"

    def __init__(self, n: int, seed: int):
        self.n = n
        self.seed = seed
        self.rng = _rng(seed)
        self.buffer: list[FlatEdge] = []
        self.chosen: frozenset[int] = frozenset()
        self._done = False

    def done(self) -> bool:
        return self._done

    def begin_pass(self) -> None:
        pass

    def step(self, e: FlatEdge) -> None:
        self.buffer.append(e)

    def end_pass(self) -> None:
        adj: dict[int, set[int]] = {v: set() for v in range(self.n)}
        for u, v in self.buffer:
            adj[u].add(v)
            adj[v].add(u)
        chosen: set[int] = set()
        for idx in self.rng.permutation(self.n):
            v = int(idx)
            if not adj[v] & chosen:
                chosen.add(v)
        self.chosen = frozenset(chosen)
        self._done = True

    @property
    def current_words(self) -> int:
        return 2 * len(self.buffer)

    def state_words(self) -> list[int]:
        return [x for e in self.buffer for x in e]

    def result(self) -> frozenset[int]:
        return self.chosen

    def extras(self) -> dict:
        return {}


def make_algorithm(desc: str, n: int, seed: int):
    """Build a runner from a descriptor: luby | greedy | residual:b=8 | residual:s=a,b,all."""
    if desc == "luby":
        return LubyMIS(n, seed)
    if desc == "greedy":
        return BufferedGreedyMIS(n, seed)
    if desc.startswith("residual:"):
        arg = desc.split(":", 1)[1]
        if arg.startswith("b="):
            b = int(arg[2:])
            if b < 1:
                raise ScheduleError(f"b must be positive, got {b}")
            return ResidualSparsityMIS(n, [-(-n // b), "all"], seed)
        if arg.startswith("s="):
            entries = [
                x if x == "all" else int(x) for x in arg[2:].split(",") if x
            ]
            return ResidualSparsityMIS(n, entries, seed)
        raise InvalidInputError(f"bad residual descriptor {desc!r}")
    raise InvalidInputError(f"unknown algorithm {desc!r}")


BoundaryHook = Callable[[int, int, list[int]], None]


def drive(alg, stream: EdgeStream, hook: BoundaryHook | None = None) -> StreamReport:
    start = stream.passes
    peak = 0
    while not alg.done():
        alg.begin_pass()
        peak = max(peak, alg.current_words)
        for owner, section in enumerate(stream.iter_sections()):
            for e in section:
                alg.step(e)
                peak = max(peak, alg.current_words)
            if hook is not None:
                words = alg.state_words()
                if len(words) != alg.current_words:
                    raise MisforgeError(
                        f"{alg.name}: snapshot has {len(words)} words, "
                        f"accounting says {alg.current_words}"
                    )
                hook(stream.passes - start, owner, words)
        alg.end_pass()
        peak = max(peak, alg.current_words)
    return StreamReport(
        algorithm=alg.name,
        n=alg.n,
        passes=stream.passes - start,
        peak_words=peak,
        output=alg.result(),
        seed=alg.seed,
        extras=alg.extras(),
    )


def run_luby(stream: EdgeStream, n: int, seed: int) -> StreamReport:
    return drive(LubyMIS(n, seed), stream)


def run_residual_sparsity(stream: EdgeStream, n: int, schedule: list, seed: int) -> StreamReport:
    return drive(ResidualSparsityMIS(n, schedule, seed), stream)


def run_greedy_buffered(stream: EdgeStream, n: int, seed: int) -> StreamReport:
    return drive(BufferedGreedyMIS(n, seed), stream)


# -- protocol simulation ------------------------------------------------------


@dataclass(frozen=True)
class Transcript:
    word_bits: int
    rounds: tuple[tuple[bytes, ...], ...]    # per pass, one message per owner, padded
    answer: bytes

    @property
    def cc_bits(self) -> int:
        return sum(len(m) * 8 for rnd in self.rounds for m in rnd)

    @property
    def max_message_bits(self) -> int:
        return max((len(m) * 8 for rnd in self.rounds for m in rnd), default=0)


def _pack_words(words: list[int]) -> bytes:
    return b"".join(struct.pack(">Q", w & (1 << 64) - 1) for w in words)


@dataclass(frozen=True)
class SimulationResult:
    transcript: Transcript
    report: StreamReport
    k: int


def simulate_protocol_from_stream(
    desc: str, inst: Instance, seed: int, word_bits: int = 64
) -> SimulationResult:
    """Run a streaming algorithm as a k-owner blackboard protocol.

    The instance's player edge sets, in order, form the stream; memory
    snapshots at section boundaries become the messages.  The answer is
    checked against a plain run over the same stream order.
    """
    n = inst.graph.n_vertices
    raw: dict[int, list[bytes]] = {}

    def hook(pass_idx: int, owner: int, words: list[int]) -> None:
        raw.setdefault(pass_idx, []).append(_pack_words(words))

    stream = EdgeStream.from_instance(inst, order="player")
    report = drive(make_algorithm(desc, n, seed), stream, hook)

    direct = drive(make_algorithm(desc, n, seed), EdgeStream.from_instance(inst, order="player"))
    if direct.output != report.output:
        raise MisforgeError("simulated run disagrees with the direct run")

    rounds = []
    for pass_idx in sorted(raw):
        msgs = raw[pass_idx]
        width = max(len(m) for m in msgs)
        rounds.append(tuple(m.ljust(width, b"\0") for m in msgs))
    answer = _pack_words(sorted(report.output))
    transcript = Transcript(word_bits=word_bits, rounds=tuple(rounds), answer=answer)
    return SimulationResult(transcript=transcript, report=report, k=len(inst.players))


# -- benchmark ----------------------------------------------------------------

BENCH_FIELDS = ("n", "r", "algorithm", "passes", "peak_words", "cc_bits", "mis_valid", "seed")


def _bench_graph(entry: dict, budget=None):
    from .hardness import ToyParams, sample_instance

    kind = entry.get("kind")
    if kind == "gnp":
        g = gnp_graph(entry["n"], entry["p"], entry.get("graph_seed", 0))
        return g, None
    if kind == "hard":
        toy = ToyParams(n_0=entry["n0"], levels=tuple(tuple(x) for x in entry["toy"]))
        inst = sample_instance(toy.r, toy, entry.get("graph_seed", 0), budget)
        return None, inst
    raise InvalidInputError(f"unknown instance kind {kind!r}")


def tradeoff_bench(spec: dict, out: IO[str], budget=None) -> list[dict]:
    """Cartesian product of instances x algorithms x seeds, one CSV row each."""
    instances = spec.get("instances", [])
    algorithms = spec.get("algorithms", [])
    seeds = spec.get("seeds", [])
    writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    rows = []
    for entry in instances:
        gnp, inst = _bench_graph(entry, budget)
        for desc in algorithms:
            for seed in seeds:
                if inst is not None:
                    n = inst.graph.n_vertices
                    sim = simulate_protocol_from_stream(desc, inst, seed)
                    report = sim.report
                    cc_bits = sim.transcript.cc_bits
                    graph_view = (list(range(n)), inst.graph.flat_edges())
                    r_field = inst.r
                else:
                    n = gnp.n
                    stream = EdgeStream.from_edges(sorted(gnp.edges))
                    report = drive(make_algorithm(desc, n, seed), stream)
                    cc_bits = ""
                    graph_view = (gnp.vertices, sorted(gnp.edges))
                    r_field = ""
                row = {
                    "n": n,
                    "r": r_field,
                    "algorithm": desc,
                    "passes": report.passes,
                    "peak_words": report.peak_words,
                    "cc_bits": cc_bits,
                    "mis_valid": is_mis(graph_view, report.output),
                    "seed": seed,
                }
                writer.writerow(row)
                rows.append(row)
    return rows
