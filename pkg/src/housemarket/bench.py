"""Stats records and the protocol benchmark harness."""

from __future__ import annotations

import json
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterator, List, Optional, Sequence

from . import cycles, dttc, sim
from .market import MARKET, generate_instance

ALGORITHMS = ("lv-cycles", "det-cycles", "dttc-lv", "dttc-det")


@dataclass
class StageRecord:
    rounds: int
    messages: int
    cyclesFound: int
    cycleLengths: List[int]


@dataclass
class StatsRecord:
    algorithm: str
    n: int
    seed: int
    rounds: int
    messages: int
    stages: int
    perStage: List[StageRecord]
    wallTimeMs: float
    traceDigest: Optional[str] = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_sim(cls, algorithm: str, n: int, seed: int, stats: sim.SimStats, wall_ms: float, digest=None, **extra):
        per = [StageRecord(s.rounds, s.messages, s.cycles_found, list(s.cycle_lengths)) for s in stats.per_stage]
        return cls(algorithm, n, seed, stats.rounds, stats.messages, len(per), per, round(wall_ms, 3), digest, extra)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "StatsRecord":
        d = json.loads(text)
        d["perStage"] = [StageRecord(**s) for s in d["perStage"]]
        return cls(**d)

    def consistent(self) -> bool:
        """Totals equal the per-stage sums."""
        return (
            self.stages == len(self.perStage)
            and self.rounds == sum(s.rounds for s in self.perStage)
            and self.messages == sum(s.messages for s in self.perStage)
        )

    def comparable(self) -> dict:
        """Everything except the wall time."""
        d = asdict(self)
        d.pop("wallTimeMs")
        return d


def run_trial(algo: str, size: int, seed: int) -> StatsRecord:
    """One benchmark run: single-cycle graphs for the cycle finders, random markets for trading."""
    t = time.perf_counter()
    if algo in ("lv-cycles", "det-cycles"):
        variant = cycles.LAS_VEGAS if algo == "lv-cycles" else cycles.DETERMINISTIC
        report, stats, digest = cycles.run_cycles(cycles.single_cycle_graph(size), variant, seed, digest=True)
        extra = {"treeHeight": report.tree_height}
    elif algo in ("dttc-lv", "dttc-det"):
        inst = generate_instance(MARKET, size, size, size, seed)
        res = dttc.run_distributed_ttc(inst, algo[5:], seed, digest=True)
        stats, digest = res.stats, res.trace_digest
        extra = {"messagesPerNSquared": round(stats.messages / size**2, 4)}
    else:
        raise ValueError(f"unknown benchmark algorithm {algo!r}")
    wall = (time.perf_counter() - t) * 1000
    return StatsRecord.from_sim(algo, size, seed, stats, wall, digest, **extra)


def bench(algos: Sequence[str], sizes: Sequence[int], trials: int, seed: int = 0, jobs: int = 1) -> Iterator[StatsRecord]:
    """Records in (algorithm, size, trial) order; trial ``t`` uses seed ``seed + t``."""
    for a in algos:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown benchmark algorithm {a!r}")
    if trials < 1 or any(s < 1 for s in sizes):
        raise ValueError("sizes must be positive and trials at least 1")
    tasks = [(a, s, seed + t) for a in algos for s in sizes for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            yield from pool.map(run_trial, *zip(*tasks))
    else:
        for task in tasks:
            yield run_trial(*task)


def summarize(records: Sequence[StatsRecord]) -> List[str]:
    groups = {}
    for r in records:
        groups.setdefault((r.algorithm, r.n), []).append(r)
    lines = []
    for (algo, n), rs in groups.items():
        rounds = statistics.median(r.rounds for r in rs)
        msgs = statistics.median(r.messages for r in rs)
        lines.append(f"summary algorithm={algo} n={n} trials={len(rs)} medianRounds={rounds:g} medianMessages={msgs:g}")
    return lines


def time_kernels(n: int = 200, repeats: int = 3, seed: int = 0) -> dict:
    """Best-of wall time (ms) of each kernel under every available implementation."""
    from . import kernels

    rng = random.Random(seed)
    prefs = []
    for a in range(n):
        p = rng.sample(range(n), rng.randint(1, n))
        if a not in p:
            p.append(a)
        prefs.append(p)
    endow = list(range(n))
    cost = [[rng.randrange(n) if rng.random() < 0.3 else kernels.INF_COST for _ in range(n)] for _ in range(n)]
    for i in range(n):
        cost[i][i] = n
    adj = [rng.sample(range(n), rng.randint(1, 6)) for _ in range(n)]
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.05]
    rng.shuffle(edges)
    succ = [rng.randrange(n) for _ in range(n * 50)]
    work = {
        "ttc": lambda k: k.ttc(prefs, endow),
        "hungarian": lambda k: k.hungarian(cost),
        "hopcroft_karp": lambda k: k.hopcroft_karp(n, n, adj),
        "greedy_lfmm": lambda k: k.greedy_lfmm(n, edges),
        "functional_cycles": lambda k: k.functional_cycles(succ),
    }
    out = {}
    for name, impl in kernels.IMPLEMENTATIONS.items():
        out[name] = {}
        for kname, fn in work.items():
            best = float("inf")
            for _ in range(repeats):
                t = time.perf_counter()
                fn(impl)
                best = min(best, time.perf_counter() - t)
            out[name][kname] = round(best * 1000, 3)
    return out
