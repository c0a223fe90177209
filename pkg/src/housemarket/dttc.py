"""Top trading cycles as a synchronous protocol, one node per agent.

Round 1 delivers every node's ``own(house)`` broadcast, so each node learns
who holds every house. Each stage then runs in three parts:

1. Every unassigned node points at the holder of its best house not yet
   removed and runs the cycle finder on that functional graph.
2. A cycle node takes the house it points at, broadcasts ``rm`` for the
   house it gave away, and joins a convergecast of ``ok(count)`` messages
   up its cycle tree. The root reports ``done(count)`` to node 0, and every
   node outside the cycles reports ``done(1)`` directly.
3. Node 0 coordinates. Once the reports cover every node that was
   unassigned when the stage began, it broadcasts ``next`` and the stage
   after that starts one round later, everywhere at once.

Messages carry their stage. Stale ones are dropped and early ones held back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import sim
from .cycles import CYCLE, LAS_VEGAS, ROOT, TAIL, VARIANTS, CycleFinder
from .market import MARKET, Instance, InstanceError, Matching

COORDINATOR = 0
_DONE_TAIL, _DONE_CYCLE = 0, 1


@dataclass(frozen=True)
class AgentOutcome:
    house: int
    stage: int
    root: int
    next: int  # holder of the house taken, in the trading stage
    tops: Tuple[Tuple[int, int], ...]  # (stage, house pointed at) for every stage joined


class _AgentNode(sim.Process):
    def __init__(self, node, net, prefs, house, variant):
        super().__init__(node, net)
        self.prefs = prefs
        self.house0 = house
        self.variant = variant
        self.holder: Dict[int, int] = {house: node}
        self.removed = set()
        self.stage = -1
        self.finder: Optional[CycleFinder] = None
        self.top = -1
        self.tops: List[Tuple[int, int]] = []
        self.assigned_stage = -1
        self.held: List[sim.Envelope] = []
        self.pending_ok = 0
        self.ok_sum = 0
        self.now = 0
        # coordinator bookkeeping
        self.unassigned = self.n
        self.coord_stage = 0
        self.reported = 0
        self.traded = 0
        self.start_at = 1
        self.start_stage = 0

    def start(self):
        self.broadcast("own", (self.house0,), 0)

    def on_round(self, rnd, inbox):
        self.now = rnd
        msgs = self.held + inbox if self.held else inbox
        self.held = []
        mine = []
        for env in msgs:
            tag = env.tag
            if tag == "own":
                self.holder[env.words[0]] = env.src
            elif tag == "rm":
                self.removed.add(env.words[0])
            elif tag == "done":
                self._on_done(env.stage, env.words[0], env.words[1])
            elif tag == "next":
                self.start_at = rnd
                self.start_stage = env.stage
            elif env.stage > self.stage:
                self.held.append(env)
            elif env.stage == self.stage:
                mine.append(env)
        if self.start_at == rnd and self.assigned_stage < 0:
            self._begin(rnd)
            mine = [e for e in self.held if e.stage == self.stage]
            self.held = [e for e in self.held if e.stage != self.stage]
        if self.finder is None:
            return
        ok = [e for e in mine if e.tag == "ok"]
        self.finder.step(rnd, [e for e in mine if e.tag != "ok"])
        self._consume_events()
        for e in ok:
            self.ok_sum += e.words[0]
            self.pending_ok -= 1
            if self.pending_ok == 0:
                self._subtree_done()

    def _begin(self, rnd: int) -> None:
        self.stage = self.start_stage
        self.top = next(h for h in self.prefs if h not in self.removed)
        self.tops.append((self.stage, self.top))
        self.finder = CycleFinder(self, self.variant, self.holder[self.top], t0=rnd, stage=self.stage)

    def _consume_events(self) -> None:
        f = self.finder
        for ev in f.events:
            if ev == CYCLE:
                self.assigned_stage = self.stage
                self.broadcast("rm", (self.house0,), self.stage)
                self.pending_ok = len(f.children)
                self.ok_sum = 0
                if self.pending_ok == 0:
                    self._subtree_done()
            elif ev == TAIL:
                self._report(1, _DONE_TAIL)
        f.events.clear()

    def _subtree_done(self) -> None:
        count = 1 + self.ok_sum
        self.terminated = True
        if self.finder.mode == ROOT:
            self._report(count, _DONE_CYCLE)
        else:
            self.send(self.finder.cyc_parent, "ok", (count,), self.stage)

    def _report(self, count: int, kind: int) -> None:
        if self.id == COORDINATOR:
            self._on_done(self.stage, count, kind)
        else:
            self.send(COORDINATOR, "done", (count, kind), self.stage)

    def _on_done(self, stage: int, count: int, kind: int) -> None:
        if stage != self.coord_stage:
            raise sim.SimulationError(f"stage {stage} report reached the coordinator in stage {self.coord_stage}")
        self.reported += count
        if kind == _DONE_CYCLE:
            self.traded += count
        if self.reported < self.unassigned:
            return
        self.unassigned -= self.traded
        self.reported = self.traded = 0
        if self.unassigned:
            self.coord_stage += 1
            self.broadcast("next", (), self.coord_stage)
            self.start_at = self.now + 1
            self.start_stage = self.coord_stage

    def output(self):
        f = self.finder
        return AgentOutcome(self.top, self.assigned_stage, f.root, f.succ0, tuple(self.tops))


@dataclass
class DistributedResult:
    matching: Matching
    trace: List[List[Tuple[int, ...]]]
    stats: sim.SimStats
    outcomes: Tuple[AgentOutcome, ...]
    trace_digest: Optional[str] = None


def run_distributed_ttc(
    inst: Instance, variant: str = LAS_VEGAS, seed: int = 0, round_cap=None, trace=None, digest=False
) -> DistributedResult:
    """Distributed top trading cycles; the matching and per-stage cycles equal the sequential ones."""
    if inst.kind != MARKET:
        raise InstanceError("distributed trading needs a market instance")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    endow = inst.endowment
    res = sim.run(
        lambda i, net: _AgentNode(i, net, inst.prefs[i], endow[i], variant),
        inst.n_agents, seed, round_cap, trace, digest,
    )
    outs: List[AgentOutcome] = []
    by_stage: Dict[int, Dict[int, List[int]]] = {}
    for a, o in enumerate(res.outputs):
        outs.append(o)
        by_stage.setdefault(o.stage, {}).setdefault(o.root, []).append(a)
    stage_trace: List[List[Tuple[int, ...]]] = []
    for s in range(len(by_stage)):
        cycles = []
        for members in by_stage[s].values():
            start = min(members)
            cyc = [start]
            v = outs[start].next
            while v != start:
                cyc.append(v)
                v = outs[v].next
            cycles.append(tuple(cyc))
        stage_trace.append(sorted(cycles))
    stats = res.stats
    for s, cycles in enumerate(stage_trace):
        st = stats.stage(s)
        st.cycles_found = len(cycles)
        st.cycle_lengths = [len(c) for c in cycles]
    matching = {a: o.house for a, o in enumerate(outs)}
    return DistributedResult(matching, stage_trace, stats, tuple(outs), res.trace_digest)
