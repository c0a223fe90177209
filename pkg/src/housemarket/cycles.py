"""Distributed detection of the cycles of a functional graph.

Each node starts *active* and knows only its successor. In every iteration
some active nodes deactivate, and each active node whose successor went
inactive adopts it as a child and jumps past it. No iteration deactivates
a whole cycle, so every cycle shrinks to a single node that eventually
points at itself: the cycle's root. The
root then notifies its subtree, and the nodes it reaches are exactly the
cycle.

Two rules decide who deactivates:

* Las Vegas: every active node flips a coin, and a node showing heads whose
  successor shows tails deactivates.
* Deterministic: active nodes color themselves with at most six colors by
  iterated bit-position reduction along successors, and a node whose color
  is below its successor's deactivates.

Reading a neighbour's state is a two-round pull (query, then reply). All
active nodes run the iterations in lockstep from a common start round, so
a node can tell from the round number alone what to do next.

Nodes outside every cycle must also learn that they are done. A node that
finds its successor finished (a root, or a node that already gave up)
gives up and tells its children ``tail``. An inactive node is a tail node
once every node that adopted it said ``tail``, or at once if nobody adopted
it, and it passes the word on to its own children.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import sim
from .market import ParseError, _int, _lines

LAS_VEGAS = "lv"
DETERMINISTIC = "det"
VARIANTS = (LAS_VEGAS, DETERMINISTIC)

# node modes
ACTIVE, INACTIVE, ROOT, GAVE_UP = "active", "inactive", "root", "gave-up"
# resolution
UNKNOWN, CYCLE, TAIL = 0, 1, 2

# query kinds and reply codes
Q_COIN, Q_COLOR, Q_STATUS = 0, 1, 2
R_VALUE, R_INACTIVE, R_FINISHED = 0, 1, 2

HEADS, TAILS = 1, 0
MAX_HOPS = 5


class ProtocolError(sim.SimulationError):
    pass


@dataclass(frozen=True)
class FunctionalGraph:
    succ: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "succ", tuple(int(s) for s in self.succ))
        n = len(self.succ)
        for v, s in enumerate(self.succ):
            if not 0 <= s < n:
                raise ValueError(f"successor {s} of node {v} out of range")

    @property
    def n(self) -> int:
        return len(self.succ)


def parse_fgraph(text: str) -> FunctionalGraph:
    lines = iter(_lines(text))
    try:
        lineno, head = next(lines)
    except StopIteration:
        raise ParseError(1, "empty functional graph file") from None
    if head[0] != "fgraph" or len(head) != 2:
        raise ParseError(lineno, "header must be 'fgraph <n>'")
    n = _int(head[1], lineno)
    succ: List[Optional[int]] = [None] * n
    for lineno, toks in lines:
        if toks[0] != "succ" or len(toks) != 3:
            raise ParseError(lineno, "expected 'succ <node> <node>'")
        v, s = _int(toks[1], lineno), _int(toks[2], lineno)
        if not (0 <= v < n and 0 <= s < n):
            raise ParseError(lineno, "node id out of range")
        if succ[v] is not None:
            raise ParseError(lineno, f"node {v} has two successors")
        succ[v] = s
    missing = [v for v, s in enumerate(succ) if s is None]
    if missing:
        raise ParseError(lineno if n else 1, f"node {missing[0]} has no successor")
    return FunctionalGraph(tuple(succ))


def serialize_fgraph(g: FunctionalGraph) -> str:
    out = [f"fgraph {g.n}"]
    out.extend(f"succ {v} {s}" for v, s in enumerate(g.succ))
    return "\n".join(out) + "\n"


def random_functional_graph(n: int, rng) -> FunctionalGraph:
    return FunctionalGraph(tuple(rng.randrange(n) for _ in range(n)))


def single_cycle_graph(length: int) -> FunctionalGraph:
    return FunctionalGraph(tuple((v + 1) % length for v in range(length)))


def oracle_cycles(g: FunctionalGraph) -> List[Tuple[int, ...]]:
    """Cycles by walking successors with visit marks; each cycle starts at its smallest node."""
    n = g.n
    state = [0] * n  # 0 unseen, 1 on current walk, 2 finished
    cycles = []
    for start in range(n):
        walk = []
        v = start
        while state[v] == 0:
            state[v] = 1
            walk.append(v)
            v = g.succ[v]
        if state[v] == 1:
            cyc = walk[walk.index(v):]
            i = cyc.index(min(cyc))
            cycles.append(tuple(cyc[i:] + cyc[:i]))
        for w in walk:
            state[w] = 2
    return sorted(cycles)


def reduction_steps(n: int) -> int:
    """Color reduction steps needed to bring colors 0..n-1 down to 0..5."""
    steps, maxc = 0, max(n - 1, 0)
    while maxc > 5:
        maxc = 2 * (maxc.bit_length() - 1) + 1
        steps += 1
    return steps


def reduce_color(mine: int, theirs: int) -> int:
    """One bit-position reduction: index of the lowest differing bit, doubled, plus my bit there."""
    diff = mine ^ theirs
    if not diff:
        raise ProtocolError(f"adjacent nodes share color {mine}")
    i = (diff & -diff).bit_length() - 1
    return 2 * i + ((mine >> i) & 1)


class CycleFinder:
    """Cycle-finding state of one node for one functional graph.

    The host supplies ``id``, ``n``, ``rng`` and ``send(dst, tag, words,
    stage)``, feeds every protocol message to :meth:`step`, and calls
    :meth:`step` every round while :attr:`resolved` is false. Resolutions
    are appended to :attr:`events` for the host to consume.
    """

    TAGS = frozenset({"q", "a", "cyc", "tail"})

    def __init__(self, host, variant: str, succ: int, t0: int, stage: int = 0):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        self.host = host
        self.me = host.id
        self.variant = variant
        self.stage = stage
        self.t0 = t0
        self.succ0 = succ
        self.succ = succ
        self.mode = ACTIVE
        self.status = UNKNOWN
        self.children: List[int] = []
        self.parents: List[int] = []
        self.tail_from = set()
        self.window_open = False
        self.root = -1
        self.cyc_parent = -1
        self.coin = 0
        self.color = 0
        self.awaiting: Optional[int] = None
        # one entry per iteration: [iteration, succ at start, deactivated, coin or final color]
        self.history: List[list] = []
        self.events: List[int] = []
        if variant == DETERMINISTIC:
            self.steps = reduction_steps(host.n)
            self.length = 2 * self.steps + 2 + 2 * MAX_HOPS
        else:
            self.steps = 0
            self.length = 4
        if succ == self.me:
            self._become_root()

    @property
    def resolved(self) -> bool:
        return self.status != UNKNOWN

    def _send(self, dst: int, tag: str, words: Tuple[int, ...] = ()) -> None:
        self.host.send(dst, tag, words, self.stage)

    def _query(self, kind: int) -> None:
        self.awaiting = kind
        self._send(self.succ, "q", (kind,))

    def step(self, rnd: int, msgs: Sequence[sim.Envelope]) -> None:
        o = (rnd - self.t0) % self.length
        queries = []
        for env in msgs:
            tag = env.tag
            if tag == "q":
                queries.append(env)
            elif tag == "a":
                self._on_reply(o, env.words[0], env.words[1])
            elif tag == "cyc":
                self._on_cyc(env.src, env.words[0])
            elif tag == "tail":
                self.tail_from.add(env.src)
                self._check_tail()
        self._scheduled(rnd, o)
        for env in queries:
            self._answer(env.src, env.words[0])

    def _scheduled(self, rnd: int, o: int) -> None:
        if o == 0:
            if self.window_open:
                self.window_open = False
                self._check_tail()
            if self.mode != ACTIVE:
                return
            k = (rnd - self.t0) // self.length
            if self.variant == LAS_VEGAS:
                self.coin = self.host.rng.getrandbits(1)
                self.history.append([k, self.succ, False, self.coin])
                self._query(Q_COIN)
            else:
                self.color = self.me
                self.history.append([k, self.succ, False, None])
                self._query(Q_COLOR)
        elif self.variant == DETERMINISTIC and self.mode == ACTIVE and o % 2 == 0 and o <= 2 * self.steps:
            self._query(Q_COLOR)

    def _on_reply(self, o: int, code: int, val: int) -> None:
        kind, self.awaiting = self.awaiting, None
        if self.mode != ACTIVE or kind is None:
            raise ProtocolError(f"node {self.me} got an unexpected reply")
        if code == R_FINISHED:
            self._give_up()
        elif kind == Q_COIN:
            if self.coin == HEADS and val == TAILS:
                self._deactivate()
            else:
                self._query(Q_STATUS)
        elif kind == Q_COLOR:
            if o == 2 * self.steps + 2:
                self.history[-1][3] = self.color
                if self.color == val:
                    raise ProtocolError(f"node {self.me} and successor {self.succ} share color {val}")
                if self.color < val:
                    self._deactivate()
                else:
                    self._query(Q_STATUS)
            else:
                self.color = reduce_color(self.color, val)
        elif kind == Q_STATUS:
            if code == R_INACTIVE:
                self.children.append(self.succ)
                self.succ = val
                if val == self.me:
                    self._become_root()
                elif o != 0:
                    self._query(Q_STATUS)

    def _answer(self, src: int, kind: int) -> None:
        if self.mode in (ROOT, GAVE_UP):
            self._send(src, "a", (R_FINISHED, 0))
        elif kind == Q_STATUS:
            if self.mode == ACTIVE:
                self._send(src, "a", (R_VALUE, 0))
            else:
                if src not in self.parents:
                    self.parents.append(src)
                self._send(src, "a", (R_INACTIVE, self.succ))
        elif self.mode != ACTIVE:
            raise ProtocolError(f"inactive node {self.me} was asked for its coin or color")
        else:
            self._send(src, "a", (R_VALUE, self.coin if kind == Q_COIN else self.color))

    def _deactivate(self) -> None:
        self.mode = INACTIVE
        self.window_open = True
        self.history[-1][2] = True

    def _become_root(self) -> None:
        self.mode = ROOT
        self.root = self.me
        self._resolve(CYCLE, "cyc", (self.me,))

    def _give_up(self) -> None:
        self.mode = GAVE_UP
        self._resolve(TAIL, "tail")

    def _on_cyc(self, src: int, root: int) -> None:
        if self.mode != INACTIVE:
            raise ProtocolError(f"cycle notice reached {self.mode} node {self.me}")
        if self.status == UNKNOWN:
            self.root = root
            self.cyc_parent = src
            self._resolve(CYCLE, "cyc", (root,))

    def _check_tail(self) -> None:
        if self.mode == INACTIVE and self.status == UNKNOWN and not self.window_open:
            if all(p in self.tail_from for p in self.parents):
                self._resolve(TAIL, "tail")

    def _resolve(self, status: int, tag: str, words: Tuple[int, ...] = ()) -> None:
        self.status = status
        for c in self.children:
            self._send(c, tag, words)
        self.events.append(status)

    def outcome(self) -> "NodeOutcome":
        return NodeOutcome(
            self.succ0, self.succ, self.mode, self.status == CYCLE, self.root, self.cyc_parent,
            tuple(self.children), tuple(self.parents), tuple(tuple(h) for h in self.history),
        )


@dataclass(frozen=True)
class NodeOutcome:
    succ0: int
    succ: int
    mode: str
    in_cycle: bool
    root: int
    cyc_parent: int
    children: Tuple[int, ...]
    parents: Tuple[int, ...]
    history: Tuple[tuple, ...]


@dataclass(frozen=True)
class CycleReport:
    in_cycle: Tuple[bool, ...]
    cycles: Tuple[Tuple[int, ...], ...]  # along the successors, from the smallest node; sorted
    roots: Tuple[int, ...]  # the self-pointing node of each cycle, aligned with ``cycles``
    tree_edges: Tuple[Tuple[int, int], ...]  # (parent, child) inside the cycle trees
    tree_height: int
    nodes: Tuple[NodeOutcome, ...]


def _walk_cycle(members, succ0) -> Tuple[int, ...]:
    start = min(members)
    cyc = [start]
    v = succ0[start]
    while v != start:
        cyc.append(v)
        v = succ0[v]
    return tuple(cyc)


def build_report(nodes: Sequence[NodeOutcome]) -> CycleReport:
    groups: Dict[int, List[int]] = {}
    for v, out in enumerate(nodes):
        if out.in_cycle:
            groups.setdefault(out.root, []).append(v)
    succ0 = [o.succ0 for o in nodes]
    pairs = sorted((_walk_cycle(members, succ0), root) for root, members in groups.items())
    edges = []
    height = 0
    for _, root in pairs:
        depth = {root: 0}
        queue = [root]
        for v in queue:
            for c in nodes[v].children:
                edges.append((v, c))
                if c not in depth:
                    depth[c] = depth[v] + 1
                    queue.append(c)
        height = max(height, max(depth.values()))
    return CycleReport(
        tuple(o.in_cycle for o in nodes),
        tuple(c for c, _ in pairs),
        tuple(r for _, r in pairs),
        tuple(sorted(edges)),
        height,
        tuple(nodes),
    )


class _CycleNode(sim.Process):
    def __init__(self, node, net, succ, variant):
        super().__init__(node, net)
        self.variant = variant
        self.first = succ

    def start(self):
        self.finder = CycleFinder(self, self.variant, self.first, t0=1)
        self.terminated = self.finder.resolved

    def on_round(self, rnd, inbox):
        self.finder.step(rnd, inbox)
        self.terminated = self.finder.resolved

    def output(self):
        return self.finder.outcome()


def run_cycles(g: FunctionalGraph, variant: str, seed: int = 0, round_cap=None, trace=None, digest=False):
    res = sim.run(lambda i, net: _CycleNode(i, net, g.succ[i], variant), g.n, seed, round_cap, trace, digest)
    report = build_report(res.outputs)
    st = res.stats.stage(0)
    st.cycles_found = len(report.cycles)
    st.cycle_lengths = [len(c) for c in report.cycles]
    return report, res.stats, res.trace_digest


def run_las_vegas_cycles(g: FunctionalGraph, seed: int = 0, round_cap=None, trace=None) -> Tuple[CycleReport, sim.SimStats]:
    report, stats, _ = run_cycles(g, LAS_VEGAS, seed, round_cap, trace)
    return report, stats


def run_deterministic_cycles(g: FunctionalGraph, round_cap=None, trace=None) -> Tuple[CycleReport, sim.SimStats]:
    report, stats, _ = run_cycles(g, DETERMINISTIC, 0, round_cap, trace)
    return report, stats
