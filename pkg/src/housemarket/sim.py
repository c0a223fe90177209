"""Deterministic synchronous message passing on a complete network.

Every node runs the same kind of :class:`Process`. Round ``r`` delivers
everything sent during round ``r - 1`` and lets every node react; a node's
sends in round ``r`` arrive in round ``r + 1``. The run stops once every node
reports ``terminated`` and nothing is in flight. Terminated nodes still see
(and may answer) messages addressed to them.

Messages carry a short tag, at most :data:`MAX_WORDS` small integers and a
stage number. A payload beyond that budget is a protocol bug and fails the
run. Broadcasts are accounted point to point, as ``n - 1`` messages.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, IO, List, NamedTuple, Optional, Tuple

MAX_WORDS = 4


class SimulationError(RuntimeError):
    pass


class PayloadTooLarge(SimulationError):
    pass


class RoundCapExceeded(SimulationError):
    pass


class Envelope(NamedTuple):
    src: int
    dst: int
    tag: str
    words: Tuple[int, ...]
    stage: int


@dataclass
class StageStats:
    rounds: int = 0
    messages: int = 0
    cycles_found: int = 0
    cycle_lengths: List[int] = field(default_factory=list)


@dataclass
class SimStats:
    rounds: int = 0
    messages: int = 0
    per_stage: List[StageStats] = field(default_factory=list)

    @property
    def stages(self) -> int:
        return len(self.per_stage)

    def stage(self, s: int) -> StageStats:
        while len(self.per_stage) <= s:
            self.per_stage.append(StageStats())
        return self.per_stage[s]

    def as_dict(self) -> dict:
        return asdict(self)


def default_round_cap(n: int) -> int:
    log = math.ceil(math.log2(n)) if n > 1 else 0
    return 64 * (log + 1) * (n + 1)


def word_limit(n: int) -> int:
    """Largest magnitude a payload word may have: O(log n) bits."""
    return 64 * (n + 1) ** 2


def node_rng(seed: int, node: int) -> random.Random:
    """Independent per-node stream; string seeding is stable across interpreters."""
    return random.Random(f"housemarket:{seed}:{node}")


class Process:
    """Base class for per-node protocol code.

    Subclasses override :meth:`start` (before round 1) and :meth:`on_round`,
    and set ``terminated`` once they are locally done.
    """

    def __init__(self, node: int, net: "Network"):
        self.id = node
        self.net = net
        self.n = net.n
        self.rng = net.rngs[node]
        self.terminated = False

    def start(self) -> None:
        pass

    def on_round(self, rnd: int, inbox: List[Envelope]) -> None:
        pass

    def output(self):
        return None

    def send(self, dst: int, tag: str, words: Tuple[int, ...] = (), stage: int = 0) -> None:
        self.net.send(self.id, dst, tag, words, stage)

    def broadcast(self, tag: str, words: Tuple[int, ...] = (), stage: int = 0) -> None:
        self.net.broadcast(self.id, tag, words, stage)


class Network:
    def __init__(self, n: int, seed: int):
        self.n = n
        self.seed = seed
        self.rngs = [node_rng(seed, i) for i in range(n)]
        self.outgoing: List[Envelope] = []
        self.limit = word_limit(n)
        self.sent_per_stage: Dict[int, int] = {}
        self.max_stage = 0

    def _check(self, tag: str, words: Tuple[int, ...]) -> None:
        if len(words) > MAX_WORDS:
            raise PayloadTooLarge(f"{tag}: {len(words)} words exceed the budget of {MAX_WORDS}")
        lim = self.limit
        for w in words:
            if type(w) is not int or not -lim <= w <= lim:
                raise PayloadTooLarge(f"{tag}: word {w!r} is not a small integer")

    def send(self, src: int, dst: int, tag: str, words: Tuple[int, ...], stage: int) -> None:
        self._check(tag, words)
        if not 0 <= dst < self.n or dst == src:
            raise SimulationError(f"node {src} cannot send to {dst}")
        self.outgoing.append(Envelope(src, dst, tag, words, stage))
        self._count(stage, 1)

    def broadcast(self, src: int, tag: str, words: Tuple[int, ...], stage: int) -> None:
        self._check(tag, words)
        out = self.outgoing
        for dst in range(self.n):
            if dst != src:
                out.append(Envelope(src, dst, tag, words, stage))
        self._count(stage, self.n - 1)

    def _count(self, stage: int, k: int) -> None:
        self.sent_per_stage[stage] = self.sent_per_stage.get(stage, 0) + k
        if stage > self.max_stage:
            self.max_stage = stage


@dataclass
class SimResult:
    outputs: list
    stats: SimStats
    trace_digest: Optional[str] = None


def run(
    factory: Callable[[int, Network], Process],
    n: int,
    seed: int = 0,
    round_cap: Optional[int] = None,
    trace: Optional[IO[str]] = None,
    digest: bool = False,
) -> SimResult:
    """Run ``factory(node, net)`` on every node of an ``n``-node clique until quiescence.

    With ``trace`` set, one line per delivery is written to it; with
    ``digest`` (or ``trace``) a SHA-256 of those lines is returned.
    """
    if round_cap is None:
        round_cap = default_round_cap(n)
    net = Network(n, seed)
    procs = [factory(i, net) for i in range(n)]
    for p in procs:
        p.start()
    stats = SimStats()
    hasher = hashlib.sha256() if (digest or trace is not None) else None
    in_flight = net.outgoing
    net.outgoing = []
    rnd = 0
    while in_flight or not all(p.terminated for p in procs):
        rnd += 1
        if rnd > round_cap:
            raise RoundCapExceeded(f"no quiescence after {round_cap} rounds")
        inboxes: List[List[Envelope]] = [[] for _ in range(n)]
        for env in in_flight:
            inboxes[env.dst].append(env)
        if hasher is not None:
            for env in in_flight:
                line = f"round={rnd} src={env.src} dst={env.dst} tag={env.tag} words={','.join(map(str, env.words))}\n"
                hasher.update(line.encode())
                if trace is not None:
                    trace.write(line)
        for p, inbox in zip(procs, inboxes):
            if inbox or not p.terminated:
                p.on_round(rnd, inbox)
        in_flight = net.outgoing
        net.outgoing = []
        stats.stage(net.max_stage).rounds += 1
    for s, k in sorted(net.sent_per_stage.items()):
        stats.stage(s).messages += k
    stats.rounds = rnd
    stats.messages = sum(net.sent_per_stage.values())
    if not stats.per_stage and n:
        stats.stage(0)
    return SimResult([p.output() for p in procs], stats, hasher.hexdigest() if hasher else None)
