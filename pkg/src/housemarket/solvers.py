"""Sequential reference mechanisms for housing allocation and housing markets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import kernels
from .market import ALLOCATION, MARKET, Instance, InstanceError, Matching

StageTrace = List[List[Tuple[int, ...]]]


class NoPerfectMatchingError(ValueError):
    pass


@dataclass(frozen=True)
class WeightedBipartiteGraph:
    left_count: int
    right_count: int
    edges: Tuple[Tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        seen = set()
        for i, j, w in self.edges:
            if not (0 <= i < self.left_count and 0 <= j < self.right_count):
                raise ValueError(f"edge ({i}, {j}) out of range")
            if w < 0:
                raise ValueError(f"edge ({i}, {j}) has negative weight {w}")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))

    def weight(self, matching: Dict[int, int]) -> int:
        w = {(i, j): x for i, j, x in self.edges}
        return sum(w[i, j] for i, j in matching.items())


def _require(inst: Instance, kind: str) -> None:
    if inst.kind != kind:
        raise InstanceError(f"expected a {kind} instance, got {inst.kind}")


def serial_dictatorship(inst: Instance, order: Optional[Sequence[int]] = None) -> Matching:
    """Let agents pick, one by one in ``order``, their best house still free.

    Works on either instance kind; endowments are ignored. The default order
    is by agent id.
    """
    if order is None:
        order = range(inst.n_agents)
    order = list(order)
    if sorted(order) != list(range(inst.n_agents)):
        raise ValueError("order must be a permutation of all agents")
    taken = set()
    mu: Matching = {}
    for a in order:
        for h in inst.prefs[a]:
            if h not in taken:
                taken.add(h)
                mu[a] = h
                break
    return mu


def solve_core_ttc(inst: Instance) -> Tuple[Matching, StageTrace]:
    """Gale's top trading cycles: the core of a housing market.

    Every cycle of the current top-choice graph trades in the same stage.
    Returns the perfect matching and, per stage, the traded cycles (each
    rotated to start at its smallest agent, cycles sorted).
    """
    _require(inst, MARKET)
    house_of, stages = kernels.ttc(inst.prefs, inst.endowment)
    trace = [[tuple(c) for c in stage] for stage in stages]
    return dict(enumerate(house_of)), trace


def top_choice_graph(inst: Instance, assigned: FrozenSet[int] = frozenset()) -> Dict[int, int]:
    """Successor map of the top-choice graph over agents not in ``assigned``."""
    _require(inst, MARKET)
    owner = inst.owner
    succ = {}
    for a in range(inst.n_agents):
        if a in assigned:
            continue
        for h in inst.prefs[a]:
            if owner[h] not in assigned:
                succ[a] = owner[h]
                break
    return succ


def min_weight_perfect_matching(g: WeightedBipartiteGraph) -> Dict[int, int]:
    if g.left_count != g.right_count:
        raise NoPerfectMatchingError("sides differ in size")
    n = g.left_count
    cost = [[kernels.INF_COST] * n for _ in range(n)]
    for i, j, w in g.edges:
        cost[i][j] = w
    assign = kernels.hungarian(cost)
    if assign is None:
        raise NoPerfectMatchingError("graph has no perfect matching")
    return dict(enumerate(assign))


def irpo_graph(inst: Instance) -> WeightedBipartiteGraph:
    """Agent-house graph keeping the endowed house and every house ranked above it."""
    _require(inst, MARKET)
    edges = []
    for a, plist in enumerate(inst.prefs):
        for r, h in enumerate(plist):
            edges.append((a, h, r))
            if h == inst.endowment[a]:
                break
    return WeightedBipartiteGraph(inst.n_agents, inst.n_houses, tuple(edges))


def solve_irpo_market(inst: Instance) -> Matching:
    """An individually rational, Pareto optimal matching via minimum rank-weight perfect matching."""
    return min_weight_perfect_matching(irpo_graph(inst))


def maximum_matching(inst: Instance) -> Matching:
    """Some maximum-cardinality agent-house matching (Hopcroft-Karp, agents in id order)."""
    match_l = kernels.hopcroft_karp(inst.n_agents, inst.n_houses, [list(p) for p in inst.prefs])
    return {a: h for a, h in enumerate(match_l) if h >= 0}


def solve_max_pareto(inst: Instance) -> Matching:
    """Maximum-cardinality Pareto optimal matching of a housing allocation.

    First finds a maximum matching M. Then, keeping only the agents M
    matches, pads with dummy agents that accept every house at weight 0 and
    lets each real agent keep its M-house or move to any house it prefers,
    weighted by rank. The minimum weight perfect matching of that graph,
    restricted to the real agents, is the answer.
    """
    _require(inst, ALLOCATION)
    first = maximum_matching(inst)
    real = sorted(first)
    m = inst.n_houses
    edges = []
    for row, a in enumerate(real):
        for r, h in enumerate(inst.prefs[a]):
            edges.append((row, h, r))
            if h == first[a]:
                break
    for row in range(len(real), m):
        edges.extend((row, h, 0) for h in range(m))
    best = min_weight_perfect_matching(WeightedBipartiteGraph(m, m, tuple(edges)))
    return {a: best[row] for row, a in enumerate(real)}


def format_stage_trace(trace: StageTrace) -> str:
    lines = []
    for s, cycles in enumerate(trace):
        parts = ["(" + " ".join(map(str, c)) + ")" for c in cycles]
        lines.append(f"stage {s}: " + " ".join(parts))
    return "\n".join(lines)
