"""Lex-first maximal matching and its reductions to and from one-sided matching.

A graph with a total order on its edges is stored as the edge list in
ascending order, so an edge's position *is* its rank in the order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from . import kernels
from .market import ALLOCATION, MARKET, Instance, InstanceError, Matching, ParseError, _int, _lines


@dataclass(frozen=True)
class OrderedGraph:
    n_vertices: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add(key)


@dataclass(frozen=True)
class EdgeMatching:
    chosen: frozenset
    stages: Tuple[Tuple[int, ...], ...]

    def pairs(self, g: OrderedGraph) -> List[Tuple[int, int]]:
        return [g.edges[e] for e in sorted(self.chosen)]


def greedy_lfmm(g: OrderedGraph) -> EdgeMatching:
    stages = kernels.greedy_lfmm(g.n_vertices, list(g.edges))
    stages = tuple(tuple(s) for s in stages)
    return EdgeMatching(frozenset(e for s in stages for e in s), stages)


@dataclass(frozen=True)
class AllocationReduction:
    graph: OrderedGraph
    n_agents: int
    pairs: Tuple[Tuple[int, int], ...]  # edge position -> (agent, house)

    def to_matching(self, m: EdgeMatching) -> Matching:
        return {self.pairs[e][0]: self.pairs[e][1] for e in m.chosen}


def reduce_allocation_to_lfmm(inst: Instance) -> AllocationReduction:
    """Agent-house graph ordered by (agent id, rank of the house for that agent).

    Vertices ``0..n_agents-1`` are agents, house ``h`` is vertex ``n_agents + h``.
    """
    if inst.kind != ALLOCATION:
        raise InstanceError("expected an allocation instance")
    pairs = [(a, h) for a in range(inst.n_agents) for h in inst.prefs[a]]
    g = OrderedGraph(inst.n_agents + inst.n_houses, tuple((a, inst.n_agents + h) for a, h in pairs))
    return AllocationReduction(g, inst.n_agents, tuple(pairs))


def pareto_via_lfmm(inst: Instance) -> Matching:
    red = reduce_allocation_to_lfmm(inst)
    return red.to_matching(greedy_lfmm(red.graph))


def reduce_lfmm_to_market(g: OrderedGraph) -> Tuple[Instance, Dict[int, int]]:
    """Market with one agent and one house per vertex, vertex ``v`` owning house ``v``.

    Agent ``u`` ranks the houses of its neighbours in edge order, followed by
    its own house; nothing is listed below the own house. Returns the market
    and the vertex -> agent map (the identity).
    """
    incident: List[List[int]] = [[] for _ in range(g.n_vertices)]
    for u, v in g.edges:
        incident[u].append(v)
        incident[v].append(u)
    prefs = tuple(tuple(nbrs) + (u,) for u, nbrs in enumerate(incident))
    inst = Instance(MARKET, g.n_vertices, g.n_vertices, prefs, tuple(range(g.n_vertices)))
    return inst, {v: v for v in range(g.n_vertices)}


def parse_graph(text: str) -> OrderedGraph:
    lines = iter(_lines(text))
    try:
        lineno, head = next(lines)
    except StopIteration:
        raise ParseError(1, "empty graph file") from None
    if head[0] != "graph" or len(head) != 3:
        raise ParseError(lineno, "header must be 'graph <nVertices> <nEdges>'")
    n, m = _int(head[1], lineno), _int(head[2], lineno)
    edges = []
    for lineno, toks in lines:
        if toks[0] != "edge" or len(toks) != 3:
            raise ParseError(lineno, "expected 'edge <u> <v>'")
        edges.append((_int(toks[1], lineno), _int(toks[2], lineno)))
    if len(edges) != m:
        raise ParseError(lineno, f"header announces {m} edges, found {len(edges)}")
    try:
        return OrderedGraph(n, tuple(edges))
    except ValueError as exc:
        raise ParseError(lineno, str(exc)) from None


def serialize_graph(g: OrderedGraph) -> str:
    out = [f"graph {g.n_vertices} {len(g.edges)}"]
    out.extend(f"edge {u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def random_ordered_graph(n: int, p: float, rng) -> OrderedGraph:
    """G(n, p) with a uniformly random edge order."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    rng.shuffle(edges)
    edges = [(v, u) if rng.random() < 0.5 else (u, v) for u, v in edges]
    return OrderedGraph(n, tuple(edges))
