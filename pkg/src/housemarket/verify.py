"""Polynomial-time checks of individual rationality, Pareto optimality and core membership.

Pareto optimality is decided on the envy digraph (an arc u -> v when u
prefers v's house to its own): a cycle there is a trade that makes every
agent on it strictly better off. Core membership is decided on the
exchange digraph with *solid* arcs u -> v when u received v's endowment and
*dashed* arcs u -> v when u prefers v's endowment to what it received; a
directed cycle through a dashed arc is a blocking coalition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .market import MARKET, Instance, InstanceError, Matching, validate_matching
from .oracles import DEFAULT_BUDGET, BudgetExceeded, EnumerationBudget, coalition_free_matchings

SOLID = "solid"
DASHED = "dashed"


@dataclass(frozen=True)
class Improvement:
    """A Pareto improvement: each listed agent moves to the paired house.

    ``kind`` is ``"cycle"`` (agents swap along an envy cycle), ``"trade-in"``
    (a matched agent moves to a free house it prefers) or ``"unmatched"`` (an
    unmatched agent takes a free listed house).
    """

    kind: str
    agents: Tuple[int, ...]
    houses: Tuple[int, ...]

    def apply(self, mu: Matching) -> Matching:
        out = dict(mu)
        out.update(zip(self.agents, self.houses))
        return out


@dataclass(frozen=True)
class CoalitionCertificate:
    cycle: Tuple[int, ...]
    arc_kinds: Tuple[str, ...]  # arc_kinds[i] labels cycle[i] -> cycle[i+1]

    def reallocation(self, inst: Instance) -> Matching:
        """What the coalition gets by trading its own endowments along the cycle."""
        k = len(self.cycle)
        return {self.cycle[i]: inst.endowment[self.cycle[(i + 1) % k]] for i in range(k)}


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.holds


def _require_market(inst: Instance) -> None:
    if inst.kind != MARKET:
        raise InstanceError("this check needs a market instance")


def verify_ir(inst: Instance, mu: Matching) -> bool:
    _require_market(inst)
    validate_matching(inst, mu, perfect=True)
    return all(not inst.prefers(a, inst.endowment[a], mu[a]) for a in range(inst.n_agents))


def _find_cycle(n: int, adj: Sequence[Sequence[int]], nodes: Sequence[int]) -> Optional[List[int]]:
    """First directed cycle met by an iterative DFS over ``nodes`` in order."""
    color = [0] * n  # 0 new, 1 on stack, 2 done
    for root in nodes:
        if color[root]:
            continue
        stack = [(root, 0)]
        color[root] = 1
        while stack:
            v, i = stack[-1]
            if i < len(adj[v]):
                stack[-1] = (v, i + 1)
                w = adj[v][i]
                if color[w] == 1:
                    path = [x for x, _ in stack]
                    return path[path.index(w):]
                if color[w] == 0:
                    color[w] = 1
                    stack.append((w, 0))
            else:
                color[v] = 2
                stack.pop()
    return None


def envy_graph(inst: Instance, mu: Matching) -> List[List[int]]:
    adj: List[List[int]] = [[] for _ in range(inst.n_agents)]
    holder = {h: a for a, h in mu.items()}
    for u in sorted(mu):
        ranks = inst.ranks[u]
        mine = ranks[mu[u]]
        for h, r in sorted(ranks.items(), key=lambda kv: kv[1]):
            if r >= mine:
                break
            v = holder.get(h)
            if v is not None:
                adj[u].append(v)
        adj[u].sort()
    return adj


def verify_pareto(inst: Instance, mu: Matching) -> Verdict:
    """Pareto optimality among matchings that use listed houses only.

    For a perfect matching this is acyclicity of the envy digraph. When
    houses are left free, a matched agent preferring a free house, or an
    unmatched agent listing one, is an improvement as well.
    """
    validate_matching(inst, mu)
    adj = envy_graph(inst, mu)
    cyc = _find_cycle(inst.n_agents, adj, sorted(mu))
    if cyc is not None:
        k = len(cyc)
        return Verdict(False, Improvement("cycle", tuple(cyc), tuple(mu[cyc[(i + 1) % k]] for i in range(k))))
    free = set(range(inst.n_houses)) - set(mu.values())
    if free:
        for a in sorted(mu):
            for h in inst.prefs[a]:
                if h == mu[a]:
                    break
                if h in free:
                    return Verdict(False, Improvement("trade-in", (a,), (h,)))
        for a in range(inst.n_agents):
            if a in mu:
                continue
            for h in inst.prefs[a]:
                if h in free:
                    return Verdict(False, Improvement("unmatched", (a,), (h,)))
    return Verdict(True)


def core_graph(inst: Instance, mu: Matching) -> Tuple[List[List[int]], List[Tuple[int, int]]]:
    """Adjacency of the exchange digraph plus its dashed arcs."""
    _require_market(inst)
    owner = inst.owner
    adj: List[List[int]] = [[] for _ in range(inst.n_agents)]
    dashed = []
    for u in range(inst.n_agents):
        adj[u].append(owner[mu[u]])  # solid arc
        mine = inst.ranks[u][mu[u]]
        for h, r in inst.ranks[u].items():
            if r < mine:
                adj[u].append(owner[h])
                dashed.append((u, owner[h]))
        adj[u].sort()
    dashed.sort()
    return adj, dashed


def _bfs_path(adj: Sequence[Sequence[int]], src: int, dst: int) -> Optional[List[int]]:
    prev = {src: None}
    queue = [src]
    for v in queue:
        if v == dst:
            path = []
            while v is not None:
                path.append(v)
                v = prev[v]
            return path[::-1]
        for w in adj[v]:
            if w not in prev:
                prev[w] = v
                queue.append(w)
    return None


def verify_core(inst: Instance, mu: Matching) -> Verdict:
    """True iff no directed cycle of the exchange digraph uses a dashed arc."""
    _require_market(inst)
    validate_matching(inst, mu, perfect=True)
    adj, dashed = core_graph(inst, mu)
    owner = inst.owner
    for u, v in dashed:
        back = _bfs_path(adj, v, u)
        if back is None:
            continue
        cycle = [u] + back[:-1]
        kinds = []
        k = len(cycle)
        for i in range(k):
            a, b = cycle[i], cycle[(i + 1) % k]
            if i == 0:
                kinds.append(DASHED)
            else:
                kinds.append(SOLID if owner[mu[a]] == b else DASHED)
        return Verdict(False, CoalitionCertificate(tuple(cycle), tuple(kinds)))
    return Verdict(True)


def brute_force_core(inst: Instance, budget: EnumerationBudget = DEFAULT_BUDGET) -> Matching:
    """The coalition-free perfect matching, found by exhaustive search.

    A coalition is any agent subset that can redistribute its own
    endowments so that no member does worse than under the matching and at
    least one does strictly better. Every member of a coalition is matched
    under the (perfect) matching, so the comparison is always defined.
    """
    _require_market(inst)
    if inst.n_agents > budget.max_agents:
        raise BudgetExceeded(f"{inst.n_agents} agents exceed the oracle budget of {budget.max_agents}")
    found = coalition_free_matchings(inst, budget)
    if len(found) != 1:
        raise AssertionError(f"expected exactly one coalition-free matching, found {len(found)}")
    return found[0]
