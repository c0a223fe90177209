"""Exhaustive ground-truth oracles for small inputs.

Nothing here imports the solvers, the verifier or the kernels: every
function works straight from the definitions so that it can check them.
Enumeration is bounded by an :class:`EnumerationBudget`; going past it is an
error, never a silent truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .market import Instance, Matching


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class EnumerationBudget:
    max_agents: int = 8
    max_matchings: int = 2_000_000


DEFAULT_BUDGET = EnumerationBudget()


def enumerate_matchings(
    inst: Instance, perfect: Optional[bool] = None, budget: EnumerationBudget = DEFAULT_BUDGET
) -> Iterator[Matching]:
    """Every matching that only uses listed houses, each exactly once.

    ``perfect`` defaults to True for markets (only matchings covering every
    agent) and False for allocations.
    """
    if perfect is None:
        perfect = inst.is_market
    n = inst.n_agents
    if n > budget.max_agents:
        raise BudgetExceeded(f"{n} agents exceed the oracle budget of {budget.max_agents}")
    taken = [False] * inst.n_houses
    current: Dict[int, int] = {}
    count = 0

    def rec(a: int):
        nonlocal count
        if a == n:
            count += 1
            if count > budget.max_matchings:
                raise BudgetExceeded(f"more than {budget.max_matchings} matchings")
            yield dict(current)
            return
        if not perfect:
            yield from rec(a + 1)
        for h in inst.prefs[a]:
            if not taken[h]:
                taken[h] = True
                current[a] = h
                yield from rec(a + 1)
                del current[a]
                taken[h] = False

    yield from rec(0)


def _rank(inst: Instance, a: int, h: Optional[int]) -> int:
    """Position in the list; unmatched ranks below everything."""
    if h is None:
        return len(inst.prefs[a])
    return inst.prefs[a].index(h)


def dominates(inst: Instance, nu: Matching, mu: Matching) -> bool:
    """Pareto domination: nobody worse off under ``nu`` and somebody strictly better."""
    strict = False
    for a in range(inst.n_agents):
        rn, rm = _rank(inst, a, nu.get(a)), _rank(inst, a, mu.get(a))
        if rn > rm:
            return False
        if rn < rm:
            strict = True
    return strict


def find_dominating(inst: Instance, mu: Matching, budget: EnumerationBudget = DEFAULT_BUDGET) -> Optional[Matching]:
    for nu in enumerate_matchings(inst, perfect=False, budget=budget):
        if dominates(inst, nu, mu):
            return nu
    return None


def is_pareto_optimal_brute(inst: Instance, mu: Matching, budget: EnumerationBudget = DEFAULT_BUDGET) -> bool:
    return find_dominating(inst, mu, budget) is None


def find_coalition(inst: Instance, mu: Matching, budget: EnumerationBudget = DEFAULT_BUDGET) -> Optional[Tuple[Tuple[int, ...], Matching]]:
    """A blocking coalition of ``mu`` in a market, or None.

    Searches every agent subset and every way of redistributing the subset's
    own endowments among its members such that nobody in the subset is
    worse off than under ``mu`` and somebody is strictly better off.
    """
    n = inst.n_agents
    if n > budget.max_agents:
        raise BudgetExceeded(f"{n} agents exceed the oracle budget of {budget.max_agents}")
    endow = inst.endowment
    for size in range(1, n + 1):
        for group in combinations(range(n), size):
            houses = [endow[b] for b in group]
            # options[a]: houses of the group that agent a weakly prefers to mu(a)
            options = []
            for a in group:
                limit = _rank(inst, a, mu.get(a))
                options.append([h for h in houses if h in inst.ranks[a] and inst.ranks[a][h] <= limit])
            if any(not o for o in options):
                continue
            found = _coalition_assignment(inst, group, options, mu)
            if found is not None:
                return group, found
    return None


def _coalition_assignment(inst, group, options, mu) -> Optional[Matching]:
    used = set()
    chosen: Dict[int, int] = {}

    def rec(i: int, strict: bool) -> bool:
        if i == len(group):
            return strict
        a = group[i]
        for h in options[i]:
            if h in used:
                continue
            used.add(h)
            chosen[a] = h
            if rec(i + 1, strict or h != mu.get(a)):
                return True
            used.discard(h)
            del chosen[a]
        return False

    return dict(chosen) if rec(0, False) else None


def coalition_free_matchings(inst: Instance, budget: EnumerationBudget = DEFAULT_BUDGET) -> List[Matching]:
    return [mu for mu in enumerate_matchings(inst, perfect=True, budget=budget) if find_coalition(inst, mu, budget) is None]


def brute_max_matching(n_left: int, n_right: int, edges: Sequence[Tuple[int, int]], budget: EnumerationBudget = DEFAULT_BUDGET) -> int:
    """Maximum matching size by trying every edge subset in decreasing size."""
    edges = list(edges)
    if len(edges) > 4 * budget.max_agents:
        raise BudgetExceeded("too many edges for exhaustive search")
    for k in range(min(n_left, n_right), 0, -1):
        for combo in combinations(edges, k):
            ls = {e[0] for e in combo}
            rs = {e[1] for e in combo}
            if len(ls) == k and len(rs) == k:
                return k
    return 0


def max_matching_oracle(n_left: int, n_right: int, edges: Sequence[Tuple[int, int]]) -> Tuple[int, Dict[int, int]]:
    """Maximum bipartite matching by repeated single augmenting-path search (Kuhn)."""
    adj: List[List[int]] = [[] for _ in range(n_left)]
    for i, j in edges:
        adj[i].append(j)
    owner: Dict[int, int] = {}

    def augment(i: int, seen: set) -> bool:
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in owner or augment(owner[j], seen):
                owner[j] = i
                return True
        return False

    for i in range(n_left):
        augment(i, set())
    match = {i: j for j, i in owner.items()}
    return len(match), match


def brute_min_weight_perfect(n: int, edges: Sequence[Tuple[int, int, int]], budget: EnumerationBudget = DEFAULT_BUDGET) -> Optional[int]:
    """Minimum total weight over all perfect matchings, or None if there is none."""
    if n > budget.max_agents:
        raise BudgetExceeded(f"{n} vertices per side exceed the oracle budget")
    w = {(i, j): x for i, j, x in edges}
    best = None
    for perm in permutations(range(n)):
        total = 0
        for i, j in enumerate(perm):
            if (i, j) not in w:
                break
            total += w[i, j]
        else:
            if best is None or total < best:
                best = total
    return best


def brute_lfmm(n: int, edges: Sequence[Tuple[int, int]], budget: EnumerationBudget = DEFAULT_BUDGET) -> Tuple[int, ...]:
    """Lexicographically smallest maximal matching, as sorted edge positions."""
    m = len(edges)
    if n > budget.max_agents or m > 3 * budget.max_agents:
        raise BudgetExceeded("graph too large for exhaustive LFMM search")
    best = None
    for mask in range(1 << m):
        chosen = [e for e in range(m) if mask >> e & 1]
        covered = set()
        ok = True
        for e in chosen:
            u, v = edges[e]
            if u in covered or v in covered:
                ok = False
                break
            covered.update((u, v))
        if not ok:
            continue
        if any(edges[e][0] not in covered and edges[e][1] not in covered for e in range(m)):
            continue
        key = tuple(chosen)
        if best is None or key < best:
            best = key
    return best if best is not None else ()


def brute_cycles(succ: Sequence[int]) -> List[List[int]]:
    """Cycle nodes of a functional graph: nodes that return to themselves within n steps."""
    n = len(succ)
    on_cycle = []
    for v in range(n):
        x = succ[v]
        for _ in range(n):
            if x == v:
                on_cycle.append(v)
                break
            x = succ[x]
    out = []
    seen = set()
    for v in on_cycle:
        if v in seen:
            continue
        cyc = [v]
        x = succ[v]
        while x != v:
            cyc.append(x)
            x = succ[x]
        seen.update(cyc)
        out.append(cyc)
    return out
