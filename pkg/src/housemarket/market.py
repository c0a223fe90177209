"""Housing allocation and housing market instances, matchings, and their text formats.

Agents and houses are dense 0-based integers. An allocation instance is a
set of agents with strict (possibly partial) preference lists over houses;
a market instance additionally endows every agent with exactly one house.

Instance files are line oriented; ``#`` starts a comment line::

    market 3
    agent 0 prefs 1 2 0
    agent 1 prefs 0 2 1
    agent 2 prefs 0 1 2
    endow 0 0
    endow 1 1
    endow 2 2
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Optional, Sequence, Tuple

ALLOCATION = "allocation"
MARKET = "market"

Matching = Dict[int, int]


class InstanceError(ValueError):
    """An instance violates one of its structural invariants."""


class ParseError(InstanceError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class InvalidMatchingError(ValueError):
    """A matching is not injective, assigns unlisted houses, or is out of range."""


@dataclass(frozen=True)
class Instance:
    kind: str
    n_agents: int
    n_houses: int
    prefs: Tuple[Tuple[int, ...], ...]
    endowment: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "prefs", tuple(tuple(p) for p in self.prefs))
        if self.endowment is not None:
            object.__setattr__(self, "endowment", tuple(self.endowment))
        self._validate()

    def _validate(self) -> None:
        if self.kind not in (ALLOCATION, MARKET):
            raise InstanceError(f"unknown instance kind {self.kind!r}")
        if self.n_agents < 0 or self.n_houses < 0:
            raise InstanceError("counts must be non-negative")
        if len(self.prefs) != self.n_agents:
            raise InstanceError(f"expected {self.n_agents} preference lists, got {len(self.prefs)}")
        for a, plist in enumerate(self.prefs):
            seen = set()
            for h in plist:
                if not 0 <= h < self.n_houses:
                    raise InstanceError(f"agent {a} lists house {h} out of range")
                if h in seen:
                    raise InstanceError(f"agent {a} lists house {h} twice")
                seen.add(h)
        if self.kind == ALLOCATION:
            if self.endowment is not None:
                raise InstanceError("allocation instances carry no endowment")
            return
        if self.n_agents != self.n_houses:
            raise InstanceError("a market needs as many houses as agents")
        if self.endowment is None or len(self.endowment) != self.n_agents:
            raise InstanceError("a market needs one endowed house per agent")
        if sorted(self.endowment) != list(range(self.n_houses)):
            raise InstanceError("endowment is not a bijection between agents and houses")
        for a, h in enumerate(self.endowment):
            if h not in self.prefs[a]:
                raise InstanceError(f"agent {a} does not list its endowed house {h}")

    @property
    def is_market(self) -> bool:
        return self.kind == MARKET

    @cached_property
    def ranks(self) -> Tuple[Dict[int, int], ...]:
        """Per agent, house -> 0-based position in its list."""
        return tuple({h: r for r, h in enumerate(p)} for p in self.prefs)

    @cached_property
    def owner(self) -> Tuple[int, ...]:
        """Inverse endowment: house -> agent (markets only)."""
        if self.endowment is None:
            raise InstanceError("allocation instances have no owners")
        inv = [0] * self.n_houses
        for a, h in enumerate(self.endowment):
            inv[h] = a
        return tuple(inv)

    def rank(self, agent: int, house: Optional[int]) -> Optional[int]:
        if house is None:
            return None
        return self.ranks[agent].get(house)

    def prefers(self, agent: int, h1: Optional[int], h2: Optional[int]) -> bool:
        """True when ``agent`` strictly prefers ``h1`` to ``h2``.

        ``None`` stands for being unmatched, which ranks below every listed
        house. Unlisted houses are unacceptable and never preferred.
        """
        r1 = self.rank(agent, h1)
        if r1 is None:
            return False
        r2 = self.rank(agent, h2)
        return r2 is None or r1 < r2

    def acceptable(self, agent: int, house: int) -> bool:
        return house in self.ranks[agent]


def validate_matching(inst: Instance, mu: Matching, *, perfect: bool = False) -> None:
    used = {}
    for a, h in mu.items():
        if not 0 <= a < inst.n_agents:
            raise InvalidMatchingError(f"agent {a} out of range")
        if not 0 <= h < inst.n_houses:
            raise InvalidMatchingError(f"house {h} out of range")
        if h in used:
            raise InvalidMatchingError(f"house {h} assigned to agents {used[h]} and {a}")
        if not inst.acceptable(a, h):
            raise InvalidMatchingError(f"agent {a} does not list house {h}")
        used[h] = a
    if perfect and len(mu) != inst.n_agents:
        missing = sorted(set(range(inst.n_agents)) - set(mu))
        raise InvalidMatchingError(f"matching is not perfect, unmatched agents {missing}")


def endowment_matching(inst: Instance) -> Matching:
    if inst.endowment is None:
        raise InstanceError("allocation instances have no endowment")
    return dict(enumerate(inst.endowment))


def market(prefs: Sequence[Sequence[int]], endowment: Optional[Sequence[int]] = None) -> Instance:
    """Shorthand for a market; the endowment defaults to agent i owning house i."""
    n = len(prefs)
    if endowment is None:
        endowment = range(n)
    return Instance(MARKET, n, n, tuple(map(tuple, prefs)), tuple(endowment))


def allocation(prefs: Sequence[Sequence[int]], n_houses: Optional[int] = None) -> Instance:
    if n_houses is None:
        n_houses = 1 + max((h for p in prefs for h in p), default=-1)
    return Instance(ALLOCATION, len(prefs), n_houses, tuple(map(tuple, prefs)))


def as_allocation(inst: Instance) -> Instance:
    """Drop the endowment, keeping agents, houses and preference lists."""
    return Instance(ALLOCATION, inst.n_agents, inst.n_houses, inst.prefs)


# -- text formats -----------------------------------------------------------


def _int(tok: str, lineno: int) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise ParseError(lineno, f"expected an integer, got {tok!r}") from None
    if value < 0:
        raise ParseError(lineno, f"negative id {value}")
    return value


def _lines(text: str) -> Iterable[Tuple[int, list]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def parse_instance(text: str) -> Instance:
    lines = iter(_lines(text))
    try:
        lineno, head = next(lines)
    except StopIteration:
        raise ParseError(1, "empty instance file") from None
    if head[0] == MARKET and len(head) == 2:
        kind, n_agents = MARKET, _int(head[1], lineno)
        n_houses = n_agents
    elif head[0] == ALLOCATION and len(head) == 3:
        kind, n_agents, n_houses = ALLOCATION, _int(head[1], lineno), _int(head[2], lineno)
    else:
        raise ParseError(lineno, "header must be 'market <n>' or 'allocation <nAgents> <nHouses>'")

    prefs: Dict[int, Tuple[int, ...]] = {}
    endow: Dict[int, int] = {}
    for lineno, toks in lines:
        if toks[0] == "agent":
            if len(toks) < 3 or toks[2] != "prefs":
                raise ParseError(lineno, "expected 'agent <id> prefs <house> ...'")
            a = _int(toks[1], lineno)
            if a >= n_agents:
                raise ParseError(lineno, f"agent {a} out of range")
            if a in prefs:
                raise ParseError(lineno, f"agent {a} listed twice")
            houses = tuple(_int(t, lineno) for t in toks[3:])
            for h in houses:
                if h >= n_houses:
                    raise ParseError(lineno, f"house {h} out of range")
            if len(set(houses)) != len(houses):
                raise ParseError(lineno, f"agent {a} has a duplicate preference")
            prefs[a] = houses
        elif toks[0] == "endow":
            if kind != MARKET:
                raise ParseError(lineno, "'endow' lines are only valid in a market")
            if len(toks) != 3:
                raise ParseError(lineno, "expected 'endow <agentId> <houseId>'")
            a, h = _int(toks[1], lineno), _int(toks[2], lineno)
            if a >= n_agents or h >= n_houses:
                raise ParseError(lineno, "endowment id out of range")
            if a in endow:
                raise ParseError(lineno, f"agent {a} endowed twice")
            if h in endow.values():
                raise ParseError(lineno, f"house {h} endowed to two agents; endowment must be a bijection")
            endow[a] = h
        else:
            raise ParseError(lineno, f"unknown directive {toks[0]!r}")

    missing = [a for a in range(n_agents) if a not in prefs]
    if missing:
        raise ParseError(lineno if n_agents else 1, f"no preference line for agents {missing}")
    endowment = None
    if kind == MARKET:
        if len(endow) != n_agents:
            raise ParseError(lineno if n_agents else 1, "every agent of a market needs an 'endow' line")
        endowment = tuple(endow[a] for a in range(n_agents))
    return Instance(kind, n_agents, n_houses, tuple(prefs[a] for a in range(n_agents)), endowment)


def serialize_instance(inst: Instance) -> str:
    if inst.is_market:
        out = [f"{MARKET} {inst.n_agents}"]
    else:
        out = [f"{ALLOCATION} {inst.n_agents} {inst.n_houses}"]
    for a, plist in enumerate(inst.prefs):
        out.append(" ".join(["agent", str(a), "prefs", *map(str, plist)]))
    if inst.is_market:
        out.extend(f"endow {a} {h}" for a, h in enumerate(inst.endowment))
    return "\n".join(out) + "\n"


def parse_matching(text: str) -> Matching:
    mu: Matching = {}
    for lineno, toks in _lines(text):
        if toks[0] != "match" or len(toks) != 3:
            raise ParseError(lineno, "expected 'match <agentId> <houseId>'")
        a, h = _int(toks[1], lineno), _int(toks[2], lineno)
        if a in mu:
            raise ParseError(lineno, f"agent {a} matched twice")
        mu[a] = h
    return mu


def serialize_matching(mu: Matching) -> str:
    return "".join(f"match {a} {mu[a]}\n" for a in sorted(mu))


# -- generation -------------------------------------------------------------


def generate_instance(kind: str, n_agents: int, n_houses: int, list_len_bound: int, seed: int) -> Instance:
    """Draw a random instance; identical arguments give identical instances.

    Every preference list is a prefix of a uniformly random ordering of the
    houses. Allocation lists have a length uniform in ``[1, list_len_bound]``
    (capped by the number of houses). Market lists are a uniformly ordered
    random subset of that length which always contains the endowed house;
    agent ``i`` is endowed with house ``i``.
    """
    if n_agents < 0 or n_houses < 0:
        raise InstanceError("counts must be non-negative")
    if list_len_bound < 1:
        raise InstanceError("list length bound must be at least 1")
    rng = random.Random(seed)
    prefs = []
    if kind == MARKET:
        if n_agents != n_houses:
            raise InstanceError("a market needs as many houses as agents")
        bound = min(list_len_bound, n_houses)
        for a in range(n_agents):
            length = rng.randint(1, bound)
            others = [h for h in range(n_houses) if h != a]
            chosen = rng.sample(others, length - 1)
            chosen.insert(rng.randrange(length), a)
            prefs.append(tuple(chosen))
        return Instance(MARKET, n_agents, n_houses, tuple(prefs), tuple(range(n_agents)))
    if kind != ALLOCATION:
        raise InstanceError(f"unknown instance kind {kind!r}")
    bound = min(list_len_bound, n_houses)
    for _ in range(n_agents):
        length = rng.randint(1, bound) if bound else 0
        prefs.append(tuple(rng.sample(range(n_houses), length)))
    return Instance(ALLOCATION, n_agents, n_houses, tuple(prefs))
