import json
import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from housemarket import kernels
from housemarket.lfmm import OrderedGraph
from housemarket.market import ALLOCATION, MARKET, Instance, market

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=1000, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def golden():
    return json.loads((DATA / "oracle_golden.json").read_text())


# The example market: agent i owns house i.
EXAMPLE_PREFS = [[1, 2, 0], [0, 2, 1], [0, 1, 2]]
EXAMPLE_CORE = {0: 1, 1: 0, 2: 2}
EXAMPLE_NONCORE = {0: 1, 1: 2, 2: 0}

# The example ordered graph, vertices u1, u2, v1, v2 = 0, 1, 2, 3.
U1, U2, V1, V2 = 0, 1, 2, 3
EXAMPLE_EDGES = ((U1, U2), (U1, V2), (U1, V1), (V1, V2), (U2, V2))


@pytest.fixture
def example_market():
    return market(EXAMPLE_PREFS)


@pytest.fixture
def example_graph():
    return OrderedGraph(4, EXAMPLE_EDGES)


@pytest.fixture(params=sorted(kernels.IMPLEMENTATIONS))
def impl(request):
    return kernels.IMPLEMENTATIONS[request.param]


@st.composite
def markets(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    endow = draw(st.permutations(range(n)))
    prefs = []
    for a in range(n):
        others = [h for h in range(n) if h != endow[a]]
        above = draw(st.lists(st.sampled_from(others), unique=True, max_size=len(others)) if others else st.just([]))
        below = draw(st.lists(st.sampled_from([h for h in others if h not in above]), unique=True) if len(above) < len(others) else st.just([]))
        prefs.append(tuple(above) + (endow[a],) + tuple(below))
    return Instance(MARKET, n, n, tuple(prefs), tuple(endow))


@st.composite
def allocations(draw, max_agents=6, max_houses=6, min_agents=0):
    n = draw(st.integers(min_agents, max_agents))
    m = draw(st.integers(0, max_houses))
    prefs = tuple(
        tuple(draw(st.lists(st.integers(0, m - 1), unique=True, max_size=m))) if m else () for _ in range(n)
    )
    return Instance(ALLOCATION, n, m, prefs)


@st.composite
def ordered_graphs(draw, max_n=8):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    flips = draw(st.lists(st.booleans(), min_size=len(chosen), max_size=len(chosen)))
    return OrderedGraph(n, tuple((v, u) if f else (u, v) for (u, v), f in zip(chosen, flips)))


@st.composite
def functional_graphs(draw, max_n=40):
    from housemarket.cycles import FunctionalGraph

    n = draw(st.integers(1, max_n))
    return FunctionalGraph(tuple(draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))))
