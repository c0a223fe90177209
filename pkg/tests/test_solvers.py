import random

import pytest
from hypothesis import given

from conftest import EXAMPLE_CORE, EXAMPLE_PREFS, EXAMPLE_EDGES, U1, U2, V1, V2, allocations, markets
from housemarket.lfmm import OrderedGraph, reduce_lfmm_to_market
from housemarket.market import ALLOCATION, MARKET, InstanceError, allocation, as_allocation, generate_instance, market, parse_instance
from housemarket.oracles import (
    brute_min_weight_perfect,
    coalition_free_matchings,
    find_dominating,
    max_matching_oracle,
)
from housemarket.solvers import (
    NoPerfectMatchingError,
    WeightedBipartiteGraph,
    format_stage_trace,
    irpo_graph,
    min_weight_perfect_matching,
    serial_dictatorship,
    solve_core_ttc,
    solve_irpo_market,
    solve_max_pareto,
    top_choice_graph,
)
from housemarket.verify import verify_core, verify_ir, verify_pareto


# -- serial dictatorship ----------------------------------------------------


def test_sd_example_market_id_order():
    assert serial_dictatorship(allocation(EXAMPLE_PREFS), [0, 1, 2]) == {0: 1, 1: 0, 2: 2}


def test_sd_example_market_reverse_order():
    assert serial_dictatorship(allocation(EXAMPLE_PREFS), [2, 1, 0]) == {2: 0, 1: 2, 0: 1}


def test_sd_single_agent():
    assert serial_dictatorship(allocation([[0]]), [0]) == {0: 0}


def test_sd_rejects_bad_order():
    with pytest.raises(ValueError):
        serial_dictatorship(allocation(EXAMPLE_PREFS), [0, 0, 1])


@given(allocations(max_agents=7, max_houses=7))
def test_sd_is_pareto_optimal(inst):
    mu = serial_dictatorship(inst)
    assert verify_pareto(inst, mu)
    if inst.n_agents <= 6 and inst.n_houses <= 6:
        assert find_dominating(inst, mu) is None


# -- top trading cycles -----------------------------------------------------


def test_ttc_example_market():
    mu, trace = solve_core_ttc(market(EXAMPLE_PREFS))
    assert mu == EXAMPLE_CORE
    assert trace == [[(0, 1)], [(2,)]]


def test_ttc_identity():
    inst = market([[0, 1], [1, 0], [2]])
    mu, trace = solve_core_ttc(inst)
    assert mu == {0: 0, 1: 1, 2: 2}
    assert trace == [[(0,), (1,), (2,)]]


def test_ttc_example_graph_market():
    inst, _ = reduce_lfmm_to_market(OrderedGraph(4, EXAMPLE_EDGES))
    mu, trace = solve_core_ttc(inst)
    assert mu == {U1: U2, U2: U1, V1: V2, V2: V1}
    assert trace == [[(U1, U2)], [(V1, V2)]]


def test_ttc_needs_market():
    with pytest.raises(InstanceError):
        solve_core_ttc(allocation(EXAMPLE_PREFS))


def test_format_stage_trace():
    assert format_stage_trace([[(0, 1)], [(2,)]]) == "stage 0: (0 1)\nstage 1: (2)"


def test_top_choice_graph_is_functional():
    inst = market(EXAMPLE_PREFS)
    assert top_choice_graph(inst) == {0: 1, 1: 0, 2: 0}
    assert top_choice_graph(inst, frozenset({0, 1})) == {2: 2}


@given(markets(max_n=6))
def test_ttc_is_the_unique_core(inst):
    mu, trace = solve_core_ttc(inst)
    assert verify_ir(inst, mu)
    assert verify_pareto(inst, mu)
    assert verify_core(inst, mu)
    assert coalition_free_matchings(inst) == [mu]
    assert len(trace) <= inst.n_agents
    assert all(stage for stage in trace)


def test_ttc_random_markets_pass_verifiers():
    for seed in range(1000):
        n = 1 + seed % 50
        inst = generate_instance(MARKET, n, n, n, seed)
        mu, trace = solve_core_ttc(inst)
        assert verify_ir(inst, mu) and verify_pareto(inst, mu) and verify_core(inst, mu), seed


def test_ttc_matches_frozen_core(golden):
    for case in golden["core"]:
        inst = parse_instance(case["instance"])
        assert case["count"] == 1
        assert solve_core_ttc(inst)[0] == {a: h for a, h in case["core"]}


# -- min-weight perfect matching -------------------------------------------


def test_mwpm_single_edge():
    g = WeightedBipartiteGraph(1, 1, ((0, 0, 7),))
    mu = min_weight_perfect_matching(g)
    assert mu == {0: 0} and g.weight(mu) == 7


def test_mwpm_two_by_two():
    g = WeightedBipartiteGraph(2, 2, ((0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)))
    mu = min_weight_perfect_matching(g)
    assert mu == {0: 1, 1: 0} and g.weight(mu) == 4


def test_mwpm_isolated_vertex():
    edges = tuple((i, j, 1) for i in range(3) for j in range(2))
    with pytest.raises(NoPerfectMatchingError):
        min_weight_perfect_matching(WeightedBipartiteGraph(3, 3, edges))


def test_mwpm_unequal_sides():
    with pytest.raises(NoPerfectMatchingError):
        min_weight_perfect_matching(WeightedBipartiteGraph(1, 2, ((0, 0, 1),)))


def test_weighted_graph_validation():
    with pytest.raises(ValueError):
        WeightedBipartiteGraph(1, 1, ((0, 0, 1), (0, 0, 2)))
    with pytest.raises(ValueError):
        WeightedBipartiteGraph(1, 1, ((0, 0, -1),))


def test_mwpm_matches_frozen_minimum(golden):
    for case in golden["min_weight"]:
        g = WeightedBipartiteGraph(case["n"], case["n"], tuple(map(tuple, case["edges"])))
        if case["min"] is None:
            with pytest.raises(NoPerfectMatchingError):
                min_weight_perfect_matching(g)
        else:
            assert g.weight(min_weight_perfect_matching(g)) == case["min"]


@pytest.mark.parametrize("seed", range(30))
def test_mwpm_equals_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    edges = tuple((i, j, rng.randrange(15)) for i in range(n) for j in range(n) if rng.random() < 0.7)
    best = brute_min_weight_perfect(n, edges)
    g = WeightedBipartiteGraph(n, n, edges)
    if best is None:
        with pytest.raises(NoPerfectMatchingError):
            min_weight_perfect_matching(g)
    else:
        assert g.weight(min_weight_perfect_matching(g)) == best


# -- IR + Pareto optimal market matching -----------------------------------


def test_irpo_example_market():
    inst = market(EXAMPLE_PREFS)
    mu = solve_irpo_market(inst)
    assert verify_ir(inst, mu) and verify_pareto(inst, mu)
    assert find_dominating(inst, mu) is None


def test_irpo_identity():
    inst = market([[0, 1], [1, 0]])
    assert solve_irpo_market(inst) == {0: 0, 1: 1}


def test_irpo_swap():
    assert solve_irpo_market(market([[1, 0], [0, 1]])) == {0: 1, 1: 0}


def test_irpo_graph_stops_at_endowment():
    g = irpo_graph(market([[1, 0, 2], [1], [0, 1, 2]], endowment=[0, 1, 2]))
    assert g.edges == ((0, 1, 0), (0, 0, 1), (1, 1, 0), (2, 0, 0), (2, 1, 1), (2, 2, 2))


@given(markets(max_n=6))
def test_irpo_is_ir_and_pareto(inst):
    mu = solve_irpo_market(inst)
    assert verify_ir(inst, mu)
    assert verify_pareto(inst, mu)
    assert find_dominating(inst, mu) is None


# -- maximum-cardinality Pareto optimal ------------------------------------


def test_maxpom_shared_favourite():
    inst = allocation([[0], [0], [1, 0]], n_houses=2)
    mu = solve_max_pareto(inst)
    assert len(mu) == 2
    assert mu[2] == 1
    assert find_dominating(inst, mu) is None


def test_maxpom_example_market():
    inst = as_allocation(market(EXAMPLE_PREFS))
    mu = solve_max_pareto(inst)
    assert len(mu) == 3
    assert verify_pareto(inst, mu)
    assert find_dominating(inst, mu) is None


def test_maxpom_empty():
    assert solve_max_pareto(allocation([], n_houses=0)) == {}


def test_maxpom_needs_allocation():
    with pytest.raises(InstanceError):
        solve_max_pareto(market(EXAMPLE_PREFS))


@given(allocations(max_agents=6, max_houses=6))
def test_maxpom_properties(inst):
    mu = solve_max_pareto(inst)
    size, _ = max_matching_oracle(inst.n_agents, inst.n_houses, [(a, h) for a in range(inst.n_agents) for h in inst.prefs[a]])
    assert len(mu) == size
    assert verify_pareto(inst, mu)
    assert find_dominating(inst, mu) is None


def test_maxpom_random_allocations():
    for seed in range(300):
        inst = generate_instance(ALLOCATION, 1 + seed % 50, 1 + (seed * 7) % 50, 1 + seed % 9, seed)
        mu = solve_max_pareto(inst)
        size, _ = max_matching_oracle(inst.n_agents, inst.n_houses, [(a, h) for a in range(inst.n_agents) for h in inst.prefs[a]])
        assert len(mu) == size, seed
        assert verify_pareto(inst, mu), seed
