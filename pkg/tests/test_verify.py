import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import EXAMPLE_CORE, EXAMPLE_NONCORE, allocations, markets
from housemarket.market import InstanceError, InvalidMatchingError, allocation, market, parse_instance
from housemarket.oracles import BudgetExceeded, EnumerationBudget, enumerate_matchings, find_coalition, is_pareto_optimal_brute
from housemarket.solvers import solve_core_ttc
from housemarket.verify import (
    DASHED,
    SOLID,
    CoalitionCertificate,
    Improvement,
    brute_force_core,
    core_graph,
    envy_graph,
    verify_core,
    verify_ir,
    verify_pareto,
)


def _check_certificate(inst, mu, cert: CoalitionCertificate):
    """The certificate is a cycle of the exchange digraph and a coalition in the direct sense."""
    adj, dashed = core_graph(inst, mu)
    k = len(cert.cycle)
    assert len(set(cert.cycle)) == k
    assert DASHED in cert.arc_kinds
    for i, kind in enumerate(cert.arc_kinds):
        u, v = cert.cycle[i], cert.cycle[(i + 1) % k]
        assert v in adj[u]
        if kind == SOLID:
            assert mu[u] == inst.endowment[v]
        else:
            assert (u, v) in dashed
    nu = cert.reallocation(inst)
    assert set(nu.values()) == {inst.endowment[a] for a in cert.cycle}
    assert all(not inst.prefers(a, mu[a], nu[a]) for a in cert.cycle)
    assert any(inst.prefers(a, nu[a], mu[a]) for a in cert.cycle)


def _check_improvement(inst, mu, imp: Improvement):
    nu = imp.apply(mu)
    assert len(set(nu.values())) == len(nu)
    assert all(inst.acceptable(a, h) for a, h in nu.items())
    assert all(inst.prefers(a, nu[a], mu.get(a)) for a in imp.agents)


# -- individual rationality --------------------------------------------------


def test_ir_example_market(example_market):
    assert verify_ir(example_market, EXAMPLE_NONCORE)
    assert verify_ir(example_market, {0: 0, 1: 1, 2: 2})
    assert verify_ir(example_market, {0: 0, 1: 2, 2: 1})
    assert verify_ir(example_market, {0: 2, 1: 0, 2: 1})


def test_ir_fails_when_someone_loses():
    inst = market([[0, 1], [0, 1]])
    assert not verify_ir(inst, {0: 1, 1: 0})


def test_ir_needs_perfect_matching(example_market):
    with pytest.raises(InvalidMatchingError):
        verify_ir(example_market, {0: 1})


def test_ir_needs_market():
    with pytest.raises(InstanceError):
        verify_ir(allocation([[0]]), {0: 0})


# -- Pareto optimality -------------------------------------------------------


def test_pareto_example_market(example_market):
    assert verify_pareto(example_market, EXAMPLE_CORE)
    assert verify_pareto(example_market, EXAMPLE_NONCORE)


def test_pareto_two_cycle_witness():
    inst = market([[1, 0], [0, 1]])
    verdict = verify_pareto(inst, {0: 0, 1: 1})
    assert not verdict
    assert verdict.witness.kind == "cycle"
    assert sorted(verdict.witness.agents) == [0, 1]
    _check_improvement(inst, {0: 0, 1: 1}, verdict.witness)


def test_pareto_trade_in_and_unmatched():
    inst = allocation([[1, 0], [0]], n_houses=2)
    v = verify_pareto(inst, {0: 0})
    assert not v and v.witness.kind in ("trade-in", "unmatched")
    v = verify_pareto(allocation([[0], [1]], 2), {0: 0})
    assert not v and v.witness.kind == "unmatched"


def test_envy_graph_has_no_self_arcs(example_market):
    adj = envy_graph(example_market, EXAMPLE_NONCORE)
    assert all(u not in adj[u] for u in range(3))


@given(markets(max_n=6), st.randoms(use_true_random=False))
def test_pareto_agrees_with_brute_force_markets(inst, rnd):
    all_m = list(enumerate_matchings(inst))
    mu = rnd.choice(all_m)
    verdict = verify_pareto(inst, mu)
    assert verdict.holds == is_pareto_optimal_brute(inst, mu)
    if not verdict:
        _check_improvement(inst, mu, verdict.witness)


@given(allocations(max_agents=6, max_houses=6), st.randoms(use_true_random=False))
def test_pareto_agrees_with_brute_force_allocations(inst, rnd):
    mu = rnd.choice(list(enumerate_matchings(inst)))
    verdict = verify_pareto(inst, mu)
    assert verdict.holds == is_pareto_optimal_brute(inst, mu)
    if not verdict:
        _check_improvement(inst, mu, verdict.witness)


def test_pareto_matches_frozen(golden):
    for case in golden["pareto"]:
        inst = parse_instance(case["instance"])
        assert verify_pareto(inst, dict(map(tuple, case["matching"]))).holds == case["pareto"]


# -- core --------------------------------------------------------------------


def test_core_rejects_noncore(example_market):
    verdict = verify_core(example_market, EXAMPLE_NONCORE)
    assert not verdict
    assert set(verdict.witness.cycle) == {0, 1}
    kinds = dict(zip(verdict.witness.cycle, verdict.witness.arc_kinds))
    assert kinds == {1: DASHED, 0: SOLID}
    _check_certificate(example_market, EXAMPLE_NONCORE, verdict.witness)


def test_core_accepts_m2(example_market):
    assert verify_core(example_market, EXAMPLE_CORE)


@given(markets(max_n=6), st.randoms(use_true_random=False))
def test_core_agrees_with_coalition_search(inst, rnd):
    mu = rnd.choice(list(enumerate_matchings(inst)))
    verdict = verify_core(inst, mu)
    assert verdict.holds == (find_coalition(inst, mu) is None)
    if verdict:
        # core implies individually rational and Pareto optimal
        assert verify_ir(inst, mu) and verify_pareto(inst, mu)
    else:
        _check_certificate(inst, mu, verdict.witness)


def test_brute_force_core_example_market(example_market):
    assert brute_force_core(example_market) == EXAMPLE_CORE


def test_brute_force_core_identity():
    inst = market([[0, 1, 2], [1, 0], [2]])
    assert brute_force_core(inst) == {0: 0, 1: 1, 2: 2}


def test_brute_force_core_budget():
    inst = market([[i] for i in range(9)])
    with pytest.raises(BudgetExceeded):
        brute_force_core(inst)
    with pytest.raises(BudgetExceeded):
        brute_force_core(market([[0], [1]]), EnumerationBudget(max_agents=1))


@given(markets(max_n=6))
def test_brute_force_core_equals_ttc(inst):
    assert brute_force_core(inst) == solve_core_ttc(inst)[0]


def test_core_on_random_larger_markets():
    rng = random.Random(11)
    from housemarket.market import MARKET, generate_instance

    for seed in range(200):
        n = rng.randint(2, 40)
        inst = generate_instance(MARKET, n, n, n, seed)
        mu = solve_core_ttc(inst)[0]
        assert verify_core(inst, mu)
        # rotating two traded agents off the core breaks core membership whenever it stays IR
        perm = dict(mu)
        a, b = rng.sample(range(n), 2)
        if inst.acceptable(a, perm[b]) and inst.acceptable(b, perm[a]):
            perm[a], perm[b] = perm[b], perm[a]
            verdict = verify_core(inst, perm)
            assert not verdict
            _check_certificate(inst, perm, verdict.witness)
