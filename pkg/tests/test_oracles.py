import ast
import random
from math import comb, factorial
from pathlib import Path

import pytest

from conftest import EXAMPLE_PREFS
from housemarket import oracles
from housemarket.market import allocation, market
from housemarket.oracles import (
    BudgetExceeded,
    EnumerationBudget,
    brute_cycles,
    brute_max_matching,
    dominates,
    enumerate_matchings,
    max_matching_oracle,
)


def test_oracles_share_no_code_with_algorithms():
    tree = ast.parse(Path(oracles.__file__).read_text())
    imported = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            imported.add(node.module)
        elif isinstance(node, ast.Import):
            imported.update(a.name for a in node.names)
    assert imported <= {"__future__", "dataclasses", "itertools", "typing", "market"}


def test_max_matching_complete():
    edges = [(i, j) for i in range(3) for j in range(3)]
    assert max_matching_oracle(3, 3, edges)[0] == 3


def test_max_matching_star():
    assert max_matching_oracle(1, 3, [(0, 0), (0, 1), (0, 2)])[0] == 1


@pytest.mark.parametrize("seed", range(25))
def test_max_matching_equals_exhaustive(seed):
    rng = random.Random(seed)
    nl, nr = rng.randint(1, 7), rng.randint(1, 7)
    edges = [(i, j) for i in range(nl) for j in range(nr) if rng.random() < 0.25]
    size, match = max_matching_oracle(nl, nr, edges)
    assert size == brute_max_matching(nl, nr, edges)
    assert len(set(match.values())) == size
    assert all((i, j) in edges for i, j in match.items())


def test_max_matching_matches_frozen(golden):
    for case in golden["max_matching"]:
        edges = [tuple(e) for e in case["edges"]]
        assert max_matching_oracle(case["left"], case["right"], edges)[0] == case["max"]


def test_enumerate_one_agent():
    assert list(enumerate_matchings(allocation([[0]]))) == [{}, {0: 0}]


def test_enumerate_example_market_perfect():
    found = list(enumerate_matchings(market(EXAMPLE_PREFS)))
    assert len(found) == 6
    assert len({tuple(sorted(m.items())) for m in found}) == 6


def test_enumerate_empty():
    assert list(enumerate_matchings(allocation([], 0))) == [{}]


@pytest.mark.parametrize("n", range(0, 6))
def test_enumerate_closed_form(n):
    inst = allocation([list(range(n))] * n, n)
    expected = sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))
    found = list(enumerate_matchings(inst))
    assert len(found) == expected
    assert len({tuple(sorted(m.items())) for m in found}) == expected


def test_enumeration_budgets_are_hard_errors():
    with pytest.raises(BudgetExceeded):
        list(enumerate_matchings(allocation([[0]] * 3, 1), budget=EnumerationBudget(max_agents=2)))
    with pytest.raises(BudgetExceeded):
        list(enumerate_matchings(allocation([list(range(4))] * 4, 4), budget=EnumerationBudget(max_matchings=10)))


def test_dominates():
    inst = market(EXAMPLE_PREFS)
    assert dominates(inst, {0: 1, 1: 0, 2: 2}, {0: 1, 1: 2, 2: 0}) is False
    assert dominates(inst, {0: 2, 1: 0, 2: 1}, {0: 0, 1: 2, 2: 1})
    assert not dominates(inst, {0: 0, 1: 1, 2: 2}, {0: 0, 1: 1, 2: 2})


def test_brute_cycles():
    assert brute_cycles([0]) == [[0]]
    assert brute_cycles([1, 2, 0]) == [[0, 1, 2]]
    assert brute_cycles([1, 2, 1, 0]) == [[1, 2]]
