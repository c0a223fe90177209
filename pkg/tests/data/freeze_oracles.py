"""Regenerate oracle_golden.json from the brute-force oracles alone.

The file is frozen: tests compare the fast algorithms against it, so it
should only change when an oracle itself is found to be wrong.

    python3 tests/data/freeze_oracles.py
"""

import json
import random
from pathlib import Path

from housemarket.market import ALLOCATION, MARKET, generate_instance, serialize_instance
from housemarket.oracles import (
    brute_lfmm,
    brute_max_matching,
    brute_min_weight_perfect,
    coalition_free_matchings,
    enumerate_matchings,
    is_pareto_optimal_brute,
)

OUT = Path(__file__).with_name("oracle_golden.json")


def main():
    rng = random.Random(20240611)
    core = []
    for seed in range(80):
        n = 1 + seed % 5
        inst = generate_instance(MARKET, n, n, n, seed)
        found = coalition_free_matchings(inst)
        core.append({"instance": serialize_instance(inst), "core": [[a, h] for a, h in sorted(found[0].items())], "count": len(found)})

    pareto = []
    for seed in range(60):
        n, m = 1 + seed % 4, 1 + (seed // 4) % 4
        inst = generate_instance(ALLOCATION, n, m, m, 1000 + seed)
        all_m = list(enumerate_matchings(inst))
        mu = all_m[rng.randrange(len(all_m))]
        pareto.append({"instance": serialize_instance(inst), "matching": sorted(mu.items()), "pareto": is_pareto_optimal_brute(inst, mu)})

    lfmm = []
    for _ in range(60):
        n = rng.randint(2, 7)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.45]
        rng.shuffle(edges)
        lfmm.append({"n": n, "edges": edges, "lfmm": list(brute_lfmm(n, edges))})

    weights = []
    for _ in range(40):
        n = rng.randint(1, 6)
        edges = [(i, j, rng.randrange(10)) for i in range(n) for j in range(n) if rng.random() < 0.6]
        weights.append({"n": n, "edges": edges, "min": brute_min_weight_perfect(n, edges)})

    cards = []
    for _ in range(40):
        nl, nr = rng.randint(1, 5), rng.randint(1, 5)
        edges = [(i, j) for i in range(nl) for j in range(nr) if rng.random() < 0.35]
        cards.append({"left": nl, "right": nr, "edges": edges, "max": brute_max_matching(nl, nr, edges)})

    data = {"core": core, "pareto": pareto, "lfmm": lfmm, "min_weight": weights, "max_matching": cards}
    OUT.write_text(json.dumps(data, indent=1) + "\n")


if __name__ == "__main__":
    main()
