"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--sizes 100,200,400] [--repeats 3]
"""

import argparse

from housemarket import kernels
from housemarket.bench import time_kernels


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,200,400")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not kernels.COMPILED:
        print("compiled kernels are not built; only the pure-Python timings are shown")
    print(f"{'n':>5} {'kernel':<18} {'pure ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        t = time_kernels(n, args.repeats, args.seed)
        for kname, pure in t["python"].items():
            comp = t.get("compiled", {}).get(kname)
            if comp is None:
                print(f"{n:>5} {kname:<18} {pure:>10.3f} {'-':>12} {'-':>8}")
            else:
                print(f"{n:>5} {kname:<18} {pure:>10.3f} {comp:>12.3f} {pure / max(comp, 1e-3):>7.1f}x")


if __name__ == "__main__":
    main()
