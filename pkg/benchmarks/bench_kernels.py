"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Both backends are imported directly, so no environment flag is needed; the
library itself picks the compiled one unless EVENDICYCLE_PURE=1 is set.
"""
import argparse
import random
import timeit

from evendicycle import _pykernels
from evendicycle.core import random_digraph

try:
    from evendicycle import _ckernels
except ImportError:
    _ckernels = None


def cycle_cases():
    rng = random.Random(0)
    complete = {n: [[w for w in range(n) if w != v] for v in range(n)] for n in (7, 8, 9)}
    cases = [(f"complete digraph n={n}", n, adj) for n, adj in complete.items()]
    for n, p in ((11, 0.45), (13, 0.35)):
        D = random_digraph(n, p, rng)
        cases.append((f"random n={n} p={p}", n, D.index_adjacency()))
    return cases


def matching_cases():
    rng = random.Random(1)
    cases = []
    for n in (12, 16, 18):
        adj = [sum(1 << j for j in range(n) if rng.random() < 0.5) | (1 << i) for i in range(n)]
        cases.append((f"bipartite n={n}+{n} p=0.5", n, adj))
    return cases


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels are not built; only the pure-Python timings are shown")
    rows = []
    for label, n, adj in cycle_cases():
        slow = best(lambda: _pykernels.simple_cycles(n, adj, 10 ** 7), args.repeat)
        fast = best(lambda: _ckernels.simple_cycles(n, adj, 10 ** 7), args.repeat) if _ckernels else None
        count = len(_pykernels.simple_cycles(n, adj, 10 ** 7))
        rows.append(("simple_cycles", f"{label} ({count} cycles)", slow, fast))
    for label, n, adj in matching_cases():
        slow = best(lambda: _pykernels.count_perfect_matchings(n, adj), args.repeat)
        fast = best(lambda: _ckernels.count_perfect_matchings(n, adj), args.repeat) if _ckernels else None
        rows.append(("count_perfect_matchings", label, slow, fast))
    print(f"{'kernel':<24} {'case':<44} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for kernel, label, slow, fast in rows:
        fast_s = f"{fast:10.4f}" if fast is not None else f"{'-':>10}"
        speed = f"{slow / fast:7.1f}x" if fast else f"{'-':>8}"
        print(f"{kernel:<24} {label:<44} {slow:10.4f} {fast_s} {speed}")


if __name__ == "__main__":
    main()
