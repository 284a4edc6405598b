import math
import os
import random
import subprocess
import sys

import networkx as nx
import pytest

from evendicycle import _pykernels, kernels
from evendicycle.core import random_digraph

ckernels = pytest.importorskip("evendicycle._ckernels")


def adjacency(D):
    return D.index_adjacency()


def normalised(cycles):
    return sorted(cycles)


def test_backend_is_compiled_by_default():
    if os.environ.get("EVENDICYCLE_PURE"):
        assert kernels.BACKEND == "python"
    else:
        assert kernels.BACKEND == "cython"


def test_pure_flag_forces_python_backend():
    proc = subprocess.run([sys.executable, "-c", "import evendicycle.kernels as k; print(k.BACKEND)"],
                          env={**os.environ, "EVENDICYCLE_PURE": "1"}, capture_output=True, text=True)
    assert proc.stdout.strip() == "python"


def test_simple_cycles_backends_agree_with_networkx():
    rng = random.Random(0)
    for _ in range(150):
        D = random_digraph(rng.randint(1, 9), rng.uniform(0.1, 0.7), rng)
        adj = adjacency(D)
        fast = ckernels.simple_cycles(D.n, adj, 10 ** 6)
        slow = _pykernels.simple_cycles(D.n, adj, 10 ** 6)
        assert normalised(fast) == normalised(slow)
        assert all(c[0] == min(c) for c in fast)
        G = nx.DiGraph([(u, v) for u in range(D.n) for v in adj[u]])
        assert len(fast) == sum(1 for _ in nx.simple_cycles(G))


def test_simple_cycles_on_complete_digraphs():
    for n in range(2, 8):
        adj = [[w for w in range(n) if w != v] for v in range(n)]
        expected = sum(math.comb(n, k) * math.factorial(k - 1) for k in range(2, n + 1))
        assert len(ckernels.simple_cycles(n, adj, 10 ** 6)) == expected
        assert len(_pykernels.simple_cycles(n, adj, 10 ** 6)) == expected


@pytest.mark.parametrize("impl", [ckernels.simple_cycles, _pykernels.simple_cycles])
def test_simple_cycles_cap_keeps_partial(impl):
    n = 6
    adj = [[w for w in range(n) if w != v] for v in range(n)]
    with pytest.raises(kernels.KernelCapExceeded) as exc:
        impl(n, adj, 10)
    assert len(exc.value.partial) == 10
    assert len(set(exc.value.partial)) == 10
    assert len(impl(n, adj, 409)) == 409


def test_count_perfect_matchings_backends_agree():
    rng = random.Random(1)
    for _ in range(200):
        n = rng.randint(0, 10)
        adj = [sum(1 << j for j in range(n) if rng.random() < 0.5) for _ in range(n)]
        assert ckernels.count_perfect_matchings(n, adj) == _pykernels.count_perfect_matchings(n, adj)


def test_count_perfect_matchings_complete_bipartite():
    for n in range(0, 13):
        full = [(1 << n) - 1] * n
        assert ckernels.count_perfect_matchings(n, full) == math.factorial(n)
        assert _pykernels.count_perfect_matchings(n, full) == math.factorial(n)


def test_dispatch_avoids_overflow_beyond_twenty():
    n = 21
    # a lone perfect matching
    adj = [1 << i for i in range(n)]
    assert kernels.count_perfect_matchings(n, adj) == 1
