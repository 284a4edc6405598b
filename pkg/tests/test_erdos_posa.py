import itertools
import json
import random

import networkx as nx
import pytest

from evendicycle.core import Dicycle, Digraph, random_digraph
from evendicycle.decomposition import DirTreeDecomposition, brute_force_dtw, validate_odd_dtd
from evendicycle.errors import GateExceeded, PreconditionError, VerificationFailure
from evendicycle.evenness import f7, odd_bicycle
from evendicycle.erdos_posa import (
    FractionalPacking,
    Transversal,
    audit_global,
    count_pm_via_transversal,
    counterexample_family,
    ddpp_solution_ok,
    extract_low_dtw,
    extract_main,
    global_decompose,
    max_packing,
    min_transversal,
    radial_cut,
    t_ddpp,
    verify_packing,
)
from evendicycle.matching import c4, heawood_graph, split
from helpers import (
    block_decomposition,
    dicycles_by_permutation,
    pm_count_by_permutation,
    random_matched_bipartite,
)


def even_vertex_sets(D):
    return [frozenset(c) for c in dicycles_by_permutation(D) if len(c) % 2 == 0]


def brute_packing(D, n):
    """Largest number of distinct even dicycles with every vertex used at most n times."""
    cycles = [c for c in dicycles_by_permutation(D) if len(c) % 2 == 0]
    best = 0

    def rec(i, load, count):
        nonlocal best
        best = max(best, count)
        if count + len(cycles) - i <= best:
            return
        for j in range(i, len(cycles)):
            if all(load.get(v, 0) < n for v in cycles[j]):
                for v in cycles[j]:
                    load[v] = load.get(v, 0) + 1
                rec(j + 1, load, count + 1)
                for v in cycles[j]:
                    load[v] -= 1

    rec(0, {}, 0)
    return best


def brute_transversal(D):
    sets = even_vertex_sets(D)
    for size in range(D.n + 1):
        for S in itertools.combinations(D.vertices, size):
            if all(c & set(S) for c in sets):
                return size


def brute_ddpp(D, pairs):
    G = nx.DiGraph(list(D.edges))
    G.add_nodes_from(D.vertices)
    choices = []
    for s, t in pairs:
        if s == t:
            choices.append([[s]])
        else:
            choices.append([p for p in nx.all_simple_paths(G, s, t)])
    return any(ddpp_solution_ok(D, pairs, combo) for combo in itertools.product(*choices))


def test_odd_bicycle_packing_and_transversal():
    ob = odd_bicycle(3)
    assert len(max_packing(ob, 1)) == 1
    assert len(max_packing(ob, 2)) == brute_packing(ob, 2)
    assert len(min_transversal(ob)) == brute_transversal(ob)


def test_packing_and_transversal_against_brute_force():
    rng = random.Random(2)
    for _ in range(80):
        D = random_digraph(rng.randint(1, 7), rng.uniform(0.2, 0.5), rng)
        for n in (1, 2):
            p = max_packing(D, n)
            assert verify_packing(D, p, len(p), n)
            assert len(p) == brute_packing(D, n)
        T = min_transversal(D)
        assert T.verify(D) and len(T) == brute_transversal(D)


def test_packing_target_stops_early():
    D = odd_bicycle(5)
    assert len(max_packing(D, 4, target=2)) >= 2
    with pytest.raises(PreconditionError):
        max_packing(D, 0)


def test_verify_packing_rejects_duplicates_and_overuse():
    D = Digraph("ab", [("a", "b"), ("b", "a")])
    C = Dicycle(("a", "b"))
    assert verify_packing(D, FractionalPacking((C,), 1), 1, 1)
    assert not verify_packing(D, FractionalPacking((C, Dicycle(("b", "a"))), 2), 2, 2)
    assert not verify_packing(D, FractionalPacking((C,), 1), 2, 1)


def test_packing_json():
    D = odd_bicycle(3)
    data = json.loads(json.dumps(max_packing(D, 2).to_json({"oracle": "test"})))
    assert data["kind"] == "packing" and data["provenance"] == {"oracle": "test"}
    T = min_transversal(D)
    assert json.loads(json.dumps(T.to_json(D)))["vertices"] == T.sorted(D)


def test_extract_low_dtw():
    rng = random.Random(7)
    for _ in range(150):
        D = random_digraph(rng.randint(1, 6), rng.uniform(0.2, 0.6), rng)
        dec = brute_force_dtw(D).decomposition
        width = brute_force_dtw(D).width
        exact = brute_packing(D, 1)
        for t in (1, 2, 3):
            r = extract_low_dtw(D, dec, t)
            if r.packing is not None:
                assert verify_packing(D, r.packing, t, 1)
            else:
                assert r.transversal.verify(D)
                assert len(r.transversal) <= (width + 1) * (t - 1)
                assert exact < t or len(r.transversal) >= brute_transversal(D)


def test_extract_low_dtw_rejects_invalid_decomposition():
    D = Digraph(range(4), [(i, (i + 1) % 4) for i in range(4)])
    dec = DirTreeDecomposition(0, {1: 0}, {0: frozenset([0, 1]), 1: frozenset([2, 3])}, {(0, 1): frozenset()})
    with pytest.raises(VerificationFailure):
        extract_low_dtw(D, dec, 1)


def test_extract_main_on_built_decompositions():
    rng = random.Random(4)
    done = 0
    seen = set()
    while done < 60:
        got = block_decomposition(rng)
        if got is None:
            continue
        D, dec = got
        done += 1
        for k in (1, 2, 3):
            r = extract_main(D, dec, k)
            seen.add(r.kind)
            if r.packing is not None:
                assert verify_packing(D, r.packing, k, 4)
            else:
                assert r.transversal.verify(D) and len(r.transversal) <= r.bound
            json.dumps(r.to_json(D))
    assert seen == {"packing", "transversal"}


def test_extract_main_needs_alpha():
    D = odd_bicycle(3)
    with pytest.raises(PreconditionError):
        extract_main(D, DirTreeDecomposition(0, {}, {0: frozenset(D.vertices)}, {}), 1)


def test_global_decompose_audits():
    rng = random.Random(11)
    outcomes = set()
    for _ in range(60):
        n = rng.randint(2, 12)
        D = random_digraph(n, rng.uniform(0.1, 0.4), rng)
        k = rng.randint(1, 3)
        Z = frozenset(rng.sample(D.vertices, rng.randint(0, min(3, n))))
        res = global_decompose(D, k, Z, linkedness=rng.choice([None, 1, 2]))
        if res.packing is not None:
            outcomes.add("packing")
            assert verify_packing(D, res.packing, k, 4)
            continue
        outcomes.add("decomposition")
        assert audit_global(D, res) == []
        assert validate_odd_dtd(D, res.decomposition, strong=True).ok
        back = DirTreeDecomposition.from_json(json.loads(json.dumps(res.decomposition.to_json())))
        assert back == res.decomposition
        e = extract_main(D, res.decomposition, k)
        if e.packing is not None:
            assert verify_packing(D, e.packing, k, 4)
        else:
            assert e.transversal.verify(D)
    assert outcomes == {"packing", "decomposition"}


def test_global_decompose_returns_packing_when_one_exists():
    D = odd_bicycle(5)
    res = global_decompose(D, 2, linkedness=1)
    assert res.decomposition is None and res.oracle_calls == 1
    assert verify_packing(D, res.packing, 2, 4)
    assert audit_global(D, res) == []


def test_global_decompose_linked_non_even_digraph_uses_oracle():
    D = f7()
    res = global_decompose(D, 1, list(D.vertices[:3]))
    assert res.oracle_calls == 1 and res.decomposition is not None
    assert audit_global(D, res) == []
    assert res.decomposition.alpha[res.decomposition.root] == frozenset(D.vertices[:3])


def test_global_decompose_preconditions():
    D = odd_bicycle(3)
    with pytest.raises(PreconditionError):
        global_decompose(D, 1, ["nope"])
    with pytest.raises(GateExceeded):
        global_decompose(odd_bicycle(13), 1)


def test_audit_flags_tampered_result():
    D = odd_bicycle(3)
    res = global_decompose(D, 2, [])
    assert res.decomposition is not None
    dec = res.decomposition
    broken = DirTreeDecomposition(dec.root, dec.parent, dec.bags, dec.guards,
                                  {t: frozenset() for t in dec.bags})
    res2 = type(res)(broken, None, frozenset(D.vertices), res.linkedness, res.bound)
    assert audit_global(D, res2)


@pytest.mark.parametrize("k", [2, 3])
def test_counterexample_family(k):
    D = counterexample_family(k, certify_up_to=0)
    sets = even_vertex_sets(D) if D.n <= 9 else None
    assert len(max_packing(D, 1, target=2)) == 1
    T = min_transversal(D)
    assert len(T) >= k
    cut = Transversal(radial_cut(k))
    assert cut.verify(D) and len(cut) == k
    assert sets is None or sets


def test_counterexample_precondition():
    with pytest.raises(PreconditionError):
        counterexample_family(1)


def test_t_ddpp_against_path_product():
    rng = random.Random(9)
    both = set()
    for _ in range(120):
        D = random_digraph(rng.randint(2, 8), rng.uniform(0.2, 0.5), rng)
        r = rng.randint(1, min(4, D.n // 2))
        ends = rng.sample(D.vertices, 2 * r)
        pairs = [(ends[2 * i], ends[2 * i + 1]) for i in range(r)]
        got = t_ddpp(D, pairs)
        if got is not None:
            assert ddpp_solution_ok(D, pairs, got)
        assert (got is not None) == brute_ddpp(D, pairs)
        both.add(got is not None)
    assert both == {True, False}


def test_t_ddpp_preconditions():
    D = odd_bicycle(3)
    with pytest.raises(PreconditionError):
        t_ddpp(D, [(0, 0)] * 5)
    with pytest.raises(PreconditionError):
        t_ddpp(D, [("nope", D.vertices[0])])


def test_count_pm_named_graphs():
    r = count_pm_via_transversal(heawood_graph())
    assert r.direct == r.stratified == 24
    r = count_pm_via_transversal(c4())
    assert r.direct == r.stratified == 2
    r = count_pm_via_transversal(split(Digraph([0, 1], [(0, 1), (1, 0)])))
    assert r.direct == r.stratified == 2


def test_count_pm_random():
    rng = random.Random(5)
    for _ in range(60):
        B = random_matched_bipartite(rng, rng.randint(1, 6), rng.uniform(0.1, 0.6))
        r = count_pm_via_transversal(B)
        assert r.direct == r.stratified == pm_count_by_permutation(B)
