import itertools
import json
import random

import networkx as nx
import pytest
from hypothesis import given

from evendicycle.core import Digraph, enumerate_directed_separations, random_digraph
from evendicycle.decomposition import (
    DirTreeDecomposition,
    balanced_separator,
    brute_force_dtw,
    directed_separations,
    dtd_width,
    guards_dicycles,
    is_balanced_separator,
    is_k_linked,
    is_well_linked,
    linked_set_tangle,
    odd_dtd_width,
    orientation_is_tangle,
    single_bag,
    strongly_guards,
    validate_dtd,
    validate_odd_dtd,
    wall_tangle,
    with_full_alpha,
)
from evendicycle.errors import GateExceeded, PreconditionError
from evendicycle.evenness import odd_bicycle
from evendicycle.walls import cylindrical_wall
from strategies import digraphs


def dicycle_graph(n):
    return Digraph(range(n), [(i, (i + 1) % n) for i in range(n)])


def complete_digraph(n):
    return Digraph(range(n), [(i, j) for i in range(n) for j in range(n) if i != j])


def undirected_treewidth(G: nx.Graph) -> int:
    """Treewidth as the best elimination ordering width, by trying every ordering."""
    if G.number_of_edges() == 0:
        return 0
    best = len(G)
    for order in itertools.permutations(G.nodes):
        H = G.copy()
        width = 0
        for v in order:
            nbrs = list(H[v])
            width = max(width, len(nbrs))
            H.add_edges_from(itertools.combinations(nbrs, 2))
            H.remove_node(v)
        best = min(best, width)
    return best


def test_small_widths():
    assert brute_force_dtw(Digraph([0, 1], [(0, 1), (1, 0)])).width == 1
    for n in range(3, 7):
        assert brute_force_dtw(dicycle_graph(n)).width == 1
    assert brute_force_dtw(Digraph(range(4), [(0, 1), (1, 2), (0, 3)])).width == 0
    K4 = complete_digraph(4)
    r = brute_force_dtw(K4)
    assert r.width == 3
    assert validate_dtd(K4, r.decomposition).ok and dtd_width(r.decomposition) == 3


def test_dtw_gate():
    with pytest.raises(GateExceeded):
        brute_force_dtw(dicycle_graph(9))


def test_bidirected_width_equals_undirected_treewidth():
    rng = random.Random(3)
    for _ in range(120):
        n = rng.randint(1, 6)
        G = nx.gnp_random_graph(n, rng.uniform(0.2, 0.8), seed=rng.randrange(10 ** 6))
        D = Digraph(range(n), [(u, v) for u, v in G.edges] + [(v, u) for u, v in G.edges])
        assert brute_force_dtw(D).width == undirected_treewidth(G)


def test_random_decompositions_validate():
    rng = random.Random(1)
    for _ in range(150):
        n = rng.randint(1, 6)
        D = random_digraph(n, rng.uniform(0.2, 0.6), rng)
        r = brute_force_dtw(D)
        dec = r.decomposition
        assert validate_dtd(D, dec).ok
        assert dtd_width(dec) == r.width or (r.width == 0 and dtd_width(dec) <= 0)
        assert validate_odd_dtd(D, with_full_alpha(dec)).ok
        back = DirTreeDecomposition.from_json(json.loads(json.dumps(dec.to_json())))
        assert validate_dtd(D, back).ok and dtd_width(back) == dtd_width(dec)


def test_single_bag_is_valid_for_any_digraph():
    D = odd_bicycle(5)
    dec = single_bag(D)
    assert validate_dtd(D, dec).ok
    assert dtd_width(dec) == D.n - 1


def test_validation_catches_missing_guard():
    D = dicycle_graph(4)
    dec = DirTreeDecomposition(0, {1: 0}, {0: frozenset([0, 1]), 1: frozenset([2, 3])}, {(0, 1): frozenset()})
    rep = validate_dtd(D, dec)
    assert not rep.ok and rep.violations
    fixed = DirTreeDecomposition(0, {1: 0}, {0: frozenset([0, 1]), 1: frozenset([2, 3])}, {(0, 1): frozenset([1])})
    assert validate_dtd(D, fixed).ok


def test_odd_validation_reports_even_witness():
    D = Digraph("ab", [("a", "b"), ("b", "a")])
    dec = DirTreeDecomposition(0, {}, {0: frozenset("ab")}, {}, {0: frozenset()})
    rep = validate_odd_dtd(D, dec)
    assert not rep.ok and rep.witness is not None and rep.witness.is_even
    assert odd_dtd_width(with_full_alpha(dec)) >= 1


def test_json_round_trip_with_alpha():
    dec = DirTreeDecomposition("r", {"c": "r"}, {"r": frozenset("ab"), "c": frozenset("cd")},
                               {("r", "c"): frozenset("a")}, {"r": frozenset("a"), "c": frozenset()})
    assert DirTreeDecomposition.from_json(dec.to_json()) == dec
    with pytest.raises(PreconditionError):
        DirTreeDecomposition.from_json({"schema": "other", "root": 0, "nodes": []})


def test_guard_predicates():
    D = dicycle_graph(4)
    assert guards_dicycles(D, {0}, {1, 2})
    assert not guards_dicycles(D, set(), {1, 2})
    assert strongly_guards(D, {0}, {1, 2, 3})
    assert not strongly_guards(D, set(), {1, 2})


@given(digraphs(max_n=6))
def test_directed_separations_agree_with_core(D):
    assert set(directed_separations(D, 3)) == set(enumerate_directed_separations(D, 2))


def test_wall_tangle_is_a_tangle():
    W = cylindrical_wall(3)
    T = wall_tangle(W.digraph, W, 1)
    assert T.big and orientation_is_tangle(W.digraph, 1, T)


def test_wall_tangle_order_two():
    W = cylindrical_wall(6)
    T = wall_tangle(W.digraph, W, 2)
    assert orientation_is_tangle(W.digraph, 2, T)
    for sep, side in T.big.items():
        assert T.small(sep) != side or sep.side_a == sep.side_b


def test_wall_tangle_needs_large_wall():
    W = cylindrical_wall(3)
    with pytest.raises(PreconditionError):
        wall_tangle(W.digraph, W, 2)


def test_bad_orientation_is_not_a_tangle():
    D = Digraph("ab", [("a", "b"), ("b", "a")])
    seps = directed_separations(D, 1)
    wrong = {s: (s.side_a if len(s.side_a) < len(s.side_b) else s.side_b) for s in seps}
    assert not orientation_is_tangle(D, 1, wrong)
    right = {s: (s.side_a if len(s.side_a) >= len(s.side_b) else s.side_b) for s in seps}
    assert orientation_is_tangle(D, 1, right)


def test_balanced_separators():
    D = complete_digraph(4)
    assert balanced_separator(D, range(4), 1) is None
    S = balanced_separator(D, range(4), 3)
    assert S is not None and len(S) == 2 and is_balanced_separator(D, range(4), S)
    assert is_k_linked(D, range(4), 2)
    C = dicycle_graph(6)
    S = balanced_separator(C, range(6), 2)
    assert S is not None and len(S) == 1
    assert not is_k_linked(C, range(6), 2)


def test_balanced_separator_against_enumeration():
    rng = random.Random(8)
    for _ in range(60):
        D = random_digraph(rng.randint(2, 7), 0.4, rng)
        X = rng.sample(D.vertices, rng.randint(1, D.n))
        S = balanced_separator(D, X, D.n)
        sizes = [size for size in range(D.n + 1)
                 if any(is_balanced_separator(D, X, c) for c in itertools.combinations(D.vertices, size))]
        assert len(S) == sizes[0]


def test_linked_set_tangle():
    D = complete_digraph(5)
    T = linked_set_tangle(D, range(5), 2)
    assert orientation_is_tangle(D, 2, T)


def test_well_linked():
    assert is_well_linked(complete_digraph(4), range(4))
    P = Digraph("abc", [("a", "b"), ("b", "c")])
    assert not is_well_linked(P, "ac")
    with pytest.raises(GateExceeded):
        is_well_linked(complete_digraph(10), range(10))
