import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

import evendicycle.routing as routing
from evendicycle.core import Dicycle, Digraph, PathFamily, enumerate_dicycles, random_digraph
from evendicycle.errors import PreconditionError
from evendicycle.routing import (
    has_x_path,
    integralize,
    is_x_path,
    max_linkage_value,
    menger,
    one_sided_even_dicycles,
    planar_rotation,
    planar_shift,
    validate_rotation,
    x_paths_or_hitting,
)
from helpers import brute_linkage, half_integral_family, planar_union
from strategies import digraphs


def test_menger_single_shared_vertex():
    D = Digraph("abc", [("a", "b"), ("b", "c")])
    fam, cut = menger(D, ["b"], ["b"])
    assert fam.paths == (("b",),)
    assert cut.cardinality == 1 and cut.verify(D)


def test_menger_no_path_gives_empty_cut():
    D = Digraph("abc", [("b", "a")])
    fam, cut = menger(D, ["a"], ["b"])
    assert len(fam) == 0 and cut.cardinality == 0 and cut.verify(D)


def test_menger_against_exhaustive_linkage():
    rng = random.Random(1)
    for _ in range(200):
        n = rng.randint(1, 8)
        D = random_digraph(n, rng.random() * 0.6, rng)
        X = set(rng.sample(D.vertices, rng.randint(0, n)))
        Y = set(rng.sample(D.vertices, rng.randint(0, n)))
        fam, cut = menger(D, X, Y)
        assert fam.validate(D)
        assert all(p[0] in X and p[-1] in Y for p in fam.paths)
        assert cut.verify(D)
        assert len(fam) == cut.cardinality == brute_linkage(D, X, Y)
        assert max_linkage_value(D, X, Y) == len(fam)


@given(digraphs(max_n=7), st.data())
def test_menger_duality(D, data):
    X = data.draw(st.sets(st.sampled_from(D.vertices)))
    Y = data.draw(st.sets(st.sampled_from(D.vertices)))
    fam, cut = menger(D, X, Y)
    assert len(fam) == cut.cardinality
    assert cut.vertices <= set(D.vertices)


def test_x_paths_none_exist():
    D = Digraph("abc", [("a", "b")])
    r = x_paths_or_hitting(D, ["a"], 2)
    assert r.paths is None and r.hitting_set == frozenset()


def test_x_paths_zero_request():
    D = Digraph("ab", [("a", "b")])
    assert len(x_paths_or_hitting(D, ["a", "b"], 0).paths) == 0
    with pytest.raises(PreconditionError):
        x_paths_or_hitting(D, ["a"], -1)


def test_x_path_predicate():
    D = Digraph("abc", [("a", "b"), ("b", "c")])
    assert is_x_path(D, "ac", ("a", "b", "c"))
    assert not is_x_path(D, "ab", ("a", "b", "c"))
    assert not is_x_path(D, "ac", ("a",))


def test_x_paths_against_exhaustive_search():
    rng = random.Random(1)
    for _ in range(300):
        n = rng.randint(2, 9)
        D = random_digraph(n, rng.random() * 0.5, rng)
        X = rng.sample(D.vertices, rng.randint(1, n))
        k = rng.randint(1, 3)
        r = x_paths_or_hitting(D, X, k)
        exact = routing._exact_x_paths(D, X, k)
        if r.found_paths:
            assert len(r.paths) == k and r.paths.validate(D)
            assert all(is_x_path(D, X, p) for p in r.paths.paths)
            assert exact.found_paths
        else:
            assert len(r.hitting_set) <= 2 * k
            assert not has_x_path(D, X, r.hitting_set)


def test_integralize_disjoint_input_returns_k_paths():
    D = Digraph("abcd", [("a", "b"), ("c", "d")])
    half = PathFamily((("a", "b"), ("c", "d")), 2)
    out = integralize(D, "ac", "bd", half)
    assert len(out) == 1 and out.validate(D)


def test_integralize_crossing_pair():
    D = Digraph("abcde", [("a", "c"), ("c", "d"), ("b", "c"), ("c", "e")])
    half = PathFamily((("a", "c", "d"), ("b", "c", "e")), 2)
    out = integralize(D, "ab", "de", half)
    assert len(out) == 1
    assert out.paths[0][0] in "ab" and out.paths[0][-1] in "de"


def test_integralize_preconditions():
    D = Digraph("abc", [("a", "b"), ("b", "c")])
    with pytest.raises(PreconditionError):
        integralize(D, "a", "c", PathFamily((("a", "b", "c"),), 2))
    with pytest.raises(PreconditionError):
        integralize(D, "b", "c", PathFamily((("a", "b", "c"), ("a", "b", "c")), 2))


def test_integralize_random_families():
    rng = random.Random(5)
    for _ in range(200):
        D, X, Y, half, k = half_integral_family(rng)
        out = integralize(D, X, Y, half)
        assert len(out) == k and out.validate(D)
        assert out.vertex_set() <= half.vertex_set()
        assert all(p[0] in X and p[-1] in Y for p in out.paths)
        used = {e for p in half.paths for e in zip(p, p[1:])}
        assert all(e in used for p in out.paths for e in zip(p, p[1:]))


def test_planar_shift_on_disjoint_cycles_returns_even_cycle():
    Ce = Dicycle(("a", "b"))
    Co = Dicycle(("x", "y", "z"))
    r = planar_shift(Ce, Co)
    assert r.side == "either" and r.dicycle == Ce


def test_planar_shift_rejects_wrong_parities():
    with pytest.raises(PreconditionError):
        planar_shift(Dicycle(("a", "b", "c")), Dicycle(("x", "y", "z")))


def test_planar_shift_chord_closes_evenly():
    Co = Dicycle(("a", "b", "c"))
    Ce = Dicycle(("a", "b", "d", "e"))
    r = planar_shift(Ce, Co)
    assert r is not None and r.dicycle.is_even


def test_planar_shift_against_one_sided_enumeration():
    rng = random.Random(3)
    none = 0
    for _ in range(150):
        Ce, Co, rot = planar_union(rng)
        assert validate_rotation(Ce, Co, rot)
        oracle = one_sided_even_dicycles(Ce, Co, rot)
        r = planar_shift(Ce, Co, rot)
        if r is None:
            none += 1
            assert not oracle
            continue
        U, _ = routing._union(Ce, Co)
        region = routing._regions(U, Co, rot)
        assert r.dicycle.validate(U) and r.dicycle.is_even
        assert len({region[e] for e in r.dicycle.edges() if e in region}) <= 1
        assert oracle
        ce_edges = set(Ce.edges())
        assert all(e in ce_edges for piece in r.pieces for e in zip(piece, piece[1:]))


def test_planar_rotation_agrees_with_networkx_planarity():
    rng = random.Random(11)
    seen = {True: 0, False: 0}
    for _ in range(400):
        n = rng.randint(4, 10)
        D = random_digraph(n, 0.45, rng)
        cycles = enumerate_dicycles(D, cap=3000) if D.m < 45 else []
        even = [c for c in cycles if c.is_even]
        odd = [c for c in cycles if not c.is_even]
        if not even or not odd:
            continue
        Ce, Co = rng.choice(even), rng.choice(odd)
        U, _ = routing._union(Ce, Co)
        planar, _ = nx.check_planarity(nx.Graph([e for e in U.edges]))
        try:
            rot = planar_rotation(Ce, Co)
        except PreconditionError:
            got = False
        else:
            got = True
            assert validate_rotation(Ce, Co, rot)
        assert got == planar
        seen[planar] += 1
    assert seen[True] and seen[False]
