"""Brute-force oracles and instance generators shared by the test modules.

The oracles here deliberately avoid the library's own algorithms so they can
serve as an independent second route.
"""
from __future__ import annotations

import itertools
import random

import numpy as np

from evendicycle.core import Digraph, PathFamily, enumerate_dicycles, random_digraph
from evendicycle.decomposition import DirTreeDecomposition, validate_odd_dtd
from evendicycle.matching import BipartiteGraph, MatchedBipartite
from evendicycle.routing import menger, planar_rotation
from evendicycle.errors import PreconditionError


# isomorphism classes

def digraph_iso_classes(n: int) -> list[Digraph]:
    """One representative per isomorphism class of loopless digraphs on n vertices.

    Every digraph is an adjacency bitmask; the canonical code is the minimum
    over all vertex permutations, computed for all masks at once with numpy.
    """
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    bit_of = {p: b for b, p in enumerate(pairs)}
    codes = np.arange(1 << len(pairs), dtype=np.int64)
    canon = codes.copy()
    for perm in itertools.permutations(range(n)):
        image = np.zeros_like(codes)
        for b, (i, j) in enumerate(pairs):
            image |= ((codes >> b) & 1) << bit_of[(perm[i], perm[j])]
        np.minimum(canon, image, out=canon)
    reps = np.unique(canon)
    return [Digraph(range(n), [pairs[b] for b in range(len(pairs)) if (int(c) >> b) & 1]) for c in reps]


# dicycles

def dicycles_by_permutation(D: Digraph) -> set[tuple]:
    """Every dicycle as a vertex tuple led by its earliest vertex, by trying all sequences."""
    verts = D.vertices
    out = set()
    for size in range(2, D.n + 1):
        for combo in itertools.combinations(range(D.n), size):
            lead, rest = combo[0], combo[1:]
            for perm in itertools.permutations(rest):
                seq = (lead,) + perm
                if all(D.has_edge(verts[seq[i]], verts[seq[(i + 1) % size]]) for i in range(size)):
                    out.add(tuple(verts[i] for i in seq))
    return out


def has_even_dicycle_brute(D: Digraph) -> bool:
    return any(len(c) % 2 == 0 for c in dicycles_by_permutation(D))


# linkages

def brute_linkage(D: Digraph, X, Y) -> int:
    """Maximum number of disjoint X-Y paths by exhaustive search over path sets."""
    X, Y = set(X), set(Y)
    paths = []

    def grow(p):
        if p[-1] in Y:
            paths.append(frozenset(p))
            return
        for w in D.successors(p[-1]):
            if w not in p and w not in X:
                grow(p + [w])

    for x in X:
        grow([x])
    best = 0

    def rec(i, used, count):
        nonlocal best
        best = max(best, count)
        if count + len(paths) - i <= best:
            return
        for j in range(i, len(paths)):
            if not paths[j] & used:
                rec(j + 1, used | paths[j], count + 1)

    rec(0, frozenset(), 0)
    return best


def half_integral_family(rng: random.Random, max_k: int = 5):
    """(D, X, Y, half, k): two integral X-Y linkages of size k merged into one family.

    The second linkage lives in a random edge-deleted copy, so the paths of
    the two linkages cross each other in general.
    """
    while True:
        n = rng.randint(4, 20)
        D = random_digraph(n, rng.uniform(0.1, 0.4), rng)
        X = rng.sample(D.vertices, rng.randint(1, n // 2))
        Y = rng.sample(D.vertices, rng.randint(1, n // 2))
        first = menger(D, X, Y)[0]
        thinned = D.remove_edges(rng.sample(D.edges, len(D.edges) // 3))
        second = menger(thinned, X, Y)[0]
        k = min(len(first), len(second), max_k)
        if k:
            return D, X, Y, PathFamily(first.paths[:k] + second.paths[:k], 2), k


# planar unions of an even and an odd dicycle

def planar_union(rng: random.Random):
    """(Ce, Co, rotation) with Ce even, Co odd and Ce ∪ Co planar, |V| ≤ 12."""
    while True:
        n = rng.randint(3, 12)
        D = random_digraph(n, rng.uniform(0.15, 0.4), rng)
        if D.m >= 40:
            continue
        cycles = enumerate_dicycles(D, cap=2000)
        even = [c for c in cycles if c.is_even]
        odd = [c for c in cycles if not c.is_even]
        if not even or not odd:
            continue
        Ce, Co = rng.choice(even), rng.choice(odd)
        try:
            rot = planar_rotation(Ce, Co)
        except PreconditionError:
            continue
        return Ce, Co, rot


# perfect matchings

def pm_count_by_permutation(G: BipartiteGraph) -> int:
    if len(G.left) != len(G.right):
        return 0
    return sum(1 for perm in itertools.permutations(G.right)
               if all(G.has_edge(a, b) for a, b in zip(G.left, perm)))


def random_matched_bipartite(rng: random.Random, half: int, p: float) -> MatchedBipartite:
    """Random bipartite graph on 2*half vertices with a planted, shuffled perfect matching."""
    left = [f"l{i}" for i in range(half)]
    right = [f"r{i}" for i in range(half)]
    perm = right[:]
    rng.shuffle(perm)
    matching = list(zip(left, perm))
    edges = matching + [(a, b) for a in left for b in right if rng.random() < p]
    return MatchedBipartite(left, right, edges, matching)


# strong odd decompositions built by hand

def block_decomposition(rng: random.Random, max_nodes: int = 6, max_bag: int = 3,
                        max_width: int = 3, max_n: int = 15):
    """A digraph together with a strong odd decomposition of it, built at once.

    Nodes of a random tree get small bags with random internal edges. Every
    edge entering a subtree starts at one guard vertex chosen in the parent's
    bag and ends in the child's own bag, while edges leaving a subtree may go
    to any vertex of a strict ancestor. Each node then takes a smallest alpha set inside Gamma meeting
    the odd and strong conditions, found by exhaustion.
    Returns (D, decomposition) or None when an alpha would exceed
    ``max_width``.
    """
    n_nodes = rng.randint(1, max_nodes)
    parent = {t: rng.randrange(t) for t in range(1, n_nodes)}
    bags, counter = {}, itertools.count()
    for t in range(n_nodes):
        bags[t] = frozenset(f"x{next(counter)}" for _ in range(rng.randint(1, max_bag)))
    if sum(len(b) for b in bags.values()) > max_n:
        return None

    def ancestors(t):
        out = []
        while t in parent:
            t = parent[t]
            out.append(t)
        return out

    guards = {}
    edges = []
    density = rng.uniform(0.3, 0.8)
    for t in range(n_nodes):
        for u, v in itertools.permutations(sorted(bags[t], key=lambda x: int(x[1:])), 2):
            if rng.random() < density:
                edges.append((u, v))
        if t in parent:
            g = rng.choice(sorted(bags[parent[t]], key=lambda x: int(x[1:])))
            guards[(parent[t], t)] = frozenset([g])
            for v in sorted(bags[t], key=lambda x: int(x[1:])):
                if rng.random() < density / 2:
                    edges.append((g, v))
            above = sorted(set().union(*(bags[a] for a in ancestors(t))), key=lambda x: int(x[1:]))
            for u in sorted(bags[t], key=lambda x: int(x[1:])):
                for v in above:
                    if rng.random() < density / 3:
                        edges.append((u, v))
    verts = sorted(set().union(*bags.values()), key=lambda s: int(s[1:]))
    D = Digraph(verts, edges)
    dec = DirTreeDecomposition(0, parent, bags, guards)

    alpha = {}
    for t in range(n_nodes):
        gam = sorted(dec.gamma(t), key=D.index)
        for size in range(len(gam) + 1):
            found = None
            for cand in itertools.combinations(gam, size):
                trial = DirTreeDecomposition(0, parent, bags, guards,
                                             {x: (frozenset(cand) if x == t else dec.gamma(x))
                                              for x in range(n_nodes)})
                if validate_odd_dtd(D, trial, strong=True).ok:
                    found = frozenset(cand)
                    break
            if found is not None:
                alpha[t] = found
                break
        if len(alpha[t]) > max_width:
            return None
    return D, DirTreeDecomposition(0, parent, bags, guards, alpha)
