"""Bipartite graphs with a perfect matching and their directed counterparts.

A bipartite graph B with perfect matching M = {a_i b_i} determines a digraph
with one vertex per matching edge and an edge i -> j whenever a_i b_j is an
edge of B. ``split`` inverts this. Most properties of B (extendability,
tight cuts, Pfaffian orientations) translate to properties of that digraph,
and the routines here compute both sides so they can be compared.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from evendicycle import gf2, kernels
from evendicycle.core import (
    DEFAULT_DICYCLE_CAP,
    Digraph,
    Edge,
    Vertex,
    enumerate_dicycles,
    identify,
    reachable,
)
from evendicycle.errors import (
    CapExceeded,
    GateExceeded,
    ParseError,
    PreconditionError,
)

UEdge = tuple[Vertex, Vertex]  # always stored (left, right)


class BipartiteGraph:
    """Undirected bipartite graph with fixed colour classes."""

    __slots__ = ("left", "right", "edges", "_edge_set", "_adj", "_side")

    def __init__(self, left: Iterable[Vertex], right: Iterable[Vertex], edges: Iterable[UEdge]):
        self.left = tuple(dict.fromkeys(left))
        self.right = tuple(dict.fromkeys(right))
        side = {v: 0 for v in self.left}
        for v in self.right:
            if v in side:
                raise PreconditionError(f"{v!r} lies in both colour classes")
            side[v] = 1
        elist: list[UEdge] = []
        seen: set[UEdge] = set()
        for x, y in edges:
            if x not in side or y not in side:
                raise PreconditionError(f"edge {(x, y)!r} has an unknown endpoint")
            if side[x] == side[y]:
                raise PreconditionError(f"edge {(x, y)!r} joins one colour class")
            e = (x, y) if side[x] == 0 else (y, x)
            if e not in seen:
                seen.add(e)
                elist.append(e)
        self.edges = tuple(elist)
        self._edge_set = frozenset(seen)
        self._side = side
        adj: dict[Vertex, list[Vertex]] = {v: [] for v in side}
        for a, b in elist:
            adj[a].append(b)
            adj[b].append(a)
        self._adj = {v: tuple(ws) for v, ws in adj.items()}

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return self.left + self.right

    @property
    def n(self) -> int:
        return len(self.left) + len(self.right)

    def side(self, v: Vertex) -> int:
        return self._side[v]

    def has_edge(self, x: Vertex, y: Vertex) -> bool:
        return (x, y) in self._edge_set or (y, x) in self._edge_set

    def norm(self, x: Vertex, y: Vertex) -> UEdge:
        return (x, y) if self._side[x] == 0 else (y, x)

    def neighbours(self, v: Vertex) -> tuple[Vertex, ...]:
        return self._adj[v]

    def remove_vertices(self, drop: Iterable[Vertex]) -> "BipartiteGraph":
        ds = set(drop)
        return BipartiteGraph(
            [v for v in self.left if v not in ds],
            [v for v in self.right if v not in ds],
            [e for e in self.edges if e[0] not in ds and e[1] not in ds],
        )

    def edge_subgraph(self, keep: Iterable[UEdge]) -> "BipartiteGraph":
        ks = {self.norm(*e) for e in keep}
        vs = {x for e in ks for x in e}
        return BipartiteGraph(
            [v for v in self.left if v in vs],
            [v for v in self.right if v in vs],
            [e for e in self.edges if e in ks],
        )

    def is_connected(self) -> bool:
        vs = self.vertices
        if not vs:
            return True
        seen = {vs[0]}
        stack = [vs[0]]
        while stack:
            v = stack.pop()
            for w in self._adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(vs)

    def to_networkx(self):
        import networkx as nx

        G = nx.Graph()
        G.add_nodes_from(self.left, bipartite=0)
        G.add_nodes_from(self.right, bipartite=1)
        G.add_edges_from(self.edges)
        return G

    def same_graph(self, other: "BipartiteGraph") -> bool:
        return (set(self.left) == set(other.left) and set(self.right) == set(other.right)
                and self._edge_set == other._edge_set)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, m={len(self.edges)})"


class MatchedBipartite(BipartiteGraph):
    """Bipartite graph plus a designated perfect matching.

    ``matching`` lists pairs (a_i, b_i) with a_i on the left. ``labels``
    optionally names the matching edges; the directed counterpart uses
    these names for its vertices.
    """

    __slots__ = ("matching", "labels")

    def __init__(self, left, right, edges, matching: Sequence[UEdge], labels: Sequence[Hashable] | None = None):
        super().__init__(left, right, edges)
        mm = [self.norm(x, y) for x, y in matching]
        covered = [x for e in mm for x in e]
        if len(set(covered)) != len(covered) or set(covered) != set(self.vertices):
            raise PreconditionError("matching is not perfect")
        for e in mm:
            if e not in self._edge_set:
                raise PreconditionError(f"matching edge {e!r} is not an edge")
        self.matching = tuple(mm)
        if labels is None:
            labels = [a for a, _ in mm]
        labels = tuple(labels)
        if len(labels) != len(mm) or len(set(labels)) != len(labels):
            raise PreconditionError("matching labels must be distinct, one per matching edge")
        self.labels = labels

    def with_matching(self, matching: Sequence[UEdge], labels=None) -> "MatchedBipartite":
        return MatchedBipartite(self.left, self.right, self.edges, matching, labels)


# text format

def parse_bipartite(text: str) -> MatchedBipartite:
    """Header ``bipartite`` then ``u v`` or ``u v m`` lines; ``m`` marks M."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines or lines[0][1] != "bipartite":
        raise ParseError("missing 'bipartite' header", lines[0][0] if lines else None)
    edges: list[tuple[str, str]] = []
    matching: list[tuple[str, str]] = []
    order: list[str] = []
    for lineno, line in lines[1:]:
        toks = line.split()
        if len(toks) == 3 and toks[2] == "m":
            matching.append((toks[0], toks[1]))
        elif len(toks) != 2:
            raise ParseError(f"expected 'u v [m]', got {line!r}", lineno)
        if toks[0] == toks[1]:
            raise ParseError("loop", lineno)
        edges.append((toks[0], toks[1]))
        order.extend(toks[:2])
    side: dict[str, int] = {}
    for a, b in matching:
        for v, s in ((a, 0), (b, 1)):
            if side.setdefault(v, s) != s:
                raise ParseError(f"vertex {v!r} on both sides of the matching")
    verts = list(dict.fromkeys(order))
    missing = [v for v in verts if v not in side]
    # colour vertices not covered by M from their neighbours so the error
    # below names the real problem (imperfect matching) rather than colouring
    adj: dict[str, list[str]] = {v: [] for v in verts}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    stack = [v for v in verts if v in side]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in side:
                side[w] = 1 - side[v]
                stack.append(w)
    for v in verts:
        side.setdefault(v, 0)
    for lineno, line in lines[1:]:
        a, b = line.split()[:2]
        if side[a] == side[b]:
            raise ParseError(f"edge {a} {b} is not bipartite for the classes implied by M", lineno)
    if missing:
        raise ParseError(f"matching does not cover {missing[0]!r}")
    left = [v for v in verts if side[v] == 0]
    right = [v for v in verts if side[v] == 1]
    try:
        return MatchedBipartite(left, right, edges, matching)
    except PreconditionError as exc:
        raise ParseError(str(exc)) from None


def bipartite_to_text(B: BipartiteGraph) -> str:
    mset = set(getattr(B, "matching", ()))
    out = ["bipartite"]
    for a, b in B.edges:
        out.append(f"{a} {b} m" if (a, b) in mset else f"{a} {b}")
    return "\n".join(out) + "\n"


# the bridge

def m_direction(B: MatchedBipartite) -> Digraph:
    """One vertex per matching edge; i -> j iff a_i b_j is an edge (i != j)."""
    owner_b = {b: i for i, (_, b) in enumerate(B.matching)}
    lab = B.labels
    edges = []
    for i, (a, _) in enumerate(B.matching):
        for b in B.neighbours(a):
            j = owner_b[b]
            if j != i:
                edges.append((lab[i], lab[j]))
    return Digraph(lab, edges)


def split(D: Digraph) -> MatchedBipartite:
    """Vertex v becomes the matching edge ("a:v", "b:v"); (u,v) becomes a:u–b:v."""
    a = {v: f"a:{v}" for v in D.vertices}
    b = {v: f"b:{v}" for v in D.vertices}
    matching = [(a[v], b[v]) for v in D.vertices]
    edges = matching + [(a[u], b[v]) for u, v in D.edges]
    return MatchedBipartite([a[v] for v in D.vertices], [b[v] for v in D.vertices],
                            edges, matching, D.vertices)


# perfect matchings

def _bitmask_adjacency(G: BipartiteGraph, left: Sequence[Vertex], right: Sequence[Vertex]) -> list[int]:
    ridx = {v: i for i, v in enumerate(right)}
    return [sum(1 << ridx[w] for w in G.neighbours(v) if w in ridx) for v in left]


def max_matching_size(G: BipartiteGraph, left: Sequence[Vertex] | None = None,
                      right: Sequence[Vertex] | None = None) -> int:
    """Size of a maximum matching between ``left`` and ``right`` (augmenting paths)."""
    left = G.left if left is None else list(left)
    right_set = set(G.right if right is None else right)
    mate: dict[Vertex, Vertex] = {}

    def augment(v, seen):
        for w in G.neighbours(v):
            if w in right_set and w not in seen:
                seen.add(w)
                if w not in mate or augment(mate[w], seen):
                    mate[w] = v
                    return True
        return False

    return sum(1 for v in left if augment(v, set()))


def has_perfect_matching(G: BipartiteGraph, drop: Iterable[Vertex] = ()) -> bool:
    ds = set(drop)
    left = [v for v in G.left if v not in ds]
    right = [v for v in G.right if v not in ds]
    if len(left) != len(right):
        return False
    return max_matching_size(G, left, right) == len(left)


def count_perfect_matchings(G: BipartiteGraph) -> int:
    """Exact count by subset DP (compiled when available)."""
    if len(G.left) != len(G.right):
        return 0
    if len(G.left) > 24:
        raise GateExceeded("perfect matching counting gated to 24 vertices per side")
    return kernels.count_perfect_matchings(len(G.left), _bitmask_adjacency(G, G.left, G.right))


def enumerate_perfect_matchings(G: BipartiteGraph, cap: int = DEFAULT_DICYCLE_CAP) -> list[tuple[UEdge, ...]]:
    """All perfect matchings, each listed along the left class order.

    Backtracking over left vertices with neighbours tried in edge order.
    """
    if len(G.left) != len(G.right):
        return []
    left = G.left
    out: list[tuple[UEdge, ...]] = []
    used: set[Vertex] = set()
    chosen: list[UEdge] = []

    def rec(i: int) -> None:
        if i == len(left):
            out.append(tuple(chosen))
            if len(out) > cap:
                raise CapExceeded(f"more than {cap} perfect matchings", out[:cap], cap)
            return
        a = left[i]
        for b in G.neighbours(a):
            if b not in used:
                used.add(b)
                chosen.append((a, b))
                rec(i + 1)
                chosen.pop()
                used.discard(b)

    rec(0)
    return out


def is_matching_covered(G: BipartiteGraph) -> bool:
    """Connected, and every edge lies in some perfect matching."""
    if G.n == 0 or not G.is_connected():
        return False
    if not has_perfect_matching(G):
        return False
    return all(has_perfect_matching(G, e) for e in G.edges)


def is_k_extendable(B: BipartiteGraph, k: int) -> bool:
    """Connected, with every matching of at most k edges inside a perfect matching.

    Checked over vertex sets: a matching F extends iff B − V(F) has a perfect
    matching, so it suffices to try every balanced set L ∪ R with
    |L| = |R| <= k that carries a perfect matching of its own.
    """
    if k < 0:
        raise PreconditionError("k must be non-negative")
    if B.n < 2 * k + 2:
        raise PreconditionError(f"k-extendability needs at least {2 * k + 2} vertices")
    if not B.is_connected() or not has_perfect_matching(B):
        return False
    for j in range(1, k + 1):
        for L in itertools.combinations(B.left, j):
            near = sorted({w for v in L for w in B.neighbours(v)}, key=B.right.index)
            for R in itertools.combinations(near, j):
                inner = set(L) | set(R)
                if max_matching_size(B, L, R) != j:
                    continue
                if not has_perfect_matching(B, inner):
                    return False
    return True


# tight cuts

@dataclass(frozen=True)
class TightCut:
    shore: frozenset
    nontrivial: bool


def cut_edges(G: BipartiteGraph, shore: Iterable[Vertex]) -> set[UEdge]:
    s = set(shore)
    return {e for e in G.edges if (e[0] in s) != (e[1] in s)}


def enumerate_tight_cuts(G: BipartiteGraph, cap: int = 200_000, gate: int = 20) -> list[TightCut]:
    """Every tight cut, each listed once by the shore avoiding the first vertex.

    Brute force over odd shores against the full list of perfect matchings.
    """
    if G.n > gate:
        raise GateExceeded(f"tight cut enumeration gated to {gate} vertices")
    pms = enumerate_perfect_matchings(G, cap)
    if not pms:
        raise PreconditionError("graph has no perfect matching")
    eidx = {e: i for i, e in enumerate(G.edges)}
    pm_masks = [sum(1 << eidx[e] for e in pm) for pm in pms]
    verts = G.vertices
    first, rest = verts[0], verts[1:]
    out: list[TightCut] = []
    side = [G.side(v) for v in rest]
    for size in range(1, len(verts), 2):
        for combo in itertools.combinations(range(len(rest)), size):
            nl = sum(1 for i in combo if side[i] == 0)
            if abs(2 * nl - size) != 1:
                continue
            shore = {rest[i] for i in combo}
            dmask = 0
            for e, i in eidx.items():
                if (e[0] in shore) != (e[1] in shore):
                    dmask |= 1 << i
            if all((pm & dmask).bit_count() == 1 for pm in pm_masks):
                fs = frozenset(shore)
                out.append(TightCut(fs, 2 <= len(fs) <= len(verts) - 2))
    del first
    return out


def tight_cut_from_separation(D: Digraph, side_a: Iterable[Vertex], side_b: Iterable[Vertex]) -> frozenset:
    """Shore of split(D) induced by an order-1 directed separation (A, B).

    With separator {v}, the shore is both copies of every vertex of A∖B
    together with the out-copy of v.
    """
    A, Bs = set(side_a), set(side_b)
    (v,) = tuple(A & Bs)
    shore = {f"a:{x}" for x in A - Bs} | {f"b:{x}" for x in A - Bs} | {f"a:{v}"}
    return frozenset(shore)


def _normalise_shore(G: BipartiteGraph, shore: frozenset) -> frozenset:
    return shore if G.vertices[0] not in shore else frozenset(set(G.vertices) - shore)


def contract_shore(B: MatchedBipartite, shore: Iterable[Vertex], name: Hashable) -> MatchedBipartite:
    """Shrink ``shore`` to one vertex called ``name``.

    The designated matching is projected: its unique edge leaving the shore
    becomes the new vertex's matching edge.
    """
    S = set(shore)
    crossing = [e for e in B.matching if (e[0] in S) != (e[1] in S)]
    if len(crossing) != 1:
        raise PreconditionError("shore is not crossed exactly once by the matching")
    nl = sum(1 for v in S if B.side(v) == 0)
    new_side = 0 if 2 * nl > len(S) else 1
    left = [v for v in B.left if v not in S] + ([name] if new_side == 0 else [])
    right = [v for v in B.right if v not in S] + ([name] if new_side == 1 else [])

    def mp(x):
        return name if x in S else x

    edges = []
    for a, b in B.edges:
        if a in S and b in S:
            continue
        edges.append((mp(a), mp(b)))
    matching = []
    labels = []
    for lab, (a, b) in zip(B.labels, B.matching):
        if a in S and b in S:
            continue
        matching.append((mp(a), mp(b)))
        labels.append(lab)
    return MatchedBipartite(left, right, edges, matching, labels)


def tight_cut_decomposition(B: MatchedBipartite, cap: int = 200_000, gate: int = 20) -> list[MatchedBipartite]:
    """Contract non-trivial tight cuts (both ways) until only braces remain."""
    out: list[MatchedBipartite] = []
    todo = [B]
    counter = itertools.count()
    while todo:
        G = todo.pop()
        nontrivial = [c for c in enumerate_tight_cuts(G, cap, gate) if c.nontrivial]
        if not nontrivial:
            out.append(G)
            continue
        shore = nontrivial[0].shore
        other = frozenset(set(G.vertices) - shore)
        x = f"<{next(counter)}>"
        y = f"<{next(counter)}>"
        todo.append(contract_shore(G, other, y))
        todo.append(contract_shore(G, shore, x))
    return out


def is_brace(G: BipartiteGraph) -> bool:
    return not any(c.nontrivial for c in enumerate_tight_cuts(G))


# Pfaffian orientations

def undirected_cycles(G: BipartiteGraph, cap: int = DEFAULT_DICYCLE_CAP) -> list[tuple[Vertex, ...]]:
    """Every cycle of the underlying graph once, as a vertex sequence."""
    verts = G.vertices
    bidir = Digraph(verts, [x for a, b in G.edges for x in ((a, b), (b, a))])
    cycles = enumerate_dicycles(bidir, 2 * cap)
    out = []
    for c in cycles:
        vs = c.vertices
        if len(vs) >= 3 and bidir.index(vs[1]) < bidir.index(vs[-1]):
            out.append(vs)
    if len(out) > cap:
        raise CapExceeded(f"more than {cap} cycles", out[:cap], cap)
    return out


def conformal_cycles(G: BipartiteGraph, cap: int = DEFAULT_DICYCLE_CAP) -> list[tuple[Vertex, ...]]:
    return [c for c in undirected_cycles(G, cap) if has_perfect_matching(G, c)]


Orientation = dict  # normalised edge (left, right) -> (tail, head)


def agreeing_edges(cycle: Sequence[Vertex], o: Orientation, G: BipartiteGraph) -> int:
    n = len(cycle)
    return sum(1 for i in range(n)
               if o[G.norm(cycle[i], cycle[(i + 1) % n])] == (cycle[i], cycle[(i + 1) % n]))


def is_pfaffian_orientation(G: BipartiteGraph, o: Orientation, cap: int = DEFAULT_DICYCLE_CAP) -> bool:
    """Every conformal cycle has an odd number of edges agreeing with each traversal."""
    if set(o) != set(G.edges):
        raise PreconditionError("orientation must cover every edge")
    for c in conformal_cycles(G, cap):
        fwd = agreeing_edges(c, o, G)
        if fwd % 2 == 0 or (len(c) - fwd) % 2 == 0:
            return False
    return True


def has_pfaffian_orientation(G: BipartiteGraph, cap: int = DEFAULT_DICYCLE_CAP) -> Orientation | None:
    """A Pfaffian orientation, or None.

    Writing x_e = 1 when e points right-to-left, a conformal cycle C has an
    odd number of agreeing edges iff the x_e along C sum to 1 + |C|/2. That
    is a GF(2) system; its lexicographically smallest solution is returned.
    """
    eidx = {e: i for i, e in enumerate(G.edges)}
    rows, rhs = [], []
    for c in conformal_cycles(G, cap):
        r = 0
        for i in range(len(c)):
            r |= 1 << eidx[G.norm(c[i], c[(i + 1) % len(c)])]
        rows.append(r)
        rhs.append((1 + len(c) // 2) & 1)
    sol = gf2.solve_lexmin(rows, rhs, len(G.edges))
    if not sol.feasible:
        return None
    return {e: (e if bit == 0 else (e[1], e[0])) for e, bit in zip(G.edges, sol.values)}


def pfaffian_orientation_brute(G: BipartiteGraph, gate: int = 20, cap: int = DEFAULT_DICYCLE_CAP) -> Orientation | None:
    """Exhaustive search modulo vertex flips.

    Flipping every edge at one vertex preserves the property, so edges of a
    spanning forest can be fixed left-to-right; the other edges are tried
    both ways. Gated on the number of edges.
    """
    if len(G.edges) > gate:
        raise GateExceeded(f"orientation search gated to {gate} edges")
    parent: dict[Vertex, Vertex | None] = {}
    tree: set[UEdge] = set()
    for s in G.vertices:
        if s in parent:
            continue
        parent[s] = None
        stack = [s]
        while stack:
            v = stack.pop()
            for w in G.neighbours(v):
                if w not in parent:
                    parent[w] = v
                    tree.add(G.norm(v, w))
                    stack.append(w)
    free = [e for e in G.edges if e not in tree]
    cycles = conformal_cycles(G, cap)
    for bits in itertools.product((0, 1), repeat=len(free)):
        o = {e: e for e in G.edges}
        for e, b in zip(free, bits):
            if b:
                o[e] = (e[1], e[0])
        if all(agreeing_edges(c, o, G) % 2 == 1 for c in cycles):
            return o
    return None


# gluing along a 4-cycle

def four_cycle_sum(B1: BipartiteGraph, B2: BipartiteGraph, C: Sequence[Vertex],
                   S: Iterable[UEdge] = ()) -> BipartiteGraph:
    """(B1 ∪ B2) − S where B1 and B2 meet in exactly the 4-cycle C."""
    if len(C) != 4 or len(set(C)) != 4:
        raise PreconditionError("C must list four distinct vertices")
    common_v = set(B1.vertices) & set(B2.vertices)
    if common_v != set(C):
        raise PreconditionError("B1 and B2 must share exactly the vertices of C")
    cyc = {frozenset((C[i], C[(i + 1) % 4])) for i in range(4)}
    e1 = {frozenset(e) for e in B1.edges}
    e2 = {frozenset(e) for e in B2.edges}
    if e1 & e2 != cyc:
        raise PreconditionError("B1 and B2 must share exactly the edges of C")
    for v in C:
        if B1.side(v) != B2.side(v):
            raise PreconditionError(f"{v!r} has different colours in B1 and B2")
    if not set(B1.vertices) - common_v or not set(B2.vertices) - common_v:
        raise PreconditionError("both summands need private vertices")
    drop = {frozenset(e) for e in S}
    if not drop <= cyc:
        raise PreconditionError("S must consist of edges of C")
    edges = [e for e in B1.edges + B2.edges if frozenset(e) not in drop]
    return BipartiteGraph(
        list(dict.fromkeys(B1.left + B2.left)),
        list(dict.fromkeys(B1.right + B2.right)),
        edges,
    )


# small cycle sums on the directed side

_INTERFACE = {
    2: lambda t: [(t[0], t[1]), (t[1], t[0])],
    3: lambda t: [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])],  # (w,u),(u,v),(w,v)
    4: lambda t: [(t[0], t[1]), (t[0], t[3]), (t[2], t[1]), (t[2], t[3])],  # (x,y),(x,v),(u,y),(u,v)
}


def _infer_interface(D1: Digraph, D2: Digraph, kind: int) -> tuple:
    shared = [v for v in D1.vertices if v in D2]
    if len(shared) != kind:
        raise PreconditionError(f"a {kind}-sum needs exactly {kind} shared vertices")
    for perm in itertools.permutations(shared):
        pat = _INTERFACE[kind](perm)
        if all(D1.has_edge(*e) and D2.has_edge(*e) for e in pat):
            if kind == 3 and (D2.successors(perm[2]) or D2.predecessors(perm[0])):
                continue
            if kind == 4 and (D2.successors(perm[1]) or D2.successors(perm[3])
                              or D2.predecessors(perm[0]) or D2.predecessors(perm[2])):
                continue
            return perm
    raise PreconditionError(f"no labelling of the shared vertices fits the {kind}-sum pattern")


def small_cycle_sum(D1: Digraph, D2: Digraph, kind: int, deletions: Iterable[Edge] = (),
                    interface: Sequence[Vertex] | None = None, cap: int = DEFAULT_DICYCLE_CAP) -> Digraph:
    """Glue D1 and D2 along a digon (2), transitive triangle (3) or the
    anti-directed 4-pattern (4), then delete any of the shared edges.

    For kinds 3 and 4, ``D2`` is the summand before its interface edges are
    contracted (see ``summand_after_contraction``). ``interface`` lists
    (u, v), (w, u, v) or (x, y, u, v) respectively; it is inferred when
    omitted.
    """
    if kind not in _INTERFACE:
        raise PreconditionError("kind must be 2, 3 or 4")
    t = tuple(interface) if interface is not None else _infer_interface(D1, D2, kind)
    if len(t) != kind or len(set(t)) != kind:
        raise PreconditionError(f"interface must list {kind} distinct vertices")
    pat = _INTERFACE[kind](t)
    shared = set(D1.vertices) & set(D2.vertices)
    if shared != set(t):
        raise PreconditionError("summands must share exactly the interface vertices")
    if not set(D1.vertices) - shared or not set(D2.vertices) - shared:
        raise PreconditionError("both summands need private vertices")
    if set(D1.edges) & set(D2.edges) != set(pat):
        raise PreconditionError("summands must share exactly the interface edges")
    if kind == 3:
        w, u, v = t
        if D2.successors(v) or D2.predecessors(w):
            raise PreconditionError("second summand may have no edge out of v and none into w")
    if kind == 4:
        x, y, u, v = t
        if D2.successors(y) or D2.successors(v) or D2.predecessors(x) or D2.predecessors(u):
            raise PreconditionError("second summand may have no edge out of y, v and none into x, u")
    D0 = D1.union(D2)
    if kind == 3:
        w, u, v = t
        # a dicycle through (w,v) avoiding u is a v -> w path avoiding u
        if w not in reachable(D0, [v], avoid=[u]):
            raise PreconditionError("no dicycle contains (w,v) while avoiding u")
    if kind == 4:
        ps = set(pat)
        if not any(len(ps & set(c.edges())) == 2 for c in enumerate_dicycles(D0, cap)):
            raise PreconditionError("no dicycle contains exactly two interface edges")
    dels = set(deletions)
    if not dels <= set(pat):
        raise PreconditionError("only interface edges may be deleted")
    return D0.remove_edges(dels)


def summand_after_contraction(D2: Digraph, kind: int, interface: Sequence[Vertex],
                              names: Sequence[Hashable] | None = None) -> Digraph:
    """The second summand with its interface edges contracted.

    3-sum: contract (w, v). 4-sum: contract (x, y) and (u, v). These are
    plain identifications; they are generally not butterfly contractions.
    """
    t = tuple(interface)
    if kind == 2:
        return D2
    if kind == 3:
        w, u, v = t
        return identify(D2, w, v, None if names is None else names[0])
    if kind == 4:
        x, y, u, v = t
        H = identify(D2, x, y, None if names is None else names[0])
        return identify(H, u, v, None if names is None else names[1])
    raise PreconditionError("kind must be 2, 3 or 4")


# conformal crosses

def _c_paths(G: BipartiteGraph, on_c: set[Vertex], cyc: set[frozenset]) -> list[tuple[Vertex, ...]]:
    """Paths with both ends on C and interior off C, one direction each."""
    out = []
    order = {v: i for i, v in enumerate(G.vertices)}
    for s in sorted(on_c, key=order.get):
        stack = [(s, (s,))]
        while stack:
            v, path = stack.pop()
            for w in G.neighbours(v):
                if w in path:
                    continue
                if w in on_c:
                    if len(path) >= 2 or frozenset((path[0], w)) not in cyc:
                        if order[w] > order[s]:
                            out.append(path + (w,))
                    continue
                stack.append((w, path + (w,)))
    return out


def find_conformal_cross(G: BipartiteGraph, C: Sequence[Vertex], gate: int = 14):
    """Disjoint C-paths L, R with ends alternating around C such that
    C ∪ L ∪ R is conformal and matching covered; None if there are none."""
    if G.n > gate:
        raise GateExceeded(f"conformal cross search gated to {gate} vertices")
    Cl = list(C)
    k = len(Cl)
    cyc = {frozenset((Cl[i], Cl[(i + 1) % k])) for i in range(k)}
    if any(not G.has_edge(*tuple(e)) for e in cyc):
        raise PreconditionError("C is not a cycle of G")
    if not has_perfect_matching(G, Cl):
        raise PreconditionError("C is not conformal")
    paths = _c_paths(G, set(Cl), cyc)
    pos = {v: i for i, v in enumerate(Cl)}

    def interleaved(p, q) -> bool:
        a, b = sorted((pos[p[0]], pos[p[-1]]))
        inside = [a < pos[x] < b for x in (q[0], q[-1])]
        return inside[0] != inside[1]

    for i, L in enumerate(paths):
        for R in paths[i + 1:]:
            if set(L) & set(R):
                continue
            if not interleaved(L, R):
                continue
            H_edges = set(cyc) | {frozenset(e) for e in zip(L, L[1:])} | {frozenset(e) for e in zip(R, R[1:])}
            H = G.edge_subgraph([tuple(e) for e in H_edges])
            if not has_perfect_matching(G, H.vertices):
                continue
            if not is_matching_covered(H):
                continue
            return L, R
    return None


# named graphs

def heawood_graph() -> MatchedBipartite:
    """The Heawood graph as the split of the 7-vertex circulant F7."""
    from evendicycle.evenness import f7

    return split(f7())


def k33() -> MatchedBipartite:
    left = ["l1", "l2", "l3"]
    right = ["r1", "r2", "r3"]
    edges = [(a, b) for a in left for b in right]
    return MatchedBipartite(left, right, edges, list(zip(left, right)))


def c4() -> MatchedBipartite:
    return MatchedBipartite(["a1", "a2"], ["b1", "b2"],
                            [("a1", "b1"), ("a1", "b2"), ("a2", "b1"), ("a2", "b2")],
                            [("a1", "b1"), ("a2", "b2")])
