"""Digraphs, parsing, strong components, dicycles, separations and contractions.

All values are immutable. Vertex identifiers are arbitrary hashables; the
order in which a digraph lists its vertices is its canonical order and is
used wherever a deterministic tie-break is needed.
"""
from __future__ import annotations

import itertools
import random as _random
import re
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Sequence

from evendicycle import kernels
from evendicycle.errors import (
    CapExceeded,
    GateExceeded,
    LoopError,
    ParseError,
    PreconditionError,
)

Vertex = Hashable
Edge = tuple[Vertex, Vertex]

DEFAULT_DICYCLE_CAP = 1_000_000


class Digraph:
    """Simple loopless digraph; antiparallel pairs are allowed.

    Construct with an iterable of vertices and an iterable of edges. Vertices
    mentioned only by edges are appended in first-seen order. Repeated edges
    collapse to one; loops raise ``LoopError``.
    """

    __slots__ = ("_vertices", "_index", "_edges", "_edge_set", "_succ", "_pred", "_hash")

    def __init__(self, vertices: Iterable[Vertex] = (), edges: Iterable[Edge] = ()):
        order: list[Vertex] = []
        index: dict[Vertex, int] = {}
        for v in vertices:
            if v not in index:
                index[v] = len(order)
                order.append(v)
        elist: list[Edge] = []
        eset: set[Edge] = set()
        for e in edges:
            u, v = e
            if u == v:
                raise LoopError(f"loop at {u!r}")
            for x in (u, v):
                if x not in index:
                    index[x] = len(order)
                    order.append(x)
            if (u, v) not in eset:
                eset.add((u, v))
                elist.append((u, v))
        succ: dict[Vertex, list[Vertex]] = {v: [] for v in order}
        pred: dict[Vertex, list[Vertex]] = {v: [] for v in order}
        for u, v in elist:
            succ[u].append(v)
            pred[v].append(u)
        self._vertices = tuple(order)
        self._index = index
        self._edges = tuple(elist)
        self._edge_set = frozenset(eset)
        self._succ = {v: tuple(ws) for v, ws in succ.items()}
        self._pred = {v: tuple(ws) for v, ws in pred.items()}
        self._hash = None

    # basic accessors

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def edge_set(self) -> frozenset[Edge]:
        return self._edge_set

    def __len__(self) -> int:
        return len(self._vertices)

    def __contains__(self, v: object) -> bool:
        return v in self._index

    def __iter__(self) -> Iterator[Vertex]:
        return iter(self._vertices)

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return len(self._edges)

    def index(self, v: Vertex) -> int:
        return self._index[v]

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return (u, v) in self._edge_set

    def successors(self, v: Vertex) -> tuple[Vertex, ...]:
        return self._succ[v]

    def predecessors(self, v: Vertex) -> tuple[Vertex, ...]:
        return self._pred[v]

    def out_degree(self, v: Vertex) -> int:
        return len(self._succ[v])

    def in_degree(self, v: Vertex) -> int:
        return len(self._pred[v])

    def sort_key(self, v: Vertex) -> int:
        return self._index[v]

    # derived digraphs

    def subgraph(self, keep: Iterable[Vertex]) -> "Digraph":
        ks = set(keep)
        return Digraph(
            (v for v in self._vertices if v in ks),
            ((u, v) for u, v in self._edges if u in ks and v in ks),
        )

    def remove_vertices(self, drop: Iterable[Vertex]) -> "Digraph":
        ds = set(drop)
        return self.subgraph(v for v in self._vertices if v not in ds)

    def remove_edges(self, drop: Iterable[Edge]) -> "Digraph":
        ds = set(drop)
        return Digraph(self._vertices, (e for e in self._edges if e not in ds))

    def add_edges(self, extra: Iterable[Edge]) -> "Digraph":
        return Digraph(self._vertices, itertools.chain(self._edges, extra))

    def edge_subgraph(self, keep: Iterable[Edge]) -> "Digraph":
        ks = set(keep)
        verts = {x for e in ks for x in e}
        return Digraph(
            (v for v in self._vertices if v in verts),
            (e for e in self._edges if e in ks),
        )

    def relabel(self, mapping: dict) -> "Digraph":
        return Digraph(
            (mapping.get(v, v) for v in self._vertices),
            ((mapping.get(u, u), mapping.get(v, v)) for u, v in self._edges),
        )

    def reverse(self) -> "Digraph":
        return Digraph(self._vertices, ((v, u) for u, v in self._edges))

    def union(self, other: "Digraph") -> "Digraph":
        return Digraph(
            itertools.chain(self._vertices, other.vertices),
            itertools.chain(self._edges, other.edges),
        )

    # equality is labelled structure

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return set(self._vertices) == set(other._vertices) and self._edge_set == other._edge_set

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self._vertices), self._edge_set))
        return self._hash

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.m})"

    def index_adjacency(self) -> list[list[int]]:
        idx = self._index
        return [[idx[w] for w in self._succ[v]] for v in self._vertices]


# parsing and serialization

_DOT_HEADER = re.compile(r"^\s*(strict\s+)?digraph\s*(\"[^\"]*\"|[\w.]+)?\s*\{", re.S)
_DOT_NODE = re.compile(r'^("[^"]*"|[^\s;{}"\[\]=]+)$')


def _unquote(tok: str) -> str:
    if len(tok) >= 2 and tok[0] == tok[-1] == '"':
        return tok[1:-1]
    return tok


def parse_digraph(text: str) -> Digraph:
    """Read an edge list or a DOT subset (``digraph { a -> b; }``)."""
    if _DOT_HEADER.match(text):
        return _parse_dot(text)
    return _parse_edgelist(text)


def _parse_edgelist(text: str) -> Digraph:
    verts: list[str] = []
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) == 1:
            verts.append(toks[0])
        elif len(toks) == 2:
            if toks[0] == toks[1]:
                raise LoopError(f"loop at {toks[0]!r}", lineno)
            verts.extend(toks)
            edges.append((toks[0], toks[1]))
        else:
            raise ParseError(f"expected 'tail head', got {raw!r}", lineno)
    return Digraph(verts, edges)


def _parse_dot(text: str) -> Digraph:
    head = _DOT_HEADER.match(text)
    assert head is not None
    body_start = head.end()
    close = text.rfind("}")
    if close < body_start:
        raise ParseError("missing closing brace")
    if text[close + 1:].strip():
        raise ParseError("trailing text after closing brace")
    body = text[body_start:close]
    line_of = text[:body_start].count("\n") + 1
    verts: list[str] = []
    edges: list[tuple[str, str]] = []
    for raw_line in body.split("\n"):
        line = raw_line.split("//", 1)[0]
        for stmt in line.split(";"):
            stmt = stmt.strip()
            if not stmt:
                continue
            parts = [p.strip() for p in stmt.split("->")]
            if len(parts) == 1:
                if not _DOT_NODE.match(stmt):
                    raise ParseError(f"bad DOT statement {stmt!r}", line_of)
                verts.append(_unquote(stmt))
                continue
            if any(not _DOT_NODE.match(p) for p in parts):
                raise ParseError(f"bad DOT statement {stmt!r}", line_of)
            names = [_unquote(p) for p in parts]
            for u, v in zip(names, names[1:]):
                if u == v:
                    raise LoopError(f"loop at {u!r}", line_of)
                verts.extend((u, v))
                edges.append((u, v))
        line_of += 1
    return Digraph(verts, edges)


def _fmt(v: Vertex) -> str:
    s = str(v)
    if not s or any(c.isspace() for c in s) or "#" in s:
        raise PreconditionError(f"vertex id {v!r} cannot be written as an edge-list token")
    return s


def to_edgelist(D: Digraph) -> str:
    """Edge-list text; isolated vertices are written as single-token lines."""
    lines = [f"{_fmt(u)} {_fmt(v)}" for u, v in D.edges]
    touched = {x for e in D.edges for x in e}
    lines.extend(_fmt(v) for v in D.vertices if v not in touched)
    return "\n".join(lines) + ("\n" if lines else "")


def to_dot(D: Digraph) -> str:
    def q(v: Vertex) -> str:
        return '"' + str(v).replace('"', "'") + '"'

    touched = {x for e in D.edges for x in e}
    body = [f"  {q(v)};" for v in D.vertices if v not in touched]
    body += [f"  {q(u)} -> {q(v)};" for u, v in D.edges]
    return "digraph {\n" + "\n".join(body) + ("\n" if body else "") + "}\n"


# traversal

def reachable(D: Digraph, sources: Iterable[Vertex], avoid: Iterable[Vertex] = (),
              reverse: bool = False) -> set[Vertex]:
    """Vertices reachable from ``sources`` without entering ``avoid``.

    Sources inside ``avoid`` are skipped.
    """
    bad = set(avoid)
    nxt = D.predecessors if reverse else D.successors
    seen = {s for s in sources if s not in bad}
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in nxt(v):
            if w not in seen and w not in bad:
                seen.add(w)
                stack.append(w)
    return seen


def strong_components(D: Digraph) -> list[tuple[Vertex, ...]]:
    """Strong components in topological order (sources first).

    Iterative Tarjan. Inside a component, vertices keep the digraph's order.
    """
    idx = D.index_adjacency()
    n = len(idx)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(idx[v]):
                work[-1] = (v, i + 1)
                w = idx[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(sorted(comp))
    comps.reverse()
    verts = D.vertices
    return [tuple(verts[i] for i in c) for c in comps]


def is_strongly_connected(D: Digraph) -> bool:
    if D.n == 0:
        return True
    start = D.vertices[0]
    return len(reachable(D, [start])) == D.n and len(reachable(D, [start], reverse=True)) == D.n


def is_acyclic(D: Digraph) -> bool:
    return all(len(c) == 1 for c in strong_components(D))


def is_k_strongly_connected(D: Digraph, k: int) -> bool:
    """More than k vertices and strongly connected after deleting any k−1 of them."""
    if k <= 0:
        return True
    if D.n <= k:
        return False
    for drop in itertools.combinations(D.vertices, k - 1):
        if not is_strongly_connected(D.remove_vertices(drop)):
            return False
    return True


# dicycles

@dataclass(frozen=True)
class Dicycle:
    """A directed cycle given by its cyclic vertex sequence (length >= 2)."""

    vertices: tuple[Vertex, ...]

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def parity(self) -> int:
        return len(self.vertices) % 2

    @property
    def is_even(self) -> bool:
        return len(self.vertices) % 2 == 0

    def edges(self) -> tuple[Edge, ...]:
        vs = self.vertices
        return tuple(zip(vs, vs[1:] + vs[:1]))

    def vertex_set(self) -> frozenset[Vertex]:
        return frozenset(self.vertices)

    def canonical(self, D: Digraph | None = None) -> "Dicycle":
        vs = self.vertices
        key = D.sort_key if D is not None else (lambda v: v)
        i = min(range(len(vs)), key=lambda j: key(vs[j]))
        return Dicycle(vs[i:] + vs[:i])

    def validate(self, D: Digraph) -> bool:
        vs = self.vertices
        return len(vs) >= 2 and len(set(vs)) == len(vs) and all(D.has_edge(u, v) for u, v in self.edges())

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


def enumerate_dicycles(D: Digraph, cap: int = DEFAULT_DICYCLE_CAP) -> list[Dicycle]:
    """Every dicycle of ``D`` exactly once, in canonical rotation.

    Raises ``CapExceeded`` (carrying the first ``cap`` dicycles) if there are
    more than ``cap``.
    """
    if cap < 1:
        raise PreconditionError("cap must be at least 1")
    verts = D.vertices
    try:
        raw = kernels.simple_cycles(D.n, D.index_adjacency(), cap)
    except kernels.KernelCapExceeded as exc:
        part = [Dicycle(tuple(verts[i] for i in c)) for c in exc.partial]
        raise CapExceeded(f"more than {cap} dicycles", part, cap) from None
    return [Dicycle(tuple(verts[i] for i in c)) for c in raw]


def find_dicycle(D: Digraph) -> Dicycle | None:
    """Some dicycle of D, or None when D is acyclic (no enumeration)."""
    for comp in strong_components(D):
        if len(comp) < 2:
            continue
        cs = set(comp)
        start = comp[0]
        parent = {start: None}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in D.successors(v):
                if w == start:
                    path = [v]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return Dicycle(tuple(reversed(path))).canonical(D)
                if w in cs and w not in parent:
                    parent[w] = v
                    stack.append(w)
    return None


# linkages

@dataclass(frozen=True)
class PathFamily:
    """Ordered family of directed paths; each vertex lies on at most
    ``multiplicity_bound`` members (1 = integral linkage, 2 = half-integral)."""

    paths: tuple[tuple[Vertex, ...], ...]
    multiplicity_bound: int = 1

    def __len__(self) -> int:
        return len(self.paths)

    def vertex_set(self) -> set[Vertex]:
        return {v for p in self.paths for v in p}

    def validate(self, D: Digraph) -> bool:
        load: dict[Vertex, int] = {}
        for p in self.paths:
            if not p or len(set(p)) != len(p):
                return False
            if any(not D.has_edge(u, v) for u, v in zip(p, p[1:])):
                return False
            for v in p:
                load[v] = load.get(v, 0) + 1
        return all(c <= self.multiplicity_bound for c in load.values())


def is_path(D: Digraph, p: Sequence[Vertex]) -> bool:
    return bool(p) and len(set(p)) == len(p) and all(D.has_edge(u, v) for u, v in zip(p, p[1:]))


# directed separations

@dataclass(frozen=True)
class DirSeparation:
    side_a: frozenset
    side_b: frozenset
    directed: bool = True

    @property
    def separator(self) -> frozenset:
        return self.side_a & self.side_b

    @property
    def order(self) -> int:
        return len(self.side_a & self.side_b)

    def is_trivial(self) -> bool:
        return self.side_a <= self.side_b or self.side_b <= self.side_a


def is_directed_separation(D: Digraph, a: Iterable[Vertex], b: Iterable[Vertex]) -> bool:
    """A ∪ B = V and no edge runs from B∖A to A∖B."""
    A, B = set(a), set(b)
    if A | B != set(D.vertices):
        return False
    a_only, b_only = A - B, B - A
    return not any(u in b_only and v in a_only for u, v in D.edges)


def enumerate_directed_separations(D: Digraph, max_order: int, gate: int = 8,
                                   include_trivial: bool = True) -> list[DirSeparation]:
    """All directed separations of order at most ``max_order``, by exhaustion.

    Listed by sorted separator, then by the A-only side as a bitmask.
    """
    if D.n > gate:
        raise GateExceeded(f"separation enumeration gated to n <= {gate}")
    verts = D.vertices
    out: list[DirSeparation] = []
    for size in range(0, min(max_order, D.n) + 1):
        for sep in itertools.combinations(verts, size):
            rest = [v for v in verts if v not in sep]
            for mask in range(1 << len(rest)):
                a_only = {rest[i] for i in range(len(rest)) if mask >> i & 1}
                b_only = set(rest) - a_only
                if any(u in b_only and v in a_only for u, v in D.edges):
                    continue
                s = DirSeparation(frozenset(a_only | set(sep)), frozenset(b_only | set(sep)))
                if include_trivial or not s.is_trivial():
                    out.append(s)
    return out


# contractions

def is_butterfly_contractible(D: Digraph, e: Edge) -> bool:
    u, v = e
    return D.has_edge(u, v) and (D.out_degree(u) == 1 or D.in_degree(v) == 1)


def butterfly_contract(D: Digraph, e: Edge, name: Vertex | None = None) -> Digraph:
    """Identify the ends of ``e``; the merged vertex is ``"u+v"`` by default.

    Requires ``e`` to be the only out-edge of its tail or the only in-edge of
    its head. Loops and parallel edges created by the merge are dropped.
    """
    u, v = e
    if not D.has_edge(u, v):
        raise PreconditionError(f"{e!r} is not an edge")
    if not is_butterfly_contractible(D, e):
        raise PreconditionError(f"{e!r} is not butterfly-contractible")
    return identify(D, u, v, name)


def identify(D: Digraph, u: Vertex, v: Vertex, name: Vertex | None = None) -> Digraph:
    """Merge u and v into one vertex regardless of degrees, dropping loops."""
    w = f"{u}+{v}" if name is None else name
    if w in D and w not in (u, v):
        raise PreconditionError(f"merged name {w!r} already in use")

    def mp(x):
        return w if x == u or x == v else x

    verts = [mp(x) for x in D.vertices]
    edges = [(mp(a), mp(b)) for a, b in D.edges if mp(a) != mp(b)]
    return Digraph(verts, edges)


def dir_tight_cut_contractions(D: Digraph, sep: DirSeparation,
                               names: tuple[Vertex, Vertex] | None = None) -> tuple[Digraph, Digraph]:
    """Both contractions at a non-trivial order-1 directed separation (X, Y).

    Returns ``(D/X, D/Y)``: the first keeps Y and shrinks X to one vertex,
    the second keeps X and shrinks Y. The new vertex inherits the separator's
    name unless ``names`` supplies two others.
    """
    X, Y = set(sep.side_a), set(sep.side_b)
    if not is_directed_separation(D, X, Y):
        raise PreconditionError("not a directed separation")
    if sep.order != 1:
        raise PreconditionError(f"separation has order {sep.order}, expected 1")
    if sep.is_trivial():
        raise PreconditionError("separation is trivial")
    (v,) = tuple(X & Y)
    vx, vy = names if names is not None else (v, v)
    x_only, y_only = X - Y, Y - X

    ex: list[Edge] = []
    for a, b in D.edges:
        if a in y_only and b in y_only:
            ex.append((a, b))
        elif a in y_only and b == v:
            ex.append((a, vx))
        elif a in X and b in y_only:
            ex.append((vx, b))
    dx = Digraph([vx] + [y for y in D.vertices if y in y_only],
                 [(a, b) for a, b in ex if a != b])

    ey: list[Edge] = []
    for a, b in D.edges:
        if a in x_only and b in x_only:
            ey.append((a, b))
        elif a == v and b in x_only:
            ey.append((vy, b))
        elif a in x_only and b in Y:
            ey.append((a, vy))
    dy = Digraph([x for x in D.vertices if x in x_only] + [vy],
                 [(a, b) for a, b in ey if a != b])
    return dx, dy


def find_order1_separation(D: Digraph, rng: _random.Random | None = None) -> DirSeparation | None:
    """A non-trivial directed separation of order 1, or None.

    Such a separation with separator {v} exists exactly when D − v is not
    strongly connected. Deterministic unless ``rng`` is given.
    """
    cands = list(D.vertices)
    if rng is not None:
        rng.shuffle(cands)
    for v in cands:
        rest = D.remove_vertices([v])
        comps = strong_components(rest)
        if len(comps) < 2:
            continue
        if rng is None:
            a_only = set(comps[0])
        else:
            # any predecessor-closed union of components works; pick a random prefix
            cut = rng.randrange(1, len(comps))
            a_only = {x for c in comps[:cut] for x in c}
        b_only = set(rest.vertices) - a_only
        return DirSeparation(frozenset(a_only | {v}), frozenset(b_only | {v}))
    return None


def dibrace_decomposition(D: Digraph, rng: _random.Random | None = None) -> list[Digraph]:
    """Contract non-trivial order-1 directed separations until none remain."""
    if not is_strongly_connected(D):
        raise PreconditionError("dibrace decomposition needs a strongly connected digraph")
    out: list[Digraph] = []
    todo = [D]
    while todo:
        H = todo.pop()
        sep = find_order1_separation(H, rng)
        if sep is None:
            out.append(H)
            continue
        a, b = dir_tight_cut_contractions(H, sep)
        todo.extend((b, a))
    return out


# isomorphism (delegated to networkx's VF2 matcher)

def to_networkx(D: Digraph):
    import networkx as nx

    G = nx.DiGraph()
    G.add_nodes_from(D.vertices)
    G.add_edges_from(D.edges)
    return G


def is_isomorphic(D1: Digraph, D2: Digraph, gate: int = 10) -> bool:
    """Unlabelled structural equality, gated to ``n <= gate``."""
    if max(D1.n, D2.n) > gate:
        raise GateExceeded(f"isomorphism test gated to n <= {gate}")
    if D1.n != D2.n or D1.m != D2.m:
        return False
    if sorted((D1.in_degree(v), D1.out_degree(v)) for v in D1) != sorted(
            (D2.in_degree(v), D2.out_degree(v)) for v in D2):
        return False
    import networkx as nx

    return nx.is_isomorphic(to_networkx(D1), to_networkx(D2))


def same_multiset_up_to_isomorphism(a: Sequence[Digraph], b: Sequence[Digraph], gate: int = 10) -> bool:
    if len(a) != len(b):
        return False
    pool = list(b)
    for H in a:
        for i, K in enumerate(pool):
            if is_isomorphic(H, K, gate):
                del pool[i]
                break
        else:
            return False
    return True


def random_digraph(n: int, p: float, rng: _random.Random, labels: Sequence[Vertex] | None = None) -> Digraph:
    """Each ordered pair becomes an edge independently with probability p."""
    vs = list(range(n)) if labels is None else list(labels)
    return Digraph(vs, [(u, v) for u in vs for v in vs if u != v and rng.random() < p])


def subdivide(D: Digraph, e: Edge, name: Vertex | None = None) -> Digraph:
    u, v = e
    if not D.has_edge(u, v):
        raise PreconditionError(f"{e!r} is not an edge")
    w = name if name is not None else f"{u}>{v}"
    if w in D:
        raise PreconditionError(f"name {w!r} already in use")
    return Digraph(
        list(D.vertices) + [w],
        [x for x in D.edges if x != (u, v)] + [(u, w), (w, v)],
    )
