"""Even dicycles, the non-even test, odd bicycles and butterfly minor models.

A digraph is non-even when some 0/1 edge weighting gives every dicycle odd
total weight. We decide this exactly by Gaussian elimination over GF(2) on
the full list of dicycle incidence vectors. The structural counterpart is a
butterfly minor model of an odd bicycle; ``find_weak_odd_bicycle`` searches
for one directly, so the two answers can be compared.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from evendicycle import gf2
from evendicycle.core import (
    DEFAULT_DICYCLE_CAP,
    Dicycle,
    Digraph,
    Edge,
    Vertex,
    enumerate_dicycles,
    strong_components,
)
from evendicycle.errors import GateExceeded, PreconditionError

DEFAULT_SIZE_GATE = 12


# even dicycle detection

def contains_even_dicycle(D: Digraph, cap: int = DEFAULT_DICYCLE_CAP) -> Dicycle | None:
    """A shortest even dicycle of D (first in enumeration order), or None."""
    for u, v in D.edges:
        if D.has_edge(v, u):
            return Dicycle((u, v)).canonical(D)
    best: Dicycle | None = None
    for comp in strong_components(D):
        if len(comp) < 4:
            continue
        for c in enumerate_dicycles(D.subgraph(comp), cap):
            if c.is_even and (best is None or c.length < best.length):
                best = c
                if best.length == 4:
                    return best.canonical(D)
    return None if best is None else best.canonical(D)


def even_dicycles(D: Digraph, cap: int = DEFAULT_DICYCLE_CAP) -> list[Dicycle]:
    return [c for c in enumerate_dicycles(D, cap) if c.is_even]


# non-even test

@dataclass(frozen=True)
class NonEvenResult:
    """Outcome of ``is_non_even``.

    ``witness`` maps every edge to a bit when the digraph is non-even.
    Otherwise ``certificate`` lists an odd number of dicycles whose edge
    multisets cancel mod 2, so no weighting can make all of them odd.
    """

    non_even: bool
    witness: dict[Edge, int] | None = None
    certificate: tuple[Dicycle, ...] | None = None
    dicycle_count: int = 0

    def __bool__(self) -> bool:
        return self.non_even


def is_non_even(D: Digraph, cap: int = DEFAULT_DICYCLE_CAP) -> NonEvenResult:
    """Decide non-evenness; see ``NonEvenResult`` for the certificates.

    The witness is the lexicographically smallest solution with edges taken
    in the digraph's edge order.
    """
    cycles = enumerate_dicycles(D, cap)
    pos = {e: i for i, e in enumerate(D.edges)}
    rows = []
    for c in cycles:
        row = 0
        for e in c.edges():
            row |= 1 << pos[e]
        rows.append(row)
    sol = gf2.solve_lexmin(rows, [1] * len(rows), D.m)
    if not sol.feasible:
        cert = tuple(cycles[j] for j in sol.conflict)
        return NonEvenResult(False, None, cert, len(cycles))
    return NonEvenResult(True, dict(zip(D.edges, sol.values)), None, len(cycles))


def weight(w: Mapping[Edge, int], c: Dicycle) -> int:
    return sum(w[e] for e in c.edges()) % 2


def check_weighting(D: Digraph, w: Mapping[Edge, int], cap: int = DEFAULT_DICYCLE_CAP) -> bool:
    """Independent re-check: every dicycle has odd weight under ``w``."""
    if set(w) != set(D.edges):
        return False
    return all(weight(w, c) == 1 for c in enumerate_dicycles(D, cap))


def check_certificate(D: Digraph, cert: Iterable[Dicycle]) -> bool:
    """An odd number of genuine dicycles whose edge sum vanishes mod 2."""
    cert = list(cert)
    if len(cert) % 2 == 0:
        return False
    acc: set[Edge] = set()
    for c in cert:
        if not c.validate(D):
            return False
        acc ^= set(c.edges())
    return not acc


def weighting_to_text(w: Mapping[Edge, int]) -> str:
    return "".join(f"{u} {v} {b}\n" for (u, v), b in w.items())


# generators

def odd_bicycle(k: int) -> Digraph:
    """Both orientations of every edge of an undirected k-cycle, k odd."""
    if k < 3 or k % 2 == 0:
        raise PreconditionError("odd bicycle needs an odd order >= 3")
    edges = []
    for i in range(k):
        j = (i + 1) % k
        edges += [(i, j), (j, i)]
    return Digraph(range(k), edges)


def f7() -> Digraph:
    """The 7-vertex circulant with steps +1 and −2; its split is the Heawood graph."""
    edges = []
    for i in range(1, 8):
        edges.append((i, i % 7 + 1))
    for i in range(1, 8):
        edges.append((i, (i - 3) % 7 + 1))
    return Digraph(range(1, 8), edges)


# butterfly minor models

@dataclass(frozen=True)
class VertexImage:
    """Root plus an in-arborescence into it and an out-arborescence from it."""

    root: Vertex
    in_edges: frozenset = frozenset()
    out_edges: frozenset = frozenset()

    def in_vertices(self) -> set[Vertex]:
        return {self.root} | {x for e in self.in_edges for x in e}

    def out_vertices(self) -> set[Vertex]:
        return {self.root} | {x for e in self.out_edges for x in e}

    def vertices(self) -> set[Vertex]:
        return self.in_vertices() | self.out_vertices()


@dataclass(frozen=True)
class MinorModel:
    vertex_images: dict = field(default_factory=dict)
    edge_images: dict = field(default_factory=dict)
    target: Digraph | None = None

    def host_vertices(self) -> set[Vertex]:
        out: set[Vertex] = set()
        for im in self.vertex_images.values():
            out |= im.vertices()
        for p in self.edge_images.values():
            out.update(p)
        return out

    def host_edges(self) -> set[Edge]:
        out: set[Edge] = set()
        for im in self.vertex_images.values():
            out |= set(im.in_edges) | set(im.out_edges)
        for p in self.edge_images.values():
            out.update(zip(p, p[1:]))
        return out

    def host(self, D: Digraph) -> Digraph:
        verts = self.host_vertices()
        return Digraph([v for v in D.vertices if v in verts], sorted(self.host_edges(), key=lambda e: (D.index(e[0]), D.index(e[1]))))

    def to_json(self) -> dict:
        return {
            "vertices": {
                str(h): {
                    "root": im.root,
                    "in_edges": sorted(list(e) for e in im.in_edges),
                    "out_edges": sorted(list(e) for e in im.out_edges),
                }
                for h, im in self.vertex_images.items()
            },
            "edges": [[str(u), str(v), list(p)] for (u, v), p in self.edge_images.items()],
        }


def identity_model(D: Digraph) -> MinorModel:
    return MinorModel(
        {v: VertexImage(v) for v in D.vertices},
        {e: tuple(e) for e in D.edges},
        D,
    )


def _arborescence_ok(edges: frozenset, root: Vertex, inward: bool) -> bool:
    # inward: every non-root vertex has exactly one out-edge and reaches root
    nxt: dict[Vertex, Vertex] = {}
    for u, v in edges:
        a, b = (u, v) if inward else (v, u)
        if a in nxt or a == root:
            return False
        nxt[a] = b
    for start in nxt:
        seen = set()
        x = start
        while x != root:
            if x in seen or x not in nxt:
                return False
            seen.add(x)
            x = nxt[x]
    return True


def model_violations(D: Digraph, H: Digraph, model: MinorModel) -> list[str]:
    """Reasons the model fails; empty when it is a valid model of H in D."""
    bad: list[str] = []
    vi, ei = model.vertex_images, model.edge_images
    if set(vi) != set(H.vertices):
        bad.append("vertex images do not match V(H)")
        return bad
    if set(ei) != set(H.edges):
        bad.append("edge images do not match E(H)")
        return bad
    owner: dict[Vertex, Hashable] = {}
    for h, im in vi.items():
        for e in set(im.in_edges) | set(im.out_edges):
            if not D.has_edge(*e):
                bad.append(f"image of {h!r} uses non-edge {e!r}")
        if im.root not in D:
            bad.append(f"root of {h!r} not in D")
        if not _arborescence_ok(frozenset(im.in_edges), im.root, True):
            bad.append(f"in-tree of {h!r} is not an in-arborescence to its root")
        if not _arborescence_ok(frozenset(im.out_edges), im.root, False):
            bad.append(f"out-tree of {h!r} is not an out-arborescence from its root")
        if im.in_vertices() & im.out_vertices() != {im.root}:
            bad.append(f"trees of {h!r} meet outside the root")
        for x in im.vertices():
            if x in owner:
                bad.append(f"images of {owner[x]!r} and {h!r} overlap at {x!r}")
            owner[x] = h
    interior_owner: dict[Vertex, Edge] = {}
    for (u, v), p in ei.items():
        if len(p) < 2 or len(set(p)) != len(p):
            bad.append(f"image of edge {(u, v)!r} is not a path with an edge")
            continue
        if any(not D.has_edge(a, b) for a, b in zip(p, p[1:])):
            bad.append(f"image of edge {(u, v)!r} uses a non-edge")
        if p[0] not in vi[u].out_vertices():
            bad.append(f"image of edge {(u, v)!r} does not start in the out-tree of {u!r}")
        if p[-1] not in vi[v].in_vertices():
            bad.append(f"image of edge {(u, v)!r} does not end in the in-tree of {v!r}")
        for x in p[1:-1]:
            if x in owner:
                bad.append(f"image of edge {(u, v)!r} passes through the image of {owner[x]!r}")
            if x in interior_owner:
                bad.append(f"images of edges {interior_owner[x]!r} and {(u, v)!r} share {x!r}")
            interior_owner[x] = (u, v)
    return bad


def verify_butterfly_minor_model(D: Digraph, H: Digraph, model: MinorModel) -> bool:
    return not model_violations(D, H, model)


# odd bicycle search

def _patterns(k: int) -> list[tuple[int, ...]]:
    """Split patterns up to rotation and reflection, fewest splits first."""
    seen: set[tuple[int, ...]] = set()
    out: list[tuple[int, ...]] = []
    for mask in range(1 << k):
        pat = tuple(mask >> i & 1 for i in range(k))
        variants = []
        for r in range(k):
            rot = pat[r:] + pat[:r]
            variants += [rot, tuple(reversed(rot))]
        canon = min(variants)
        if canon not in seen:
            seen.add(canon)
            out.append(canon)
    out.sort(key=lambda p: (sum(p), p))
    return out


class _Search:
    """Subdivision search for one split pattern of the order-k bicycle.

    Each bicycle vertex either stays a single branch vertex of in/out
    degree 2, or becomes a branch edge a->b; a collects both in-edges and b
    both out-edges. Every model, after pruning its trees, is a subdivision
    of one of these patterns.
    """

    def __init__(self, D: Digraph, k: int, pattern: tuple[int, ...]):
        self.D = D
        self.k = k
        self.pat = pattern
        inn = [("a", i) if pattern[i] else ("v", i) for i in range(k)]
        out = [("b", i) if pattern[i] else ("v", i) for i in range(k)]
        self.inn, self.out = inn, out
        need: dict[tuple, tuple[int, int]] = {}
        for i in range(k):
            if pattern[i]:
                need[("a", i)] = (2, 1)
                need[("b", i)] = (1, 2)
            else:
                need[("v", i)] = (2, 2)
        self.need = need
        order: list[tuple[tuple, tuple, object]] = []
        for i in range(k):
            if pattern[i]:
                order.append((("a", i), ("b", i), ("split", i)))
            order.append((out[i], inn[(i + 1) % k], (i, (i + 1) % k)))
        for i in range(k):
            order.append((out[(i + 1) % k], inn[i], ((i + 1) % k, i)))
        self.order = order
        self.phi: dict[tuple, Vertex] = {}
        self.used: set[Vertex] = set()
        self.paths: dict[object, tuple[Vertex, ...]] = {}

    def fits(self, node: tuple, x: Vertex) -> bool:
        di, do = self.need[node]
        return self.D.in_degree(x) >= di and self.D.out_degree(x) >= do

    def run(self) -> bool:
        first = self.inn[0]
        for x in self.D.vertices:
            if not self.fits(first, x):
                continue
            self.phi[first] = x
            self.used.add(x)
            if self.step(0):
                return True
            self.used.discard(x)
            del self.phi[first]
        return False

    def step(self, idx: int) -> bool:
        if idx == len(self.order):
            return True
        t, h, label = self.order[idx]
        src = self.phi[t]
        target = self.phi.get(h)
        D = self.D
        path = [src]
        # iterative DFS over simple paths from src through free vertices
        stack = [iter(D.successors(src))]
        while stack:
            advanced = False
            for w in stack[-1]:
                if target is not None:
                    if w == target:
                        self.paths[label] = tuple(path + [w])
                        if self.step(idx + 1):
                            return True
                        del self.paths[label]
                        continue
                    if w in self.used:
                        continue
                else:
                    if w in self.used:
                        continue
                    if self.fits(h, w):
                        self.phi[h] = w
                        self.used.add(w)
                        self.paths[label] = tuple(path + [w])
                        if self.step(idx + 1):
                            return True
                        del self.paths[label]
                        del self.phi[h]
                        self.used.discard(w)
                path.append(w)
                self.used.add(w)
                stack.append(iter(D.successors(w)))
                advanced = True
                break
            if not advanced:
                stack.pop()
                last = path.pop()
                if stack:
                    self.used.discard(last)
        return False

    def model(self) -> MinorModel:
        vimg = {}
        for i in range(self.k):
            if self.pat[i]:
                p = self.paths[("split", i)]
                vimg[i] = VertexImage(p[0], frozenset(), frozenset(zip(p, p[1:])))
            else:
                vimg[i] = VertexImage(self.phi[("v", i)])
        eimg = {lab: p for lab, p in self.paths.items() if lab[0] != "split"}
        return MinorModel(vimg, eimg, odd_bicycle(self.k))


def find_odd_bicycle_model(D: Digraph, k: int) -> MinorModel | None:
    """A butterfly minor model of the order-k odd bicycle in D, or None."""
    for comp in strong_components(D):
        if len(comp) < k:
            continue
        sub = D.subgraph(comp)
        for pat in _patterns(k):
            if k + sum(pat) > len(comp):
                continue
            s = _Search(sub, k, pat)
            if s.run():
                return s.model()
    return None


def find_weak_odd_bicycle(D: Digraph, max_host_size: int = DEFAULT_SIZE_GATE) -> MinorModel | None:
    """Smallest odd order first, a verified odd bicycle model in D, or None."""
    if D.n > max_host_size:
        raise GateExceeded(f"odd bicycle search gated to n <= {max_host_size}")
    for k in range(3, D.n + 1, 2):
        m = find_odd_bicycle_model(D, k)
        if m is not None:
            assert verify_butterfly_minor_model(D, m.target, m), model_violations(D, m.target, m)
            return m
    return None
