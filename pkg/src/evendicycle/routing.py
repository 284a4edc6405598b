"""Disjoint path tools: Menger duality, X-paths versus small hitting sets, turning
half-integral linkages into integral ones, and pushing an even dicycle to one side
of an odd dicycle in a plane drawing."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import Dicycle, Digraph, Edge, PathFamily, Vertex, enumerate_dicycles, is_path
from .errors import GateExceeded, PreconditionError, VerificationFailure

X_PATH_GATE = 10


@dataclass(frozen=True)
class SeparatorCertificate:
    vertices: frozenset
    sources: frozenset
    targets: frozenset

    @property
    def cardinality(self) -> int:
        return len(self.vertices)

    def verify(self, D: Digraph) -> bool:
        return not _has_xy_path(D, self.sources, self.targets, self.vertices)


def _has_xy_path(D: Digraph, X: Iterable[Vertex], Y: Iterable[Vertex], removed: Iterable[Vertex] = ()) -> bool:
    gone = set(removed)
    ys = set(Y) - gone
    start = [x for x in X if x not in gone]
    seen = set(start)
    todo = deque(start)
    while todo:
        v = todo.popleft()
        if v in ys:
            return True
        for w in D.successors(v):
            if w not in seen and w not in gone:
                seen.add(w)
                todo.append(w)
    return False


class _UnitFlow:
    """Augmenting-path max flow on a split digraph with unit vertex capacities."""

    def __init__(self, D: Digraph, X: Sequence[Vertex], Y: Sequence[Vertex]):
        n = D.n
        self.D = D
        self.src, self.snk = 2 * n, 2 * n + 1
        self.cap: dict[tuple[int, int], int] = {}
        self.adj: list[list[int]] = [[] for _ in range(2 * n + 2)]
        big = n + 1  # only the vertex arcs may be cut
        for i in range(n):
            self._arc(2 * i, 2 * i + 1)
        for u, v in D.edges:
            self._arc(2 * D.index(u) + 1, 2 * D.index(v), big)
        for x in X:
            self._arc(self.src, 2 * D.index(x), big)
        for y in Y:
            self._arc(2 * D.index(y) + 1, self.snk, big)
        self._orig = dict(self.cap)

    def _arc(self, a: int, b: int, c: int = 1) -> None:
        if (a, b) not in self.cap:
            self.adj[a].append(b)
            self.cap[(a, b)] = 0
        if (b, a) not in self.cap:
            self.adj[b].append(a)
            self.cap[(b, a)] = 0
        self.cap[(a, b)] += c

    def _augment(self) -> bool:
        parent = {self.src: None}
        todo = deque([self.src])
        while todo:
            a = todo.popleft()
            for b in self.adj[a]:
                if b not in parent and self.cap[(a, b)] > 0:
                    parent[b] = a
                    if b == self.snk:
                        while parent[b] is not None:
                            p = parent[b]
                            self.cap[(p, b)] -= 1
                            self.cap[(b, p)] += 1
                            b = p
                        return True
                    todo.append(b)
        return False

    def run(self) -> int:
        value = 0
        while self._augment():
            value += 1
        return value

    def residual_reach(self) -> set[int]:
        seen = {self.src}
        todo = deque([self.src])
        while todo:
            a = todo.popleft()
            for b in self.adj[a]:
                if b not in seen and self.cap[(a, b)] > 0:
                    seen.add(b)
                    todo.append(b)
        return seen

    def paths(self) -> list[tuple[Vertex, ...]]:
        # flow on an arc is its original capacity minus what is left
        flow_out: dict[int, list[int]] = {}
        for (a, b), c in self.cap.items():
            orig = self._orig.get((a, b), 0)
            if orig - c > 0:
                flow_out.setdefault(a, []).extend([b] * (orig - c))
        out = []
        for _ in range(len(flow_out.get(self.src, []))):
            a = flow_out[self.src].pop()
            seq = []
            while a != self.snk:
                if a % 2 == 0:
                    seq.append(self.D.vertices[a // 2])
                a = flow_out[a].pop()
            out.append(tuple(seq))
        return out


def _trim(p: tuple, X: set, Y: set) -> tuple:
    last_x = max(i for i, v in enumerate(p) if v in X)
    p = p[last_x:]
    first_y = min(i for i, v in enumerate(p) if v in Y)
    return p[:first_y + 1]


def menger(D: Digraph, X: Iterable[Vertex], Y: Iterable[Vertex]) -> tuple[PathFamily, SeparatorCertificate]:
    """Maximum family of disjoint X-Y paths together with a separator of the same size."""
    Xs = [v for v in D.vertices if v in set(X)]
    Ys = [v for v in D.vertices if v in set(Y)]
    fl = _UnitFlow(D, Xs, Ys)
    fl.run()
    xs, ys = set(Xs), set(Ys)
    paths = [_trim(p, xs, ys) for p in fl.paths()]
    paths.sort(key=lambda p: (D.index(p[0]), D.index(p[-1])))
    reach = fl.residual_reach()
    sep = frozenset(D.vertices[i] for i in range(D.n) if 2 * i in reach and 2 * i + 1 not in reach)
    fam = PathFamily(tuple(paths), 1)
    cert = SeparatorCertificate(sep, frozenset(xs), frozenset(ys))
    if len(sep) != len(paths):
        raise VerificationFailure("flow value and cut size differ")
    return fam, cert


def max_linkage_value(D: Digraph, X: Iterable[Vertex], Y: Iterable[Vertex]) -> int:
    return len(menger(D, X, Y)[0])


# X-paths

def is_x_path(D: Digraph, X: Iterable[Vertex], p: Sequence[Vertex]) -> bool:
    xs = set(X)
    return (len(p) >= 2 and is_path(D, p) and p[0] in xs and p[-1] in xs
            and not any(v in xs for v in p[1:-1]))


def has_x_path(D: Digraph, X: Iterable[Vertex], removed: Iterable[Vertex] = ()) -> bool:
    gone = set(removed)
    xs = [x for x in D.vertices if x in set(X) and x not in gone]
    xset = set(xs)
    for x in xs:
        seen = {x}
        todo = deque([x])
        while todo:
            v = todo.popleft()
            for w in D.successors(v):
                if w in gone or w in seen:
                    continue
                if w in xset:
                    if w != x:
                        return True
                    continue
                seen.add(w)
                todo.append(w)
    return False


@dataclass(frozen=True)
class XPathsResult:
    paths: PathFamily | None
    hitting_set: frozenset | None

    @property
    def found_paths(self) -> bool:
        return self.paths is not None


@dataclass(frozen=True)
class _Copy:
    side: str
    vertex: Vertex


def _split_x(D: Digraph, X: Sequence[Vertex]) -> Digraph:
    # every x in X becomes a source copy carrying its out-edges and a sink copy carrying its in-edges
    xs = set(X)
    verts = [v for v in D.vertices if v not in xs] + [_Copy("out", x) for x in X] + [_Copy("in", x) for x in X]

    def tail(u):
        return _Copy("out", u) if u in xs else u

    def head(v):
        return _Copy("in", v) if v in xs else v

    return Digraph(verts, [(tail(u), head(v)) for u, v in D.edges])


def _orig(v):
    return v.vertex if isinstance(v, _Copy) else v


def _disjoint_arcs(arcs: list[tuple]) -> list[tuple]:
    """Pairwise disjoint members of a family in which every x starts and ends at most one path.

    Such a family strings together into chains and closed rings; alternate members are kept.
    """
    usable = [p for p in arcs if p[0] != p[-1]]
    nxt = {p[0]: i for i, p in enumerate(usable)}
    prv = {p[-1]: i for i, p in enumerate(usable)}
    chosen, done = [], set()
    for i in range(len(usable)):
        if i in done:
            continue
        j = i
        while usable[j][0] in prv and prv[usable[j][0]] != i:
            j = prv[usable[j][0]]
        chain = []
        while j is not None and j not in done:
            chain.append(usable[j])
            done.add(j)
            j = nxt.get(usable[j][-1])
        pick = chain[::2]
        if chain[-1][-1] == chain[0][0] and len(chain) % 2:
            pick = pick[:-1]
        chosen += pick
    return chosen


def _minimalise(D: Digraph, X: Sequence[Vertex], S: Iterable[Vertex]) -> frozenset:
    keep = [v for v in D.vertices if v in set(S)]
    for v in list(keep):
        trial = [u for u in keep if u != v]
        if not has_x_path(D, X, trial):
            keep = trial
    return frozenset(keep)


def _all_x_paths(D: Digraph, X: Sequence[Vertex]) -> list[tuple]:
    xs = set(X)
    out = []

    def grow(path: list, seen: set):
        for w in D.successors(path[-1]):
            if w in seen:
                continue
            if w in xs:
                out.append(tuple(path + [w]))
            else:
                seen.add(w)
                path.append(w)
                grow(path, seen)
                path.pop()
                seen.discard(w)

    for x in X:
        grow([x], {x})
    return out


def _exact_x_paths(D: Digraph, X: Sequence[Vertex], k: int) -> XPathsResult:
    paths = _all_x_paths(D, X)
    sets = [frozenset(p) for p in paths]

    def pack(start: int, used: frozenset, chosen: list):
        if len(chosen) == k:
            return chosen
        for i in range(start, len(paths)):
            if not (sets[i] & used):
                got = pack(i + 1, used | sets[i], chosen + [paths[i]])
                if got:
                    return got
        return None

    got = pack(0, frozenset(), [])
    if got is not None:
        return XPathsResult(PathFamily(tuple(got), 1), None)
    for size in range(0, 2 * k + 1):
        for S in itertools.combinations(D.vertices, size):
            if not has_x_path(D, X, S):
                return XPathsResult(None, frozenset(S))
    raise VerificationFailure("neither k disjoint X-paths nor a hitting set of size 2k")


def x_paths_or_hitting(D: Digraph, X: Iterable[Vertex], k: int, gate: int = X_PATH_GATE) -> XPathsResult:
    """k pairwise disjoint directed X-paths, or at most 2k vertices meeting every directed X-path.

    A flow between the out- and in-copies of X gives a hitting set of the flow's size, and its
    paths chain up so that every other one is disjoint.  When neither is conclusive the answer
    comes from exhaustive search, which is only attempted on at most ``gate`` vertices.
    """
    if k < 0:
        raise PreconditionError("k must be non-negative")
    Xs = [v for v in D.vertices if v in set(X)]
    if k == 0:
        return XPathsResult(PathFamily((), 1), None)
    if not has_x_path(D, Xs):
        return XPathsResult(None, frozenset())
    H = _split_x(D, Xs)
    fam, cut = menger(H, [_Copy("out", x) for x in Xs], [_Copy("in", x) for x in Xs])
    back = frozenset(_orig(v) for v in cut.vertices)
    arcs = [tuple(_orig(v) for v in p) for p in fam.paths]
    picked = _disjoint_arcs(arcs)
    if len(picked) >= k:
        return XPathsResult(PathFamily(tuple(picked[:k]), 1), None)
    if len(back) <= 2 * k:
        return XPathsResult(None, back)
    small = _minimalise(D, Xs, back)
    if len(small) <= 2 * k:
        return XPathsResult(None, small)
    if D.n > gate:
        raise GateExceeded(f"X-path search needs the exhaustive fallback beyond {gate} vertices")
    return _exact_x_paths(D, Xs, k)


# half-integral to integral

def integralize(D: Digraph, X: Iterable[Vertex], Y: Iterable[Vertex], half: PathFamily) -> PathFamily:
    """k disjoint X-Y paths using only edges of a half-integral family of 2k X-Y paths.

    Halving the family gives a fractional flow of value k under unit vertex capacities,
    so an integral maximum flow in the union of its paths has value at least k.
    """
    xs, ys = set(X), set(Y)
    if half.multiplicity_bound > 2 or not half.validate(D):
        raise PreconditionError("not a half-integral linkage of D")
    if len(half) % 2:
        raise PreconditionError("half-integral linkage must have an even number of paths")
    for p in half.paths:
        if p[0] not in xs or p[-1] not in ys:
            raise PreconditionError("every path must run from X to Y")
    k = len(half) // 2
    edges = {e for p in half.paths for e in zip(p, p[1:])}
    verts = [v for v in D.vertices if v in half.vertex_set()]
    U = Digraph(verts, [e for e in D.edges if e in edges])
    fam, _ = menger(U, [x for x in verts if x in xs], [y for y in verts if y in ys])
    if len(fam) < k:
        raise VerificationFailure("union of the half-integral family carries fewer than k disjoint paths")
    return PathFamily(fam.paths[:k], 1)


# planar shifting

Rotation = Mapping[Vertex, Sequence[Edge]]


@dataclass(frozen=True)
class ShiftResult:
    side: str  # "left", "right", or "either" when the even dicycle misses the odd one
    pieces: tuple[tuple[Vertex, ...], ...]  # subpaths of the even dicycle, all on one side
    dicycle: Dicycle

    @property
    def path(self) -> tuple[Vertex, ...] | None:
        return self.pieces[0] if len(self.pieces) == 1 else None


def _union(Ce: Dicycle, Co: Dicycle) -> tuple[Digraph, list[Edge]]:
    verts = list(dict.fromkeys(list(Co.vertices) + list(Ce.vertices)))
    edges = list(dict.fromkeys(list(Co.edges()) + list(Ce.edges())))
    return Digraph(verts, edges), edges


def planar_rotation(Ce: Dicycle, Co: Dicycle) -> dict[Vertex, list[Edge]]:
    """A planar rotation system of Ce ∪ Co, listing incident edges around each vertex."""
    import networkx as nx

    U, edges = _union(Ce, Co)
    G = nx.Graph()
    G.add_nodes_from(U.vertices)
    via: dict[tuple, Edge] = {}
    seen_pairs: set[frozenset] = set()
    for e in edges:
        u, v = e
        key = frozenset(e)
        if key in seen_pairs:
            mid = ("sub", e)
            G.add_edge(u, mid)
            G.add_edge(mid, v)
            via[(u, mid)] = e
            via[(v, mid)] = e
        else:
            seen_pairs.add(key)
            G.add_edge(u, v)
            via[(u, v)] = e
            via[(v, u)] = e
    ok, emb = nx.check_planarity(G)
    if not ok:
        raise PreconditionError("Ce ∪ Co is not planar")
    rot = {}
    for v in U.vertices:
        rot[v] = [via[(v, w)] for w in emb.neighbors_cw_order(v)] if G.degree(v) else []
    return rot


def _faces(U: Digraph, rot: Rotation) -> dict[tuple[Edge, Vertex], int]:
    """Face id of every dart (edge, vertex it leaves from)."""
    pos = {v: {e: i for i, e in enumerate(r)} for v, r in rot.items()}
    face: dict[tuple[Edge, Vertex], int] = {}
    fid = 0
    for e in U.edges:
        for start in e:
            if (e, start) in face:
                continue
            dart = (e, start)
            while dart not in face:
                face[dart] = fid
                edge, a = dart
                b = edge[1] if edge[0] == a else edge[0]
                r = rot[b]
                nxt = r[(pos[b][edge] + 1) % len(r)]
                dart = (nxt, b)
            fid += 1
    return face


def validate_rotation(Ce: Dicycle, Co: Dicycle, rot: Rotation) -> bool:
    U, _ = _union(Ce, Co)
    for v in U.vertices:
        inc = {e for e in U.edges if v in e}
        r = list(rot.get(v, ()))
        if len(r) != len(inc) or set(r) != inc:
            return False
    faces = _faces(U, rot)
    comps = _components(U)
    return U.n - U.m + len(set(faces.values())) == 2 * comps


def _components(U: Digraph) -> int:
    parent = {v: v for v in U.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in U.edges:
        parent[find(u)] = find(v)
    return len({find(v) for v in U.vertices})


def _segments(Ce: Dicycle, Co: Dicycle) -> list[tuple[Vertex, ...]]:
    """Maximal subpaths of Ce whose edges avoid Co; their interiors avoid Co as well."""
    on = set(Co.vertices)
    co_edges = set(Co.edges())
    vs = Ce.vertices
    n = len(vs)
    starts = [i for i in range(n) if vs[i] in on and (vs[i], vs[(i + 1) % n]) not in co_edges]
    out = []
    for i in starts:
        seq = [vs[i]]
        j = i
        while True:
            j = (j + 1) % n
            seq.append(vs[j])
            if vs[j] in on:
                break
        out.append(tuple(seq))
    return out


def _co_arc(Co: Dicycle, a: Vertex, b: Vertex) -> list[Vertex]:
    vs = Co.vertices
    n, i = len(vs), vs.index(a)
    out = [a]
    while out[-1] != b:
        i = (i + 1) % n
        out.append(vs[i])
    return out


def _side_at(Co: Dicycle, rot: Rotation, edge: Edge, v: Vertex) -> str:
    vs = Co.vertices
    i = vs.index(v)
    e_out = (v, vs[(i + 1) % len(vs)])
    e_in = (vs[i - 1], v)
    r = list(rot[v])
    j = r.index(e_out)
    while True:
        j = (j + 1) % len(r)
        if r[j] == e_in:
            return "right"
        if r[j] == edge:
            return "left"


def _even_route(Co: Dicycle, segs: list[tuple]) -> tuple[list[tuple], Dicycle] | None:
    # dicycles of Co plus the given pieces, searched with each piece as a single weighted arc
    arcs: dict[Vertex, list[tuple]] = {v: [] for v in Co.vertices}
    vs = Co.vertices
    for i, v in enumerate(vs):
        arcs[v].append((vs[(i + 1) % len(vs)], None))
    for sg in segs:
        arcs[sg[0]].append((sg[-1], sg))
    for start in vs:
        stack = [(start, [start], [], 0)]
        while stack:
            v, walk, used, length = stack.pop()
            for w, sg in arcs[v]:
                step = 1 if sg is None else len(sg) - 1
                if w == start:
                    if (length + step) % 2 == 0 and used + ([sg] if sg else []):
                        got = used + ([sg] if sg else [])
                        return got, _expand(walk + [w], got)
                    continue
                if w in walk or vs.index(w) < vs.index(start):
                    continue
                stack.append((w, walk + [w], used + ([sg] if sg else []), length + step))
    return None


def _expand(walk: list, used: list[tuple]) -> Dicycle:
    by_end = {(sg[0], sg[-1]): sg for sg in used}
    seq = []
    for a, b in zip(walk, walk[1:]):
        sg = by_end.get((a, b))
        seq += list(sg[:-1]) if sg is not None else [a]
    return Dicycle(tuple(seq))


def planar_shift(Ce: Dicycle, Co: Dicycle, rotation: Rotation | None = None) -> ShiftResult | None:
    """Pieces of the even dicycle on one side of the odd one that close up with it to an even dicycle.

    Each maximal piece of Ce off Co is first closed along Co on its own and the first even
    closure wins.  Failing that, the pieces are grouped by side and each side is searched for
    an even dicycle made of Co-arcs and several pieces.  None means no even dicycle of Ce ∪ Co
    stays on one side, which happens when two chords of Ce interleave along Co.
    """
    if Ce.length % 2 or not Co.length % 2:
        raise PreconditionError("need an even and an odd dicycle")
    rot = planar_rotation(Ce, Co) if rotation is None else rotation
    if rotation is not None and not validate_rotation(Ce, Co, rot):
        raise PreconditionError("rotation system is not a planar embedding of Ce ∪ Co")
    on = set(Co.vertices)
    if not on & set(Ce.vertices):
        return ShiftResult("either", (tuple(Ce.vertices),), Ce)
    segs = _segments(Ce, Co)
    sides: dict[str, list[tuple]] = {"left": [], "right": []}
    for seg in segs:
        u, v = seg[0], seg[-1]
        side = _side_at(Co, rot, (seg[0], seg[1]), u)
        sides[side].append(seg)
        if u == v:
            cyc = Dicycle(seg[:-1])
        else:
            cyc = Dicycle(tuple(seg) + tuple(_co_arc(Co, v, u)[1:-1]))
        if cyc.length % 2 == 0:
            return ShiftResult(side, (seg,), cyc)
    for side in ("left", "right"):
        got = _even_route(Co, sides[side])
        if got is not None:
            return ShiftResult(side, tuple(got[0]), got[1])
    return None


def one_sided_even_dicycles(Ce: Dicycle, Co: Dicycle, rotation: Rotation | None = None) -> list[Dicycle]:
    """Every even dicycle of Ce ∪ Co lying in the closure of one face region of Co (by face walks)."""
    rot = planar_rotation(Ce, Co) if rotation is None else rotation
    U, _ = _union(Ce, Co)
    region = _regions(U, Co, rot)
    out = []
    for C in enumerate_dicycles(U):
        if C.length % 2:
            continue
        sides = {region[e] for e in C.edges() if e in region}
        if len(sides) <= 1:
            out.append(C)
    return out


def _regions(U: Digraph, Co: Dicycle, rot: Rotation) -> dict[Edge, object]:
    """Region label of every edge off Co; edges in the same closed disk share a label."""
    faces = _faces(U, rot)
    co_edges = set(Co.edges())
    parent = {f: f for f in set(faces.values())}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in U.edges:
        if e not in co_edges:
            parent[find(faces[(e, e[0])])] = find(faces[(e, e[1])])
    on = set(Co.vertices)
    lab = {}
    for e in U.edges:
        if e in co_edges:
            continue
        lab[e] = find(faces[(e, e[0])])
    # components of Ce away from Co have no nesting information; give them a shared label
    detached = [e for e in lab if not _touches(U, e, on, co_edges)]
    for e in detached:
        lab[e] = "detached"
    return lab


def _touches(U: Digraph, e: Edge, on: set, co_edges: set) -> bool:
    seen, todo = set(e), list(e)
    while todo:
        v = todo.pop()
        if v in on:
            return True
        for w in list(U.successors(v)) + list(U.predecessors(v)):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return False
