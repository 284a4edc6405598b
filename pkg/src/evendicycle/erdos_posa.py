"""Packing and covering of even dicycles.

Exact desk-scale optimisation (branch and bound), the extraction procedures
that turn a decomposition into a packing or a small transversal, the global
decomposition recursion with a pluggable local oracle, a planar family with
no two disjoint even dicycles but a large transversal, and two applications:
disjoint paths and perfect-matching counting.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Protocol, Sequence

import numpy as np

from . import matching as _matching
from .core import (
    DEFAULT_DICYCLE_CAP,
    Dicycle,
    Digraph,
    Vertex,
    enumerate_dicycles,
    strong_components,
)
from .decomposition import (
    DirTreeDecomposition,
    dtd_width,
    validate_dtd,
    validate_odd_dtd,
)
from .errors import GateExceeded, OracleFailure, PreconditionError, VerificationFailure
from .evenness import contains_even_dicycle
from .matching import BipartiteGraph, MatchedBipartite
from .walls import cylindrical_grid, vname

PACKING_SCHEMA = "evendicycle.packing/1"


@dataclass(frozen=True)
class FractionalPacking:
    """Even dicycles such that each vertex lies on at most ``denominator`` of them."""

    cycles: tuple[Dicycle, ...]
    denominator: int = 1

    def __len__(self) -> int:
        return len(self.cycles)

    def multiplicity(self) -> dict[Vertex, int]:
        out: dict[Vertex, int] = {}
        for c in self.cycles:
            for v in c.vertices:
                out[v] = out.get(v, 0) + 1
        return out

    def to_json(self, provenance: Mapping | None = None) -> dict:
        return {"schema": PACKING_SCHEMA, "kind": "packing", "denominator": self.denominator,
                "cycles": [list(c.vertices) for c in self.cycles],
                "provenance": dict(provenance or {})}


@dataclass(frozen=True)
class Transversal:
    vertices: frozenset

    def __len__(self) -> int:
        return len(self.vertices)

    def verify(self, D: Digraph, cap: int = DEFAULT_DICYCLE_CAP) -> bool:
        return contains_even_dicycle(D.remove_vertices(self.vertices), cap) is None

    def sorted(self, D: Digraph) -> list[Vertex]:
        return sorted(self.vertices, key=D.index)

    def to_json(self, D: Digraph, provenance: Mapping | None = None) -> dict:
        return {"schema": PACKING_SCHEMA, "kind": "transversal", "vertices": self.sorted(D),
                "provenance": dict(provenance or {})}


def verify_packing(D: Digraph, p: FractionalPacking, t: int, n: int) -> bool:
    if len(p.cycles) < t:
        return False
    if len({c.canonical(D).vertices for c in p.cycles}) != len(p.cycles):
        return False
    if not all(c.validate(D) and c.is_even for c in p.cycles):
        return False
    return all(m <= n for m in p.multiplicity().values())


def _even_cycles(D: Digraph, cap: int) -> list[Dicycle]:
    out = []
    for comp in strong_components(D):
        if len(comp) > 1:
            out += [c.canonical(D) for c in enumerate_dicycles(D.subgraph(comp), cap) if c.is_even]
    out.sort(key=lambda c: (c.length, [D.index(v) for v in c.vertices]))
    return out


def max_packing(D: Digraph, n: int = 1, cap: int = DEFAULT_DICYCLE_CAP,
                target: int | None = None) -> FractionalPacking:
    """A largest family of distinct even dicycles using every vertex at most n times.

    With ``target`` the search stops as soon as a family of that size is found.
    """
    if n < 1:
        raise PreconditionError("multiplicity bound must be positive")
    cycles = _even_cycles(D, cap)
    masks = [sum(1 << D.index(v) for v in c.vertices) for c in cycles]
    if target is not None and target <= 0:
        return FractionalPacking((), n)

    def fits(load: list[int], m: int) -> bool:
        while m:
            low = m & -m
            if load[low.bit_length() - 1] >= n:
                return False
            m ^= low
        return True

    def place(load: list[int], m: int, d: int) -> None:
        while m:
            low = m & -m
            load[low.bit_length() - 1] += d
            m ^= low

    # greedy incumbent
    load = [0] * D.n
    best: list[int] = []
    for i, m in enumerate(masks):
        if fits(load, m):
            place(load, m, 1)
            best.append(i)
    goal = len(cycles) if target is None else min(target, len(cycles))
    chosen: list[int] = []
    load = [0] * D.n

    def search(cands: list[int]) -> bool:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
            if len(best) >= goal:
                return True
        if len(chosen) + len(cands) <= len(best):
            return False
        room = sum(n - x for x in load)
        if len(chosen) + room // 2 <= len(best):
            return False
        for j, i in enumerate(cands):
            if len(chosen) + len(cands) - j <= len(best):
                return False
            place(load, masks[i], 1)
            chosen.append(i)
            rest = [x for x in cands[j + 1:] if fits(load, masks[x])]
            if search(rest):
                return True
            chosen.pop()
            place(load, masks[i], -1)
        return False

    if len(best) < goal:
        search(list(range(len(cycles))))
    return FractionalPacking(tuple(cycles[i] for i in sorted(best)), n)


def _min_hitting_set(sets: list[int], nbits: int) -> int:
    """A minimum hitting set of the given bitmasks, by iterative deepening."""

    def lower(unhit: list[int]) -> int:
        used, lb = 0, 0
        for m in sorted(unhit, key=lambda x: bin(x).count("1")):
            if not m & used:
                used |= m
                lb += 1
        return lb

    def dfs(chosen: int, unhit: list[int], budget: int) -> int | None:
        if not unhit:
            return chosen
        if budget == 0 or lower(unhit) > budget:
            return None
        pick = min(unhit, key=lambda x: bin(x).count("1"))
        m = pick
        while m:
            low = m & -m
            m ^= low
            res = dfs(chosen | low, [s for s in unhit if not s & low], budget - 1)
            if res is not None:
                return res
        return None

    for size in range(0, nbits + 1):
        res = dfs(0, list(sets), size)
        if res is not None:
            return res
    raise VerificationFailure("no hitting set found")  # unreachable for non-empty sets


def min_transversal(D: Digraph, cap: int = DEFAULT_DICYCLE_CAP) -> Transversal:
    """A minimum even-dicycle transversal, by lazily growing the list of dicycles to hit."""
    sets: list[int] = []
    S: frozenset = frozenset()
    while True:
        C = contains_even_dicycle(D.remove_vertices(S), cap)
        if C is None:
            break
        sets.append(sum(1 << D.index(v) for v in C.vertices))
        mask = _min_hitting_set(sets, D.n)
        S = frozenset(D.vertices[i] for i in range(D.n) if mask >> i & 1)
    T = Transversal(S)
    if not T.verify(D, cap):
        raise VerificationFailure("transversal does not re-verify")
    return T


@dataclass(frozen=True)
class ExtractResult:
    packing: FractionalPacking | None = None
    transversal: Transversal | None = None
    bound: int | None = None
    provenance: Mapping = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return "packing" if self.packing is not None else "transversal"

    def to_json(self, D: Digraph) -> dict:
        prov = dict(self.provenance)
        if self.bound is not None:
            prov["bound"] = self.bound
        if self.packing is not None:
            return self.packing.to_json(prov)
        return self.transversal.to_json(D, prov)


def _territory_even(D: Digraph, verts: Iterable[Vertex], removed: set, cap: int) -> Dicycle | None:
    keep = [v for v in verts if v not in removed]
    return contains_even_dicycle(D.subgraph(keep), cap)


def extract_low_dtw(D: Digraph, dec: DirTreeDecomposition, t: int,
                    cap: int = DEFAULT_DICYCLE_CAP) -> ExtractResult:
    """t disjoint even dicycles, or a transversal of size at most (width+1)(t-1)."""
    rep = validate_dtd(D, dec)
    if not rep.ok:
        raise VerificationFailure("invalid directed tree-decomposition: " + "; ".join(rep.violations))
    k = dtd_width(dec) + 1
    alive = set(dec.bags)
    removed: set = set()
    found: list[Dicycle] = []

    def subtree(x):
        return [y for y in dec.subtree(x) if y in alive]

    def terr(x):
        return set().union(*(dec.bags[y] for y in subtree(x)))

    while len(found) < t:
        top = [x for x in alive if dec.parent.get(x) not in alive]
        target = None
        todo = [x for x in top if _territory_even(D, terr(x), removed, cap) is not None]
        while todo:
            x = todo.pop()
            deeper = [c for c in dec.children(x) if c in alive
                      and _territory_even(D, terr(c), removed, cap) is not None]
            if deeper:
                todo = [deeper[0]]
            else:
                target = x
        if target is None:
            break
        found.append(_territory_even(D, terr(target), removed, cap))
        removed |= dec.gamma(target)
        alive -= set(subtree(target))
    prov = {"procedure": "low-dtw extraction", "width": k - 1}
    if len(found) >= t:
        p = FractionalPacking(tuple(found[:t]), 1)
        if not verify_packing(D, p, t, 1):
            raise VerificationFailure("extracted packing does not verify")
        return ExtractResult(packing=p, bound=k * (t - 1), provenance=prov)
    T = Transversal(frozenset(removed))
    if len(T) > k * (t - 1) or not T.verify(D, cap):
        raise VerificationFailure("extracted transversal violates its bound or does not re-verify")
    return ExtractResult(transversal=T, bound=k * (t - 1), provenance=prov)


# extraction from a strong odd decomposition

def restrict(dec: DirTreeDecomposition, keep: Iterable[Vertex]) -> DirTreeDecomposition:
    K = frozenset(keep)
    alpha = None if dec.alpha is None else {t: a & K for t, a in dec.alpha.items()}
    return DirTreeDecomposition(dec.root, dict(dec.parent), {t: b & K for t, b in dec.bags.items()},
                                {e: g & K for e, g in dec.guards.items()}, alpha)


def normalise_alpha(dec: DirTreeDecomposition) -> DirTreeDecomposition:
    """Add the guard of each node's parent edge to its alpha set."""
    alpha = {t: a | dec.guards.get((dec.parent[t], t), frozenset()) if t in dec.parent else a
             for t, a in dec.alpha.items()}
    return DirTreeDecomposition(dec.root, dec.parent, dec.bags, dec.guards, alpha)


def _odd_width(dec: DirTreeDecomposition) -> tuple[int, int]:
    return (max((len(a) for a in dec.alpha.values()), default=0),
            max((len(g) for g in dec.guards.values()), default=0))


def _main_bound(k: int, wa: int, wg: int) -> int:
    """Largest transversal the case analysis can return for parameter k."""
    if k <= 1:
        return 0
    return max(wa, 2 * wg, 2 * _main_bound(k - 1, wa, wg) + wg)


def extract_main(D: Digraph, dec: DirTreeDecomposition, k: int, cap: int = DEFAULT_DICYCLE_CAP,
                 check: bool = True) -> ExtractResult:
    """k even dicycles using each vertex at most four times, or a transversal.

    Every tree edge splits D minus its guard into two sides.  If some edge has even
    dicycles on both sides the search recurses with k-1 on each side; if some edge
    or a pair of edges at one node leave no even dicycle, their guards form the
    transversal; otherwise the edges point to a unique sink node whose alpha set is
    the transversal.
    """
    if dec.alpha is None:
        raise PreconditionError("decomposition has no alpha sets")
    if check:
        rep = validate_odd_dtd(D, dec, strong=True, cap=cap)
        if not rep.ok:
            raise VerificationFailure("invalid strong odd decomposition: " + "; ".join(rep.violations))
    dec = normalise_alpha(dec)
    wa, wg = _odd_width(dec)
    bound = _main_bound(k, wa, wg)
    res = _extract_main(D, dec, k, cap)
    if isinstance(res, Transversal):
        if len(res) > bound or not res.verify(D, cap):
            raise VerificationFailure("transversal violates its bound or does not re-verify")
        return ExtractResult(transversal=res, bound=bound, provenance={"procedure": "sink orientation"})
    p = FractionalPacking(tuple(res), 4)
    if not verify_packing(D, p, k, 4):
        raise VerificationFailure("extracted packing does not verify")
    return ExtractResult(packing=p, bound=bound, provenance={"procedure": "sink orientation"})


def _extract_main(D: Digraph, dec: DirTreeDecomposition, k: int, cap: int):
    if k <= 0:
        return []
    C = contains_even_dicycle(D, cap)
    if C is None:
        return Transversal(frozenset())
    if k == 1:
        return [C]
    V = set(D.vertices)
    pointing: dict[tuple, object] = {}
    for (p, c), g in dec.guards.items():
        below = dec.territory(c) & V
        side_c = D.subgraph([v for v in D.vertices if v in below and v not in g])
        side_p = D.subgraph([v for v in D.vertices if v not in below and v not in g])
        even_c = contains_even_dicycle(side_c, cap)
        even_p = contains_even_dicycle(side_p, cap)
        if even_c is None and even_p is None:
            return Transversal(frozenset(g & V))
        if even_c is not None and even_p is not None:
            sub_c = _extract_main(side_c, restrict(dec, side_c.vertices), k - 1, cap)
            sub_p = _extract_main(side_p, restrict(dec, side_p.vertices), k - 1, cap)
            if isinstance(sub_c, list):
                return sub_c + [even_p]
            if isinstance(sub_p, list):
                return sub_p + [even_c]
            return Transversal(frozenset(sub_c.vertices | sub_p.vertices | (g & V)))
        pointing[(p, c)] = c if even_c is not None else p
    out_edges: dict = {}
    for (p, c), head in pointing.items():
        tail = p if head == c else c
        out_edges.setdefault(tail, []).append((p, c))
    for t, es in out_edges.items():
        if len(es) >= 2:
            g1, g2 = dec.guards[es[0]], dec.guards[es[1]]
            return Transversal(frozenset((g1 | g2) & V))
    sinks = [t for t in dec.bags if t not in out_edges]
    if len(sinks) != 1:
        raise VerificationFailure("edge orientation has no unique sink")
    return Transversal(frozenset(dec.alpha[sinks[0]] & V))


# global decomposition with a local oracle

@dataclass(frozen=True)
class OracleAnswer:
    packing: FractionalPacking | None = None
    apex: frozenset | None = None


class LocalOracle(Protocol):
    def __call__(self, D: Digraph, Z: frozenset, k: int) -> OracleAnswer: ...


@dataclass
class DeskOracle:
    """Exact local oracle: a quarter-integral packing of k when one exists, else a minimum transversal.

    Its apex bound is the transversal number of the input, which in the worst case
    is exponential work to compute.
    """

    cap: int = DEFAULT_DICYCLE_CAP
    calls: int = 0

    def __call__(self, D: Digraph, Z: frozenset, k: int) -> OracleAnswer:
        self.calls += 1
        p = max_packing(D, 4, self.cap, target=k)
        if len(p) >= k:
            return OracleAnswer(packing=p)
        return OracleAnswer(apex=min_transversal(D, self.cap).vertices)


@dataclass(frozen=True)
class GlobalResult:
    decomposition: DirTreeDecomposition | None
    packing: FractionalPacking | None
    Z: frozenset
    linkedness: int
    bound: int
    nesting: int = 0
    oracle_calls: int = 0


def _balancing_set(D: Digraph, Z: frozenset, limit: int) -> frozenset | None:
    bound = 2 * len(Z)
    for size in range(0, limit + 1):
        for X in itertools.combinations(D.vertices, size):
            # strict, as for balanced separators; with <= any L vertices of Z would do
            if all(3 * len(Z & set(c)) < bound for c in strong_components(D.remove_vertices(X))):
                return frozenset(X)
    return None


class _Builder:
    """Recursive construction; ``depth`` counts how many separators a node inherited."""

    def __init__(self, k: int, L: int, oracle: LocalOracle):
        self.k, self.L, self.oracle = k, L, oracle
        self.ids = itertools.count()
        self.parent: dict = {}
        self.bags: dict = {}
        self.guards: dict = {}
        self.alpha: dict = {}
        self.depth: dict = {}

    def node(self, bag, alpha) -> int:
        t = next(self.ids)
        self.bags[t] = frozenset(bag)
        self.alpha[t] = frozenset(alpha)
        self.depth[t] = 0
        return t

    def _below(self, t: int) -> list[int]:
        out, todo = [], [t]
        while todo:
            x = todo.pop()
            out.append(x)
            todo += [c for c, p in self.parent.items() if p == x]
        return out

    def attach(self, r: int, sub: int, Zi: frozenset, sep: frozenset) -> None:
        # the separator joins every alpha and guard below, so dicycles that leave
        # the component stay guarded
        nodes = self._below(sub)
        for t in nodes:
            self.alpha[t] = self.alpha[t] | sep
            self.depth[t] += 1
            if t != sub:
                e = (self.parent[t], t)
                self.guards[e] = self.guards[e] | sep
        self.bags[sub] = self.bags[sub] - Zi
        self.parent[sub] = r
        self.guards[(r, sub)] = Zi | sep

    def build(self, D: Digraph, Z: frozenset):
        """Root of a decomposition of D with Z inside alpha(root), or a packing."""
        L = self.L
        if D.n < 3 * L:
            return self.node(D.vertices, D.vertices)
        if len(Z) < 3 * L:
            extra = [v for v in D.vertices if v not in Z][: 3 * L - len(Z)]
            Z = Z | frozenset(extra)
        X = _balancing_set(D, Z, L)
        if X is not None:
            sep = X
            comps = [frozenset(c) for c in strong_components(D.remove_vertices(X))]
            r = self.node(Z | X, Z | X)
            rest = comps
        else:
            ans = self.oracle(D, Z, self.k)
            if ans.packing is not None:
                return ans.packing
            if ans.apex is None:
                raise OracleFailure("local oracle returned neither a packing nor an apex set")
            sep = frozenset(ans.apex)
            if contains_even_dicycle(D.remove_vertices(sep)) is not None:
                raise OracleFailure("apex set leaves an even dicycle")
            comps = [frozenset(c) for c in strong_components(D.remove_vertices(sep))]
            if not comps:
                return self.node(D.vertices, D.vertices)
            heavy = max(comps, key=lambda c: (len(c & Z), -min(D.index(v) for v in c)))
            r = self.node(heavy | Z | sep, sep | Z)
            rest = [c for c in comps if c != heavy]
        for comp in rest:
            Zi = comp & Z
            sub = self.build(D.subgraph([v for v in D.vertices if v in comp]), Zi)
            if isinstance(sub, FractionalPacking):
                return sub
            self.attach(r, sub, Zi, sep)
        return r


def global_decompose(D: Digraph, k: int, Z: Iterable[Vertex] = (), oracle: LocalOracle | None = None,
                     linkedness: int | None = None, gate: int = 12,
                     cap: int = DEFAULT_DICYCLE_CAP) -> GlobalResult:
    """A strong odd decomposition with Z inside the root's alpha set, or a packing.

    ``linkedness`` L plays the part of the separator size in the balanced case; by
    default it is the transversal number (at least 1), which bounds every apex set
    the desk oracle returns.  Alpha sets and guards then hold at most (4 + h) L
    vertices, where h is the deepest nesting of inherited separators.
    """
    if D.n > gate:
        raise GateExceeded(f"global decomposition is gated to {gate} vertices")
    oracle = oracle if oracle is not None else DeskOracle(cap)
    Zs = frozenset(Z)
    if not Zs <= set(D.vertices):
        raise PreconditionError("Z must be a set of vertices of D")
    L = linkedness if linkedness is not None else max(1, len(min_transversal(D, cap)))
    if len(Zs) > 3 * L:
        raise PreconditionError("Z may hold at most three times the linkedness parameter")
    b = _Builder(k, L, oracle)
    root = b.build(D, Zs)
    calls = getattr(oracle, "calls", 0)
    if isinstance(root, FractionalPacking):
        if not verify_packing(D, root, k, 4):
            raise VerificationFailure("oracle packing does not verify in D")
        return GlobalResult(None, root, Zs, L, 4 * L, 0, calls)
    dec = DirTreeDecomposition(root, b.parent, b.bags, b.guards, b.alpha)
    h = max(b.depth.values(), default=0)
    return GlobalResult(dec, None, Zs, L, (4 + h) * L, h, calls)


def audit_global(D: Digraph, res: GlobalResult, cap: int = DEFAULT_DICYCLE_CAP) -> list[str]:
    """Properties of the recursion's output, keyed (a) to (g); empty when all hold."""
    dec = res.decomposition
    if dec is None:
        return [] if verify_packing(D, res.packing, 0, 4) else ["packing does not verify"]
    bad = []
    B = res.bound
    for e, g in dec.guards.items():
        if len(g) > B:
            bad.append(f"(a) guard of {e!r} has {len(g)} > {B} vertices")
        if not g <= dec.alpha[e[1]]:
            bad.append(f"(f) guard of {e!r} is not inside alpha of its head")
        if g & dec.territory(e[1]):
            bad.append(f"(g) guard of {e!r} meets the bags below it")
    for t, a in dec.alpha.items():
        if not a <= dec.gamma(t):
            bad.append(f"(b) alpha of {t!r} is not inside Gamma")
        if len(a) > B:
            bad.append(f"(c) alpha of {t!r} has {len(a)} > {B} vertices")
    rep = validate_odd_dtd(D, dec, strong=True, cap=cap)
    bad += [f"(d) {v}" for v in rep.violations]
    if not (res.Z <= dec.alpha[dec.root] <= dec.bags[dec.root]):
        bad.append("(e) Z is not inside alpha of the root, or alpha escapes the root bag")
    return bad


# counterexample family

def counterexample_family(k: int, certify_up_to: int = 4, cap: int = DEFAULT_DICYCLE_CAP) -> Digraph:
    """Planar digraph with no two disjoint even dicycles whose even dicycles need k vertices to hit.

    k concentric dicycles of length 2k+1 joined by alternating radial paths.  Every
    dicycle winds once, so it passes exactly one of the vertices ``s{c}`` in the radial-free
    slot.  The outward radial edges between the two innermost cycles carry a subdivision
    vertex ``o{p}``, and a dicycle is even exactly when it uses an odd number of these,
    which forces it to touch the innermost cycle; two disjoint winding dicycles are nested,
    so they cannot both do that.  A radial cut of k vertices hits every dicycle.
    """
    if k < 2:
        raise PreconditionError("family is defined for k >= 2")
    G = cylindrical_grid(k)
    last = 2 * k - 1
    verts = list(G.vertices)
    edges = []
    for u, v in G.edges:
        cu, pu = map(int, u[1:].split("_"))
        cv, pv = map(int, v[1:].split("_"))
        if cu == cv and pu == last and pv == 0:
            s = f"s{cu}"
            verts.append(s)
            edges += [(u, s), (s, v)]
        elif cu == 1 and cv == 2 and pu == pv:
            o = f"o{pu}"
            verts.append(o)
            edges += [(u, o), (o, v)]
        else:
            edges.append((u, v))
    D = Digraph(verts, edges)
    if k <= certify_up_to:
        if len(max_packing(D, 1, cap, target=2)) != 1:
            raise VerificationFailure("family member has two disjoint even dicycles")
        if len(min_transversal(D, cap)) < k:
            raise VerificationFailure("family member has a transversal smaller than k")
    return D


def radial_cut(k: int) -> frozenset:
    """The k vertices at position 0, one per concentric dicycle."""
    return frozenset(vname(c, 0) for c in range(1, k + 1))


# disjoint paths

def _simple_paths(D: Digraph, s: Vertex, t: Vertex, blocked: set) -> Iterable[list[Vertex]]:
    if s == t:
        yield [s]
        return
    path, on = [s], {s}

    def rec(u):
        for w in D.successors(u):
            if w == t:
                yield path + [t]
            elif w not in on and w not in blocked:
                on.add(w)
                path.append(w)
                yield from rec(w)
                path.pop()
                on.discard(w)

    yield from rec(s)


def ddpp_solution_ok(D: Digraph, pairs: Sequence[tuple[Vertex, Vertex]],
                     paths: Sequence[Sequence[Vertex]]) -> bool:
    """Paths join their pairs and meet only at their ends."""
    if len(paths) != len(pairs):
        return False
    for (s, t), p in zip(pairs, paths):
        if not p or p[0] != s or p[-1] != t or len(set(p)) != len(p):
            return False
        if any(not D.has_edge(a, b) for a, b in zip(p, p[1:])):
            return False
    for i, j in itertools.combinations(range(len(paths)), 2):
        ends_i = {paths[i][0], paths[i][-1]}
        ends_j = {paths[j][0], paths[j][-1]}
        common = set(paths[i]) & set(paths[j])
        if not common <= (ends_i & ends_j):
            return False
    return True


def t_ddpp(D: Digraph, pairs: Sequence[tuple[Vertex, Vertex]], gate: int = 12,
           order: Sequence[int] | None = None) -> list[list[Vertex]] | None:
    """Internally disjoint s_i-t_i paths, by backtracking over the pairs in ``order``."""
    if D.n > gate:
        raise GateExceeded(f"disjoint paths search is gated to {gate} vertices")
    if len(pairs) > 4:
        raise PreconditionError("at most four terminal pairs")
    for s, t in pairs:
        if s not in D or t not in D:
            raise PreconditionError("terminal not in digraph")
    order = list(range(len(pairs))) if order is None else list(order)
    terminals = {x for st in pairs for x in st}
    chosen: dict[int, list[Vertex]] = {}

    def rec(i: int, used: set) -> bool:
        if i == len(order):
            return True
        s, t = pairs[order[i]]
        for p in _simple_paths(D, s, t, used | terminals):
            chosen[order[i]] = p
            if rec(i + 1, used | set(p[1:-1])):
                return True
        return False

    if not rec(0, set()):
        return None
    out = [chosen[i] for i in range(len(pairs))]
    if not ddpp_solution_ok(D, pairs, out):
        raise VerificationFailure("disjoint paths do not verify")
    return out


# perfect matching counting

def _pfaffian_count(G: BipartiteGraph, cap: int) -> int | None:
    """Number of perfect matchings as |det| of a Pfaffian signing, or None when there is none."""
    if len(G.left) != len(G.right):
        return 0
    if not G.left:
        return 1
    o = _matching.has_pfaffian_orientation(G, cap)
    if o is None:
        return None
    li = {a: i for i, a in enumerate(G.left)}
    ri = {b: i for i, b in enumerate(G.right)}
    M = np.zeros((len(G.left), len(G.right)))
    for e, (tail, _) in o.items():
        a, b = e
        M[li[a], ri[b]] = 1.0 if tail == a else -1.0
    return abs(int(round(np.linalg.det(M))))


@dataclass(frozen=True)
class MatchingCount:
    direct: int
    stratified: int
    transversal: tuple
    strata: int
    fallback_strata: int


def count_pm_via_transversal(B: MatchedBipartite, gate: int = 16,
                             cap: int = DEFAULT_DICYCLE_CAP) -> MatchingCount:
    """Perfect matchings counted directly and through an even-dicycle transversal.

    The transversal of the matching's digraph names matching edges F whose ends
    leave a Pfaffian remainder.  Matchings are grouped by how they cover the ends of
    F; each group is counted as the determinant of a Pfaffian signing of what is left.
    A group whose remainder has no Pfaffian signing is counted directly and reported.
    """
    n = len(B.vertices)
    if n > gate:
        raise GateExceeded(f"matching counting is gated to {gate} vertices")
    direct = len(_matching.enumerate_perfect_matchings(B, cap))
    D = _matching.m_direction(B)
    S = min_transversal(D, cap)
    label_edge = dict(zip(B.labels, B.matching))
    ends = [x for lab in D.vertices if lab in S.vertices for x in label_edge[lab]]
    total, strata, fallback = 0, 0, 0
    used: set = set()

    def rec(i: int):
        nonlocal total, strata, fallback
        if i == len(ends):
            strata += 1
            R = B.remove_vertices(used)
            cnt = _pfaffian_count(R, cap)
            if cnt is None:
                fallback += 1
                cnt = _matching.count_perfect_matchings(R)
            total += cnt
            return
        u = ends[i]
        if u in used:
            rec(i + 1)
            return
        for w in B.neighbours(u):
            if w not in used:
                used.update((u, w))
                rec(i + 1)
                used.difference_update((u, w))

    rec(0)
    if total != direct:
        raise VerificationFailure(f"stratified count {total} disagrees with direct count {direct}")
    return MatchingCount(direct, total, tuple(S.sorted(D)), strata, fallback)
