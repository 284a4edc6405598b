"""Directed tree-decompositions and their odd variant, plus tangles and linkedness tests."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .core import (
    DEFAULT_DICYCLE_CAP,
    Dicycle,
    Digraph,
    DirSeparation,
    Vertex,
    enumerate_dicycles,
    reachable,
    strong_components,
)
from .errors import CapExceeded, GateExceeded, PreconditionError, VerificationFailure
from .routing import menger

Node = Hashable
DEC_SCHEMA = "evendicycle.dtd/1"


@dataclass(frozen=True)
class DirTreeDecomposition:
    root: Node
    parent: Mapping[Node, Node]  # every non-root node to its parent
    bags: Mapping[Node, frozenset]
    guards: Mapping[tuple[Node, Node], frozenset]  # keyed by (parent, child)
    alpha: Mapping[Node, frozenset] | None = None

    @property
    def nodes(self) -> list[Node]:
        return list(self.bags)

    def children(self, t: Node) -> list[Node]:
        return [c for c, p in self.parent.items() if p == t]

    def subtree(self, t: Node) -> list[Node]:
        out, todo = [], [t]
        while todo:
            x = todo.pop()
            out.append(x)
            todo += self.children(x)
        return out

    def territory(self, t: Node) -> frozenset:
        return frozenset().union(*(self.bags[x] for x in self.subtree(t)))

    def incident_edges(self, t: Node) -> list[tuple[Node, Node]]:
        return [e for e in self.guards if t in e]

    def gamma(self, t: Node) -> frozenset:
        out = set(self.bags[t])
        for e in self.incident_edges(t):
            out |= self.guards[e]
        return frozenset(out)

    def to_json(self) -> dict:
        def enc(s):
            return sorted(s, key=repr)

        nodes = []
        for t in self.bags:
            item = {"id": t, "parent": self.parent.get(t), "bag": enc(self.bags[t])}
            if t in self.parent:
                item["guard"] = enc(self.guards[(self.parent[t], t)])
            if self.alpha is not None:
                item["alpha"] = enc(self.alpha[t])
            nodes.append(item)
        return {"schema": DEC_SCHEMA, "root": self.root, "nodes": nodes}

    @classmethod
    def from_json(cls, data: dict) -> "DirTreeDecomposition":
        if data.get("schema") != DEC_SCHEMA:
            raise PreconditionError("unknown decomposition schema")
        parent, bags, guards, alpha = {}, {}, {}, {}
        has_alpha = False
        for item in data["nodes"]:
            t = item["id"]
            bags[t] = frozenset(item["bag"])
            if item.get("parent") is not None:
                parent[t] = item["parent"]
                guards[(item["parent"], t)] = frozenset(item.get("guard", ()))
            if "alpha" in item:
                has_alpha = True
                alpha[t] = frozenset(item["alpha"])
        return cls(data["root"], parent, bags, guards, alpha if has_alpha else None)


@dataclass
class Report:
    ok: bool
    violations: list[str] = field(default_factory=list)
    witness: Dicycle | None = None

    def __bool__(self) -> bool:
        return self.ok


def strongly_guards(D: Digraph, guard: Iterable[Vertex], X: Iterable[Vertex]) -> bool:
    """Every walk that starts and ends in X and leaves X meets the guard."""
    Y, Xs = set(guard), set(X)
    start = Xs - Y
    if not start:
        return True
    fwd = reachable(D, start, avoid=Y)
    back = reachable(D, start, avoid=Y, reverse=True)
    return not ((fwd & back) - Xs)


def guards_dicycles(D: Digraph, guard: Iterable[Vertex], side: Iterable[Vertex]) -> bool:
    """Every dicycle meeting both ``side`` and its complement meets the guard."""
    Y, S = set(guard), set(side)
    H = D.remove_vertices(Y)
    for comp in strong_components(H):
        c = set(comp)
        if c & S and c - S:
            return False
    return True


def _tree_problems(D: Digraph, dec: DirTreeDecomposition) -> list[str]:
    bad = []
    nodes = set(dec.bags)
    if dec.root not in nodes or dec.root in dec.parent:
        bad.append("root is missing or has a parent")
    for c, p in dec.parent.items():
        if c not in nodes or p not in nodes:
            bad.append(f"tree edge {(p, c)!r} uses an unknown node")
        if (p, c) not in dec.guards:
            bad.append(f"tree edge {(p, c)!r} has no guard")
    if set(dec.guards) != {(p, c) for c, p in dec.parent.items()}:
        bad.append("guards are not indexed by the tree edges")
    for t in nodes:
        seen, x = set(), t
        while x in dec.parent:
            if x in seen:
                bad.append("tree has a cycle")
                return bad
            seen.add(x)
            x = dec.parent[x]
        if x != dec.root:
            bad.append(f"node {t!r} is not below the root")
    seen_v: dict[Vertex, Node] = {}
    for t, bag in dec.bags.items():
        for v in bag:
            if v not in D:
                bad.append(f"bag of {t!r} holds unknown vertex {v!r}")
            elif v in seen_v:
                bad.append(f"vertex {v!r} lies in the bags of {seen_v[v]!r} and {t!r}")
            seen_v[v] = t
    missing = set(D.vertices) - set(seen_v)
    if missing:
        bad.append(f"vertices {sorted(missing, key=D.index)!r} lie in no bag")
    return bad


def validate_dtd(D: Digraph, dec: DirTreeDecomposition) -> Report:
    bad = _tree_problems(D, dec)
    if bad:
        return Report(False, bad)
    for (p, c), g in dec.guards.items():
        if not strongly_guards(D, g, dec.territory(c)):
            bad.append(f"guard of {(p, c)!r} does not strongly guard the subtree below {c!r}")
    return Report(not bad, bad)


def dtd_width(dec: DirTreeDecomposition) -> int:
    return max(len(dec.gamma(t)) for t in dec.bags) - 1


def odd_dtd_width(dec: DirTreeDecomposition) -> int:
    if dec.alpha is None:
        raise PreconditionError("decomposition has no alpha sets")
    sizes = [len(a) for a in dec.alpha.values()] + [len(g) for g in dec.guards.values()]
    return max(sizes, default=0)


def _even_dicycle_through(D: Digraph, removed: Iterable[Vertex], targets: Iterable[Vertex],
                          cap: int) -> Dicycle | None:
    H = D.remove_vertices(removed)
    want = set(targets) & set(H.vertices)
    for comp in strong_components(H):
        if len(comp) < 2 or not (set(comp) & want):
            continue
        for C in enumerate_dicycles(H.subgraph(comp), cap=cap):
            if C.length % 2 == 0 and C.vertex_set() & want:
                return C
    return None


def validate_odd_dtd(D: Digraph, dec: DirTreeDecomposition, strong: bool = False,
                     cap: int = DEFAULT_DICYCLE_CAP) -> Report:
    """Partition, alpha inside Gamma, no even dicycle off alpha through Gamma, dicycle guarding;
    with ``strong`` also no strong component of D - alpha(t) meeting both Gamma(t) and the rest."""
    if dec.alpha is None:
        raise PreconditionError("decomposition has no alpha sets")
    bad = _tree_problems(D, dec)
    if set(dec.alpha) != set(dec.bags):
        bad.append("alpha is not defined on every node")
    if bad:
        return Report(False, bad)
    witness = None
    for t in dec.bags:
        gam, al = dec.gamma(t), dec.alpha[t]
        if not al <= gam:
            bad.append(f"alpha of {t!r} is not inside its Gamma")
        C = _even_dicycle_through(D, al, gam - al, cap)
        if C is not None:
            bad.append(f"even dicycle {C.vertices!r} avoids alpha of {t!r} and meets its Gamma")
            witness = witness or C
        if strong:
            H = D.remove_vertices(al)
            for comp in strong_components(H):
                cs = set(comp)
                if cs & gam and cs - gam:
                    bad.append(f"a strong component of D - alpha({t!r}) meets Gamma and its complement")
                    break
    for (p, c), g in dec.guards.items():
        if not guards_dicycles(D, g, dec.territory(c)):
            bad.append(f"guard of {(p, c)!r} misses a dicycle crossing that tree edge")
    return Report(not bad, bad, witness)


def with_full_alpha(dec: DirTreeDecomposition) -> DirTreeDecomposition:
    return DirTreeDecomposition(dec.root, dec.parent, dec.bags, dec.guards,
                                {t: dec.gamma(t) for t in dec.bags})


def single_bag(D: Digraph) -> DirTreeDecomposition:
    return DirTreeDecomposition(0, {}, {0: frozenset(D.vertices)}, {})


# exact directed treewidth by exhaustive search

class _DtwSearch:
    """Decides width <= w over territories (vertex bitmasks) and incoming guards.

    A node owns territory Z; it picks a bag B inside Z, a budget set U with
    |U| <= w+1 holding B and its parent guard, and splits Z - B into child
    territories whose guards are subsets of U.  Chains of empty-bag nodes are
    handled by closing the set of workable guards under one-step guard changes.
    """

    def __init__(self, D: Digraph, w: int):
        self.D, self.w, self.n = D, w, D.n
        self.verts = D.vertices
        self.full = (1 << self.n) - 1
        self.guards = [m for m in range(1 << self.n) if bin(m).count("1") <= w + 1]
        self._guards_ok: dict[tuple[int, int], bool] = {}
        self._good: dict[int, dict[int, tuple]] = {}

    def vs(self, m: int) -> set:
        return {self.verts[i] for i in range(self.n) if m >> i & 1}

    def guard_ok(self, g: int, z: int) -> bool:
        key = (g, z)
        if key not in self._guards_ok:
            self._guards_ok[key] = strongly_guards(self.D, self.vs(g), self.vs(z))
        return self._guards_ok[key]

    def good(self, z: int) -> dict[int, tuple]:
        """Parent guards g under which territory z decomposes, with a reconstruction hint."""
        if z in self._good:
            return self._good[z]
        res: dict[int, tuple] = {}
        sub_ok: dict[tuple[int, int], int | None] = {}

        def ok(p: int, u: int):
            key = (p, u)
            if key not in sub_ok:
                gp = self.good(p)
                sub_ok[key] = next((g for g in gp if g & ~u == 0 and self.guard_ok(g, p)), None)
            return sub_ok[key]

        part_memo: dict[tuple[int, int], list | None] = {}

        def split(r: int, u: int, forbid_whole: int):
            if r == 0:
                return []
            key = (r, u)
            if key in part_memo and forbid_whole == 0:
                return part_memo[key]
            low = r & -r
            rest = r & ~low
            sub = rest
            found = None
            while True:
                p = sub | low
                if p != forbid_whole:
                    g = ok(p, u)
                    if g is not None:
                        tail = split(r & ~p, u, 0)
                        if tail is not None:
                            found = [(p, g)] + tail
                            break
                if sub == 0:
                    break
                sub = (sub - 1) & rest
            if forbid_whole == 0:
                part_memo[key] = found
            return found

        for g in self.guards:
            hit = self._direct(z, g, split)
            if hit is not None:
                res[g] = ("node",) + hit
        # empty-bag chains: g works if some working g2 guards z and fits with g
        changed = True
        while changed:
            changed = False
            for g in self.guards:
                if g in res:
                    continue
                for g2, _ in list(res.items()):
                    if bin(g | g2).count("1") <= self.w + 1 and self.guard_ok(g2, z):
                        res[g] = ("chain", g2)
                        changed = True
                        break
        self._good[z] = res
        return res

    def _direct(self, z: int, g: int, split) -> tuple | None:
        w1 = self.w + 1
        sub = z
        while True:
            b = sub
            base = b | g
            if bin(base).count("1") <= w1:
                r = z & ~b
                free = [i for i in range(self.n) if not base >> i & 1]
                room = w1 - bin(base).count("1")
                for extra in range(0, room + 1):
                    for pick in itertools.combinations(free, extra):
                        u = base
                        for i in pick:
                            u |= 1 << i
                        parts = split(r, u, z if b == 0 else 0)
                        if parts is not None:
                            return (b, u, parts)
            if sub == 0:
                break
            sub = (sub - 1) & z
        return None

    def build(self) -> DirTreeDecomposition | None:
        top = self.good(self.full) if self.n else {0: ("node", 0, 0, [])}
        if 0 not in top:
            return None
        bags, parent, guards = {}, {}, {}
        counter = itertools.count()

        def emit(z: int, g: int) -> Node:
            t = next(counter)
            hint = self._good[z][g] if self.n else top[0]
            if hint[0] == "chain":
                bags[t] = frozenset()
                c = emit(z, hint[1])
                parent[c] = t
                guards[(t, c)] = frozenset(self.vs(hint[1]))
                return t
            _, b, u, parts = hint
            bags[t] = frozenset(self.vs(b))
            for p, gp in parts:
                c = emit(p, gp)
                parent[c] = t
                guards[(t, c)] = frozenset(self.vs(gp))
            return t

        root = emit(self.full, 0)
        return DirTreeDecomposition(root, parent, bags, guards)


@dataclass(frozen=True)
class DtwResult:
    width: int
    decomposition: DirTreeDecomposition


def brute_force_dtw(D: Digraph, max_width: int | None = None, size_gate: int = 7) -> DtwResult:
    """Exact directed treewidth with an optimal decomposition, by exhaustive search."""
    if D.n > size_gate:
        raise GateExceeded(f"exhaustive directed treewidth is gated to {size_gate} vertices")
    limit = D.n - 1 if max_width is None else max_width
    for w in range(0, max(limit, 0) + 1):
        dec = _DtwSearch(D, w).build()
        if dec is not None:
            return DtwResult(w, dec)
    if D.n == 0:
        return DtwResult(-1, single_bag(D))
    raise CapExceeded(f"directed treewidth exceeds {limit}", partial=None, cap=limit)


# separations and tangles

def directed_separations(D: Digraph, k: int, cap: int = 200_000) -> list[DirSeparation]:
    """All directed separations of order below k.

    For each separator S the A-only side must be closed under predecessors in D - S,
    so it is a down-set of the condensation; those are listed recursively.
    """
    out: list[DirSeparation] = []
    for size in range(0, min(k - 1, D.n) + 1):
        for sep in itertools.combinations(D.vertices, size):
            S = frozenset(sep)
            H = D.remove_vertices(S)
            comps = [frozenset(c) for c in strong_components(H)]
            where = {v: i for i, c in enumerate(comps) for v in c}
            preds = [set() for _ in comps]
            for u, v in H.edges:
                if where[u] != where[v]:
                    preds[where[v]].add(where[u])
            rest_all = frozenset(H.vertices)

            def grow(i: int, chosen: set):
                if i == len(comps):
                    a_only = frozenset().union(*(comps[j] for j in chosen)) if chosen else frozenset()
                    out.append(DirSeparation(a_only | S, (rest_all - a_only) | S))
                    if len(out) > cap:
                        raise GateExceeded(f"more than {cap} directed separations")
                    return
                grow(i + 1, chosen)
                if preds[i] <= chosen:
                    chosen.add(i)
                    grow(i + 1, chosen)
                    chosen.discard(i)

            grow(0, set())
    return out


@dataclass(frozen=True)
class TangleOrientation:
    order: int
    big: Mapping[DirSeparation, frozenset]

    def small(self, sep: DirSeparation) -> frozenset:
        return sep.side_b if self.big[sep] == sep.side_a else sep.side_a


def orientation_is_tangle(D: Digraph, k: int, big: Mapping[DirSeparation, frozenset] | TangleOrientation,
                          cap: int = 200_000) -> bool:
    """No three small sides cover V(D); every separation of order < k must be oriented to a side."""
    mapping = big.big if isinstance(big, TangleOrientation) else big
    seps = directed_separations(D, k, cap)
    full = (1 << D.n) - 1
    smalls = set()
    for s in seps:
        side = mapping.get(s)
        if side not in (s.side_a, s.side_b):
            return False
        other = s.side_b if side == s.side_a else s.side_a
        m = 0
        for v in other:
            m |= 1 << D.index(v)
        smalls.add(m)
    # only inclusion-maximal small sides can matter
    maximal = [m for m in smalls if not any(m != o and m & o == m for o in smalls)]
    for a, b, c in itertools.combinations_with_replacement(maximal, 3):
        if a | b | c == full:
            return False
    return True


def wall_tangle(D: Digraph, W, k: int, cap: int = 200_000) -> TangleOrientation:
    """Orient every separation of order < k towards the side holding a whole vertical cycle of W."""
    if W.n_columns < 3 * k:
        raise PreconditionError("wall order must be at least 3k")
    cycles = [W.vertical_cycle(x).vertex_set() for x in range(1, W.n_columns + 1)]
    big = {}
    for s in directed_separations(D, k, cap):
        sep = s.separator
        sides = [X for X in (s.side_a, s.side_b) if any(q <= X - sep for q in cycles)]
        if len(set(sides)) != 1:
            raise VerificationFailure("separation has no unique side holding a vertical cycle")
        big[s] = sides[0]
    return TangleOrientation(k, big)


def is_balanced_separator(D: Digraph, X: Iterable[Vertex], S: Iterable[Vertex]) -> bool:
    xs = set(X)
    bound = Fraction(2, 3) * len(xs)
    for comp in strong_components(D.remove_vertices(S)):
        if len(xs & set(comp)) >= bound:
            return False
    return True


def balanced_separator(D: Digraph, X: Iterable[Vertex], max_size: int, gate: int = 10) -> frozenset | None:
    """A smallest balanced separator for X of size at most ``max_size``, or None."""
    if D.n > gate:
        raise GateExceeded(f"balanced separator search is gated to {gate} vertices")
    xs = list(X)
    for size in range(0, min(max_size, D.n) + 1):
        for S in itertools.combinations(D.vertices, size):
            if is_balanced_separator(D, xs, S):
                return frozenset(S)
    return None


def is_k_linked(D: Digraph, X: Iterable[Vertex], k: int, gate: int = 10) -> bool:
    return balanced_separator(D, X, k - 1, gate) is None


def linked_set_tangle(D: Digraph, X: Iterable[Vertex], k: int, cap: int = 200_000) -> TangleOrientation:
    """Orient each separation towards the strong component holding at least 2/3 of X."""
    xs = set(X)
    bound = Fraction(2, 3) * len(xs)
    big = {}
    for s in directed_separations(D, k, cap):
        heavy = [set(c) for c in strong_components(D.remove_vertices(s.separator))
                 if len(xs & set(c)) >= bound]
        if len(heavy) != 1:
            raise PreconditionError("X is not k-linked")
        big[s] = s.side_a if heavy[0] <= s.side_a else s.side_b
    return TangleOrientation(k, big)


def is_well_linked(D: Digraph, Wset: Iterable[Vertex], gate: int = 8) -> bool:
    """For all equal-size A, B inside W there are |A| disjoint A-B paths avoiding the rest of W."""
    ws = [v for v in D.vertices if v in set(Wset)]
    if len(ws) > gate:
        raise GateExceeded(f"well-linkedness is gated to sets of size {gate}")
    for size in range(1, len(ws) + 1):
        for A in itertools.combinations(ws, size):
            for B in itertools.combinations(ws, size):
                drop = set(ws) - set(A) - set(B)
                H = D.remove_vertices(drop)
                if len(menger(H, A, B)[0]) < size:
                    return False
    return True
