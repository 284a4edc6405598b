"""Pure-Python reference implementations of the hot kernels.

Every function here has a twin of the same signature in ``_ckernels``;
``kernels`` picks one at import time.
"""
from __future__ import annotations


class KernelCapExceeded(Exception):
    def __init__(self, partial):
        super().__init__("cap exceeded")
        self.partial = partial


def _component_of(s: int, succ: list[list[int]], pred: list[list[int]]) -> set[int]:
    # vertices >= s that are both reachable from s and reach s inside the
    # subgraph induced by {s, s+1, ...}
    fwd = {s}
    stack = [s]
    while stack:
        v = stack.pop()
        for w in succ[v]:
            if w > s and w not in fwd:
                fwd.add(w)
                stack.append(w)
    comp = {s}
    stack = [s]
    while stack:
        v = stack.pop()
        for w in pred[v]:
            if w in fwd and w not in comp:
                comp.add(w)
                stack.append(w)
    return comp


def simple_cycles(n: int, succ: list[list[int]], cap: int) -> list[tuple[int, ...]]:
    """All elementary circuits on vertices ``0..n-1``, each led by its minimum.

    Johnson's circuit search, one start vertex at a time. Raises
    ``KernelCapExceeded`` with the first ``cap`` circuits once a
    ``cap + 1``-th one is found.
    """
    pred: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        for w in succ[v]:
            pred[w].append(v)
    out: list[tuple[int, ...]] = []
    for s in range(n):
        comp = _component_of(s, succ, pred)
        if len(comp) < 2:
            continue
        nbrs = {v: [w for w in succ[v] if w in comp] for v in comp}
        blocked = {s}
        bset: dict[int, set[int]] = {v: set() for v in comp}
        path = [s]
        stack = [iter(nbrs[s])]
        closed = [False]
        while stack:
            for w in stack[-1]:
                if w == s:
                    out.append(tuple(path))
                    if len(out) > cap:
                        raise KernelCapExceeded(out[:cap])
                    closed[-1] = True
                elif w not in blocked:
                    path.append(w)
                    closed.append(False)
                    stack.append(iter(nbrs[w]))
                    blocked.add(w)
                    break
            else:
                stack.pop()
                v = path.pop()
                if closed.pop():
                    if closed:
                        closed[-1] = True
                    todo = [v]
                    while todo:
                        u = todo.pop()
                        if u in blocked:
                            blocked.discard(u)
                            todo.extend(bset[u])
                            bset[u].clear()
                else:
                    for w in nbrs[v]:
                        bset[w].add(v)
    return out


def count_perfect_matchings(n: int, adj: list[int]) -> int:
    """Number of perfect matchings of a bipartite graph with sides of size ``n``.

    ``adj[i]`` is a bitmask of the right-side neighbours of left vertex ``i``.
    Subset DP over the right side, O(2^n n).
    """
    ways = [0] * (1 << n)
    ways[0] = 1
    for mask in range(1 << n):
        w = ways[mask]
        if not w:
            continue
        i = mask.bit_count()
        if i >= n:
            continue
        free = adj[i] & ~mask
        while free:
            low = free & -free
            ways[mask | low] += w
            free ^= low
    return ways[(1 << n) - 1]
