# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the functions in ``_pykernels``."""
from libc.stdlib cimport malloc, free

from evendicycle._pykernels import KernelCapExceeded


def simple_cycles(int n, succ, long cap):
    cdef int *off = <int *> malloc((n + 1) * sizeof(int))
    cdef int total = 0
    cdef int v, w, s, i, top, u, depth
    for v in range(n):
        total += len(succ[v])
    cdef int *tgt = <int *> malloc((total + 1) * sizeof(int))
    cdef char *blocked = <char *> malloc(n + 1)
    cdef char *incomp = <char *> malloc(n + 1)
    cdef char *mark = <char *> malloc(n + 1)
    cdef int *path = <int *> malloc((n + 1) * sizeof(int))
    cdef int *pos = <int *> malloc((n + 1) * sizeof(int))
    cdef char *closed = <char *> malloc(n + 1)
    # unblocking may push a vertex once per set bit of the bit matrix
    cdef int *work = <int *> malloc((n * n + n + 1) * sizeof(int))
    # bset as an n x n bit matrix of chars
    cdef char *bmat = <char *> malloc(n * n + 1)
    out = []
    try:
        i = 0
        for v in range(n):
            off[v] = i
            for w in succ[v]:
                tgt[i] = w
                i += 1
        off[n] = i
        for s in range(n):
            # forward reach from s within {>= s}
            for v in range(n):
                mark[v] = 0
                incomp[v] = 0
            mark[s] = 1
            top = 0
            work[top] = s
            top = 1
            while top:
                top -= 1
                v = work[top]
                for i in range(off[v], off[v + 1]):
                    w = tgt[i]
                    if w > s and not mark[w]:
                        mark[w] = 1
                        work[top] = w
                        top += 1
            # backward closure inside the forward set
            incomp[s] = 1
            changed = True
            while changed:
                changed = False
                for v in range(s + 1, n):
                    if mark[v] and not incomp[v]:
                        for i in range(off[v], off[v + 1]):
                            if incomp[tgt[i]]:
                                incomp[v] = 1
                                changed = True
                                break
            u = 0
            for v in range(s, n):
                u += incomp[v]
            if u < 2:
                continue
            for v in range(n):
                blocked[v] = 0
                for w in range(n):
                    bmat[v * n + w] = 0
            blocked[s] = 1
            depth = 0
            path[0] = s
            pos[0] = off[s]
            closed[0] = 0
            while depth >= 0:
                v = path[depth]
                advanced = False
                while pos[depth] < off[v + 1]:
                    w = tgt[pos[depth]]
                    pos[depth] += 1
                    if not incomp[w]:
                        continue
                    if w == s:
                        out.append(tuple([path[i] for i in range(depth + 1)]))
                        if len(out) > cap:
                            raise KernelCapExceeded(out[:cap])
                        closed[depth] = 1
                    elif not blocked[w]:
                        depth += 1
                        path[depth] = w
                        pos[depth] = off[w]
                        closed[depth] = 0
                        blocked[w] = 1
                        advanced = True
                        break
                if advanced:
                    continue
                if closed[depth]:
                    if depth > 0:
                        closed[depth - 1] = 1
                    top = 0
                    work[0] = v
                    top = 1
                    while top:
                        top -= 1
                        u = work[top]
                        if blocked[u]:
                            blocked[u] = 0
                            for w in range(n):
                                if bmat[u * n + w]:
                                    bmat[u * n + w] = 0
                                    work[top] = w
                                    top += 1
                else:
                    for i in range(off[v], off[v + 1]):
                        w = tgt[i]
                        if incomp[w]:
                            bmat[w * n + v] = 1
                depth -= 1
    finally:
        free(off)
        free(tgt)
        free(blocked)
        free(incomp)
        free(mark)
        free(path)
        free(pos)
        free(closed)
        free(work)
        free(bmat)
    return out


def count_perfect_matchings(int n, adj):
    cdef Py_ssize_t size = 1 << n
    cdef unsigned long long *ways = <unsigned long long *> malloc(size * sizeof(unsigned long long))
    cdef unsigned long long *a = <unsigned long long *> malloc((n + 1) * sizeof(unsigned long long))
    cdef Py_ssize_t mask
    cdef unsigned long long fr, low, w
    cdef int i
    try:
        for i in range(n):
            a[i] = adj[i]
        for mask in range(size):
            ways[mask] = 0
        ways[0] = 1
        for mask in range(size):
            w = ways[mask]
            if w == 0:
                continue
            i = 0
            fr = mask
            while fr:
                fr &= fr - 1
                i += 1
            if i >= n:
                continue
            fr = a[i] & ~(<unsigned long long> mask)
            while fr:
                low = fr & (~fr + 1)
                ways[mask | low] += w
                fr ^= low
        return int(ways[size - 1])
    finally:
        free(ways)
        free(a)
