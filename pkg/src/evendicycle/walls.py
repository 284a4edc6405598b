"""Cylindrical grids, elementary cylindrical walls and the tile machinery on top of them.

Vertices of grids and walls are named ``"v{c}_{p}"`` where ``c`` is the 1-based index of
the concentric dicycle and ``p`` the 0-based position along it.  Every concentric cycle
runs ``p -> p+1``.  Walls keep the names of the underlying grid, so a ``WallHandle``
only has to remember which grid cycles form each column and which positions form each row.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx

from .core import Dicycle, Digraph, Vertex, is_path
from .errors import PreconditionError, VerificationFailure
from .evenness import MinorModel, VertexImage, model_violations, odd_bicycle


def vname(cycle: int, pos: int) -> str:
    return f"v{cycle}_{pos}"


def _grid_parts(k: int, positions: int, out_pos: Sequence[int], in_pos: Sequence[int]) -> Digraph:
    verts = [vname(c, p) for c in range(1, k + 1) for p in range(positions)]
    edges = []
    for c in range(1, k + 1):
        for p in range(positions):
            edges.append((vname(c, p), vname(c, (p + 1) % positions)))
    for p in out_pos:
        for c in range(1, k):
            edges.append((vname(c, p), vname(c + 1, p)))
    for p in in_pos:
        for c in range(k, 1, -1):
            edges.append((vname(c, p), vname(c - 1, p)))
    return Digraph(verts, edges)


def cylindrical_grid(k: int) -> Digraph:
    """k concentric dicycles of length 2k; outward radial paths at even positions, inward at odd ones."""
    if k < 1:
        raise PreconditionError("grid order must be at least 1")
    return _grid_parts(k, 2 * k, range(0, 2 * k, 2), range(1, 2 * k, 2))


def segregated_grid(k: int) -> Digraph:
    """Like the cylindrical grid, but all outward paths sit at positions 0..k-1 and all inward ones at k..2k-1."""
    if k < 1:
        raise PreconditionError("grid order must be at least 1")
    return _grid_parts(k, 2 * k, range(k), range(k, 2 * k))


# walls

def _wall_digraph(k: int) -> Digraph:
    G = cylindrical_grid(2 * k)
    npos = 4 * k
    drop = set()
    for c in range(1, 2 * k + 1):
        # odd cycles lose their even->odd rail edges, even cycles their odd->even ones
        start = 0 if c % 2 == 1 else 1
        for p in range(start, npos, 2):
            drop.add((vname(c, p), vname(c, (p + 1) % npos)))
    return G.remove_edges(drop)


@dataclass(frozen=True)
class Tile:
    column: int
    row: int
    width: int
    subgraph: Digraph
    corners: tuple[Vertex, Vertex, Vertex, Vertex]  # upper-left, upper-right, lower-left, lower-right
    centre: frozenset
    perimeter: frozenset
    internal: frozenset

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.subgraph.vertices)


@dataclass(frozen=True)
class WallHandle:
    """An elementary cylindrical wall together with a choice of columns and rows.

    ``columns[x-1]`` is the pair (left cycle, right cycle) of grid cycles forming the
    vertical dicycle Q_x.  ``rows[j-1]`` is the pair of positions carrying the
    left-to-right path P^1_j and the right-to-left path P^2_j.
    """

    digraph: Digraph
    order: int
    columns: tuple[tuple[int, int], ...]
    rows: tuple[tuple[int, int], ...]
    mirrored: bool = False

    @property
    def n_positions(self) -> int:
        return 4 * self.order

    @property
    def n_columns(self) -> int:
        return len(self.columns)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def row(self, j: int) -> tuple[int, int]:
        return self.rows[(j - 1) % self.n_rows]

    def _first_positions(self) -> frozenset:
        return frozenset(r[0] for r in self.rows)

    def vertical_cycle(self, x: int) -> Dicycle:
        left, right = self.columns[x - 1]
        firsts = self._first_positions()
        seq = []
        p0 = self.rows[0][0]
        for step in range(self.n_positions):
            p = (p0 + step) % self.n_positions
            pair = (left, right) if p in firsts else (right, left)
            seq += [vname(pair[0], p), vname(pair[1], p)]
        return Dicycle(tuple(seq))

    def horizontal_path(self, j: int, h: int) -> tuple[Vertex, ...]:
        p = self.row(j)[h - 1]
        seq = [vname(c, p) for col in self.columns for c in col]
        return tuple(seq if h == 1 else reversed(seq))

    def column_vertices(self, x: int) -> frozenset:
        return frozenset(vname(c, p) for c in self.columns[x - 1] for p in range(self.n_positions))

    def perimeter(self) -> Digraph:
        edges = set(self.vertical_cycle(1).edges()) | set(self.vertical_cycle(self.n_columns).edges())
        return self.digraph.edge_subgraph(edges)

    def mirror(self) -> "WallHandle":
        """Reflect the parametrisation left-to-right; the digraph is untouched."""
        cols = tuple((r, l) for (l, r) in reversed(self.columns))
        if self.mirrored:
            rows = tuple(((2 * j) % self.n_positions, 2 * j + 1) for j in range(self.n_rows))
        else:
            rows = tuple((2 * j + 1, (2 * j + 2) % self.n_positions) for j in range(self.n_rows))
        return WallHandle(self.digraph, self.order, cols, rows, not self.mirrored)

    def brick(self, x: int, p: int) -> frozenset:
        """Boundary of the face between Q_x and Q_{x+1} spanning positions p and p+1."""
        if not 1 <= x < self.n_columns:
            raise PreconditionError("brick column out of range")
        q = (p + 1) % self.n_positions
        p %= self.n_positions
        right = self.columns[x - 1][1]
        left_next = self.columns[x][0]
        out = {vname(right, p), vname(right, q), vname(left_next, p), vname(left_next, q)}
        if self.digraph.has_edge(vname(right, p), vname(right, q)):
            extra = self.columns[x][1]
        else:
            extra = self.columns[x - 1][0]
        out |= {vname(extra, p), vname(extra, q)}
        return frozenset(out)

    def bricks(self) -> list[frozenset]:
        return [self.brick(x, p) for x in range(1, self.n_columns) for p in range(self.n_positions)]

    def tile(self, i: int, j: int, d: int) -> Tile:
        return tile_at(self, i, j, d)


def cylindrical_wall(k: int) -> WallHandle:
    if k < 2:
        raise PreconditionError("wall order must be at least 2")
    cols = tuple((2 * x - 1, 2 * x) for x in range(1, k + 1))
    rows = tuple((2 * j, 2 * j + 1) for j in range(2 * k))
    return WallHandle(_wall_digraph(k), k, cols, rows)


def tile_at(W: WallHandle, i: int, j: int, d: int) -> Tile:
    if d < 0:
        raise PreconditionError("tile width must be non-negative")
    span = 2 * d + 2
    if i < 1 or i + span - 1 > W.n_columns:
        raise PreconditionError("tile does not fit between the wall's first and last column")
    if span > W.n_rows:
        raise PreconditionError("tile is taller than the wall")
    if j < 1:
        raise PreconditionError("row index must be positive")
    cols = range(i, i + span)
    row_ids = [j + t for t in range(span)]
    positions = [p for r in row_ids for p in W.row(r)]
    cycles = [c for x in cols for c in W.columns[x - 1]]
    verts = {vname(c, p) for c in cycles for p in positions}
    sub = W.digraph.subgraph(verts)

    top = W.row(j)[0]
    bottom = W.row(j + span - 1)[1]
    lc = W.columns[i - 1][0]
    rc = W.columns[i + span - 2][1]
    corners = (vname(lc, top), vname(rc, top), vname(lc, bottom), vname(rc, bottom))
    centre = W.brick(i + d, W.row(j + d)[1])
    edge_cycles = set(W.columns[i - 1]) | set(W.columns[i + span - 2])
    perim = frozenset(
        v for v in verts
        if _cycle_of(v) in edge_cycles or _pos_of(v) in (top, bottom)
    )
    internal = frozenset(verts) - perim - centre
    return Tile(i, j, d, sub, corners, centre, perim, internal)


def _cycle_of(v: str) -> int:
    return int(v[1:].split("_")[0])


def _pos_of(v: str) -> int:
    return int(v.split("_")[1])


# tilings

@dataclass(frozen=True)
class Tiling:
    wall: WallHandle
    k: int
    width: int
    xi: int
    xi_row: int
    tiles: tuple[Tile, ...]
    colours: tuple[int, ...]

    def colour_class(self, c: int) -> list[Tile]:
        return [t for t, col in zip(self.tiles, self.colours) if col == c]

    def classes(self) -> dict[int, list[Tile]]:
        return {c: self.colour_class(c) for c in range(1, 5)}

    def colour_of(self, tile: Tile) -> int:
        return self.colours[self.tiles.index(tile)]


def tiling_ranges(k: int, w: int, xi: int, xi_row: int, n_rows: int) -> tuple[int, int]:
    step = 2 * w + 1
    n_cols = math.ceil((k + xi - 1) / step) + 1
    n_rws = math.ceil((n_rows - xi_row - 1) / step) + 1
    return n_cols, n_rws


def standard_tiling(W: WallHandle, k: int, w: int, xi: int, xi_row: int) -> Tiling:
    """Tiles of width w started every 2w+1 columns and rows, offset so that they cover the middle slice."""
    if W.n_columns != 3 * k:
        raise PreconditionError("standard tilings need a wall of order 3k")
    if w < 0 or not (1 <= xi <= w + 1 and 1 <= xi_row <= w + 1):
        raise PreconditionError("offsets must lie in [1, w+1]")
    step = 2 * w + 1
    n_cols, n_rws = tiling_ranges(k, w, xi, xi_row, W.n_rows)
    tiles, colours = [], []
    for p in range(1, n_cols + 1):
        c = (k + 2 - xi) + (p - 1) * step
        for q in range(1, n_rws + 1):
            r = xi_row + (q - 1) * step
            tiles.append(tile_at(W, c, r, w))
            colours.append((p % 2) + 2 * (q % 2) + 1)
    return Tiling(W, k, w, xi, xi_row, tuple(tiles), tuple(colours))


def covers_slice(W: WallHandle, tiles: Iterable[Tile], first: int, last: int) -> bool:
    covered = set().union(*(t.vertices for t in tiles))
    D = W.digraph
    for x in range(first, last + 1):
        for v in W.column_vertices(x):
            if D.in_degree(v) + D.out_degree(v) == 3 and v not in covered:
                return False
    return True


@dataclass(frozen=True)
class TriadicPartition:
    wall: WallHandle
    k: int
    slices: tuple[tuple[int, int], ...]  # column ranges
    strips: tuple[tuple[int, int], ...]  # row ranges

    def slice(self, i: int) -> Digraph:
        a, b = self.slices[i - 1]
        return slice_digraph(self.wall, a, b)

    def strip(self, i: int) -> Digraph:
        a, b = self.strips[i - 1]
        return strip_digraph(self.wall, a, b)


def slice_vertices(W: WallHandle, first: int, last: int) -> frozenset:
    if not 1 <= first <= last <= W.n_columns:
        raise PreconditionError("slice columns out of range")
    return frozenset().union(*(W.column_vertices(x) for x in range(first, last + 1)))


def slice_digraph(W: WallHandle, first: int, last: int) -> Digraph:
    return W.digraph.subgraph(slice_vertices(W, first, last))


def strip_digraph(W: WallHandle, first: int, last: int) -> Digraph:
    if not 1 <= first <= last <= W.n_rows:
        raise PreconditionError("strip rows out of range")
    pos = {p for j in range(first, last + 1) for p in W.row(j)}
    return W.digraph.subgraph(v for v in W.digraph.vertices if _pos_of(v) in pos)


def triadic_partition(W: WallHandle) -> TriadicPartition:
    if W.n_columns % 3:
        raise PreconditionError("triadic partitions need a wall order divisible by 3")
    k = W.n_columns // 3
    h = W.n_rows // 3
    slices = tuple((k * (i - 1) + 1, k * i) for i in range(1, 4))
    strips = tuple((h * (i - 1) + 1, h * i) for i in range(1, 4))
    return TriadicPartition(W, k, slices, strips)


# cutting out a colour class and re-tiling

@dataclass(frozen=True)
class TilingSlice:
    """The wall left after deleting the inner columns and rows of every tile of one colour.

    ``columns`` and ``rows`` are the surviving column and row indices of the
    original wall, in order; ``cut_tiles`` are the class tiles whose outline
    is now a single face.
    """

    tiling: Tiling
    colour: int
    columns: tuple[int, ...]
    rows: tuple[int, ...]
    digraph: Digraph
    cut_tiles: tuple[Tile, ...]


def _tile_span(t: Tile) -> int:
    return 2 * t.width + 2


def tiling_slice(tiling: Tiling, colour: int, slice_cols: tuple[int, int]) -> TilingSlice:
    """Restrict to the columns met by tiles touching the slice, then cut out the class interiors.

    A vertical cycle survives unless it is an inner column of a class tile.
    A row survives unless one of its two paths passes through the interior
    of a class tile, which removes every row a tile spans, its top and
    bottom rows included.  Each surviving row keeps both of its paths
    between the first and last surviving column, so subdivision vertices on
    deleted columns stay where a kept row crosses them.
    """
    W = tiling.wall
    a, b = slice_cols
    rim = W.column_vertices(a) | W.column_vertices(b)
    if any(t.vertices & rim for t in tiling.colour_class(colour)):
        raise PreconditionError("a class tile touches the perimeter of the slice")
    cut = _class_tiles_meeting(tiling, colour, slice_cols)
    sv = slice_vertices(W, a, b)
    touching = [t for t in tiling.tiles if t.vertices & sv]
    extension = sorted({x for t in touching for x in range(t.column, t.column + _tile_span(t))})

    inner_cols, inner_rows = set(), set()
    for t in tiling.colour_class(colour):
        span = _tile_span(t)
        inner_cols |= set(range(t.column + 1, t.column + span - 1))
        inner_rows |= {(t.row + r - 1) % W.n_rows + 1 for r in range(span)}
    cols = tuple(x for x in extension if x not in inner_cols)
    rows = tuple(j for j in range(1, W.n_rows + 1) if j not in inner_rows)
    if len(cols) < 2:
        raise PreconditionError("fewer than two columns survive the cut")

    edges = set()
    for x in cols:
        edges |= set(W.vertical_cycle(x).edges())
    lo, hi = cols[0], cols[-1]
    for j in rows:
        for h in (1, 2):
            path = W.horizontal_path(j, h)
            if h == 1:
                seg = path[2 * (lo - 1): 2 * hi]
            else:
                seg = path[2 * (W.n_columns - hi): 2 * (W.n_columns - lo + 1)]
            edges |= set(zip(seg, seg[1:]))
    return TilingSlice(tiling, colour, cols, rows, W.digraph.edge_subgraph(edges), tuple(cut))


def _region(W: WallHandle, present: set, first_col: int, last_col: int,
            p_from: int, p_to: int) -> frozenset:
    """Vertices of ``present`` on the given columns at positions p_from..p_to, cyclically."""
    pos = {(p_from + s) % W.n_positions for s in range((p_to - p_from) % W.n_positions + 1)}
    lo, hi = W.columns[first_col - 1][0], W.columns[last_col - 1][1]
    return frozenset(v for v in present if _pos_of(v) in pos and lo <= _cycle_of(v) <= hi)


def tier_two_tiling(tiling: Tiling, colour: int, slice_cols: tuple[int, int],
                    width: int | None = None) -> tuple[TilingSlice, list[Tile]]:
    """One tile of the cut wall around every class tile that touches the slice.

    Coordinates on the cut wall count surviving columns and rows only.  Each
    returned tile has ``width`` (default: that of ``tiling``) and its centre
    is the face left by the class tile it was built for, bounded by the two
    boundary columns of that tile and the nearest surviving rows above and
    below it.  ``Tile.column`` and ``Tile.row`` are 1-based positions in
    ``TilingSlice.columns`` and ``TilingSlice.rows``.
    """
    d = tiling.width if width is None else width
    if d < 0:
        raise PreconditionError("tile width must be non-negative")
    cs = tiling_slice(tiling, colour, slice_cols)
    W = tiling.wall
    span = 2 * d + 2
    if span > len(cs.rows):
        raise PreconditionError("tile is taller than the cut wall")
    present = set(cs.digraph.vertices)
    out = []
    for t in cs.cut_tiles:
        above = (t.row - 2) % W.n_rows + 1
        if above not in cs.rows:
            raise PreconditionError("class tiles overlap after wrapping around the wall")
        left = cs.columns.index(t.column) - d
        if left < 0 or left + span > len(cs.columns):
            raise PreconditionError("a tier two tile does not fit inside the cut wall")
        top = cs.rows.index(above) - d
        row_ids = [cs.rows[(top + r) % len(cs.rows)] for r in range(span)]
        if row_ids[d + 1] != (t.row + _tile_span(t) - 1) % W.n_rows + 1:
            raise PreconditionError("class tiles overlap after wrapping around the wall")
        col_ids = cs.columns[left: left + span]
        p_top = W.row(row_ids[0])[0]
        p_bottom = W.row(row_ids[-1])[1]
        verts = _region(W, present, col_ids[0], col_ids[-1], p_top, p_bottom)
        sub = cs.digraph.subgraph(verts)
        lc, rc = W.columns[col_ids[0] - 1][0], W.columns[col_ids[-1] - 1][1]
        edge_cycles = set(W.columns[col_ids[0] - 1]) | set(W.columns[col_ids[-1] - 1])
        perim = frozenset(v for v in verts
                          if _cycle_of(v) in edge_cycles or _pos_of(v) in (p_top, p_bottom))
        box = _region(W, present, t.column, t.column + _tile_span(t) - 1,
                      W.row(row_ids[d])[1], W.row(row_ids[d + 1])[0])
        # the box also catches row ends hanging off the far side of its columns
        centre = frozenset(nx.k_core(nx.Graph(cs.digraph.subgraph(box).edges), 2))
        corners = (vname(lc, p_top), vname(rc, p_top), vname(lc, p_bottom), vname(rc, p_bottom))
        out.append(Tile(left + 1, top % len(cs.rows) + 1, d, sub, corners, centre, perim,
                        verts - perim - centre))
    return cs, out


# auxiliary digraphs

def _class_tiles_meeting(tiling: Tiling, colour: int, slice_cols: tuple[int, int]) -> list[Tile]:
    if colour not in (1, 2, 3, 4):
        raise PreconditionError("colour must be one of 1..4")
    a, b = slice_cols
    k = tiling.k
    if not (k + 1 <= a <= b <= 2 * k):
        raise PreconditionError("slice must lie inside the middle third of the wall")
    sv = slice_vertices(tiling.wall, a, b)
    return [t for t in tiling.colour_class(colour) if t.vertices & sv]


def _fresh(D: Digraph, name: str) -> str:
    if name in D:
        raise PreconditionError(f"vertex name {name!r} already used")
    return name


def aux_digraph_type1(D: Digraph, tiling: Tiling, colour: int,
                      slice_cols: tuple[int, int]) -> tuple[Digraph, list[Vertex], list[Vertex]]:
    """Attach a source/sink pair to the centre of every class tile touching the slice and drop tile interiors."""
    tiles = _class_tiles_meeting(tiling, colour, slice_cols)
    missing = set(tiling.wall.digraph.vertices) - set(D.vertices)
    if missing:
        raise PreconditionError("host digraph does not contain the wall")
    verts = list(D.vertices)
    edges = list(D.edges)
    x_in, x_out, drop = [], [], set()
    for t in tiles:
        xi = _fresh(D, f"x_in[{t.column},{t.row}]")
        xo = _fresh(D, f"x_out[{t.column},{t.row}]")
        verts += [xi, xo]
        x_in.append(xi)
        x_out.append(xo)
        for u in sorted(t.centre, key=D.index):
            edges += [(u, xi), (xo, u)]
        drop |= t.internal
    return Digraph(verts, edges).remove_vertices(drop), x_in, x_out


def aux_digraph_type2(D: Digraph, tiling: Tiling, colour: int,
                      slice_cols: tuple[int, int]) -> tuple[Digraph, list[Vertex]]:
    """Attach one hub per class tile touching the slice, then delete slice vertices outside class tiles."""
    tiles = _class_tiles_meeting(tiling, colour, slice_cols)
    W = tiling.wall
    if set(W.digraph.vertices) - set(D.vertices):
        raise PreconditionError("host digraph does not contain the wall")
    a, b = slice_cols
    rim = W.column_vertices(a) | W.column_vertices(b)
    if any(t.vertices & rim for t in tiling.colour_class(colour)):
        raise PreconditionError("a class tile touches the perimeter of the slice")
    verts = list(D.vertices)
    edges = list(D.edges)
    hubs = []
    for t in tiles:
        x = _fresh(D, f"x[{t.column},{t.row}]")
        verts.append(x)
        hubs.append(x)
        for v in sorted(t.internal | t.centre, key=D.index):
            edges += [(x, v), (v, x)]
    in_class = set().union(*(t.vertices for t in tiling.colour_class(colour)))
    drop = slice_vertices(W, a, b) - in_class
    return Digraph(verts, edges).remove_vertices(drop), hubs


# distances and jumps

def w_distance(W: WallHandle, u: Vertex, v: Vertex) -> int:
    """Largest i such that removing i vertical or i horizontal paths separates u from v.

    Removing more paths never reconnects, so it suffices to delete every path that avoids u and v.
    """
    und = {x: set() for x in W.digraph.vertices}
    for a, b in W.digraph.edges:
        und[a].add(b)
        und[b].add(a)

    def separated(removed: set) -> bool:
        seen, stack = {u}, [u]
        while stack:
            x = stack.pop()
            for y in und[x]:
                if y not in seen and y not in removed:
                    seen.add(y)
                    stack.append(y)
        return v not in seen

    best = 0
    verticals = [set(W.vertical_cycle(x).vertices) for x in range(1, W.n_columns + 1)]
    horizontals = [set(W.horizontal_path(j, h)) for j in range(1, W.n_rows + 1) for h in (1, 2)]
    for fam in (verticals, horizontals):
        ok = [s for s in fam if u not in s and v not in s]
        if ok and separated(set().union(*ok)):
            best = max(best, len(ok))
    return best


def is_long_jump(D: Digraph, W: WallHandle, k: int, w: int, slice_cols: tuple[int, int],
                 path: Sequence[Vertex]) -> bool:
    """Jump over the slice whose endpoints never share a tile in any standard tiling of width w."""
    sv = slice_vertices(W, *slice_cols)
    if len(path) < 2 or not is_path(D, path):
        return False
    if path[0] not in sv or path[-1] not in sv or any(x in sv for x in path[1:-1]):
        return False
    slice_edges = set(W.digraph.subgraph(sv).edges)
    if any(e in slice_edges for e in zip(path, path[1:])):
        return False
    s, t = path[0], path[-1]
    for xi in range(1, w + 2):
        for xr in range(1, w + 2):
            tiles = standard_tiling(W, k, w, xi, xr).tiles
            if not any(s in T.vertices for T in tiles) or not any(t in T.vertices for T in tiles):
                return False
            if any(s in T.vertices and t in T.vertices for T in tiles):
                return False
    return True


# odd bicycle from a perimeter jump

def _contiguous_segment(cycle: Sequence[Vertex], common: set) -> tuple[Vertex, ...] | None:
    n = len(cycle)
    if not common or len(common) == n:
        return None
    idx = [i for i, x in enumerate(cycle) if x in common]
    # start where the predecessor is outside the common set
    starts = [i for i in idx if cycle[(i - 1) % n] not in common]
    if len(starts) != 1:
        return None
    s = starts[0]
    return tuple(cycle[(s + t) % n] for t in range(len(common)))


def model_from_three_dicycles(D: Digraph, A: Sequence[Vertex], B: Sequence[Vertex],
                              C: Sequence[Vertex]) -> MinorModel | None:
    """Package three pairwise-touching dicycles as a model of the odd bicycle on three vertices.

    Branch 0 is A∩B, branch 1 is B∩C, branch 2 is C∩A; each must be one common subpath with no
    vertex in all three cycles.  Returns None when the shape does not fit.
    """
    cyc = [tuple(A), tuple(B), tuple(C)]
    sets = [set(c) for c in cyc]
    if sets[0] & sets[1] & sets[2]:
        return None
    pairs = [(0, 1), (1, 2), (2, 0)]
    branches = []
    for x, y in pairs:
        common = sets[x] & sets[y]
        sx = _contiguous_segment(cyc[x], common)
        sy = _contiguous_segment(cyc[y], common)
        if sx is None or sx != sy:
            return None
        branches.append(sx)
    images = {}
    for h, seg in enumerate(branches):
        images[h] = VertexImage(seg[-1], frozenset(zip(seg, seg[1:])), frozenset())

    def arc(c: tuple, a: Vertex, b: Vertex) -> tuple:
        n, i = len(c), c.index(a)
        out = [a]
        while out[-1] != b:
            i = (i + 1) % n
            out.append(c[i])
        return tuple(out)

    edge_images = {}
    # cycle B carries branches 0 and 1, C carries 1 and 2, A carries 2 and 0
    for c, (p, q) in ((cyc[1], (0, 1)), (cyc[2], (1, 2)), (cyc[0], (2, 0))):
        edge_images[(p, q)] = arc(c, branches[p][-1], branches[q][0])
        edge_images[(q, p)] = arc(c, branches[q][-1], branches[p][0])
    model = MinorModel(images, edge_images, odd_bicycle(3))
    if model_violations(D, odd_bicycle(3), model):
        return None
    return model


@dataclass(frozen=True)
class _Frame:
    cycles: tuple[tuple[Vertex, ...], ...]  # index 0 is the cycle the jump leaves
    outward: tuple[tuple[Vertex, ...], ...]  # paths from first to last cycle
    inward: tuple[tuple[Vertex, ...], ...]


def _grid_frame(k: int) -> _Frame:
    n = 2 * k
    cycles = tuple(tuple(vname(c, p) for p in range(n)) for c in range(1, k + 1))
    outward = tuple(tuple(vname(c, 2 * r) for c in range(1, k + 1)) for r in range(k))
    inward = tuple(tuple(vname(c, 2 * r + 1) for c in range(k, 0, -1)) for r in range(k))
    return _Frame(cycles, outward, inward)


def _reverse_frame(f: _Frame) -> _Frame:
    return _Frame(
        tuple(tuple(reversed(c)) for c in f.cycles),
        tuple(tuple(reversed(p)) for p in f.inward),
        tuple(tuple(reversed(p)) for p in f.outward),
    )


def _walk(cycle: tuple, a: Vertex, b: Vertex) -> list:
    n, i = len(cycle), cycle.index(a)
    out = [a]
    while out[-1] != b:
        i = (i + 1) % n
        out.append(cycle[i])
    return out


def _meet(path: tuple, cycle: tuple) -> Vertex:
    cs = set(cycle)
    return next(x for x in path if x in cs)


def _sub(path: tuple, a: Vertex, b: Vertex) -> list:
    i, j = path.index(a), path.index(b)
    return list(path[i:j + 1])


def _close(seq: list) -> tuple | None:
    # seq starts and ends at the same vertex; return it as a simple cycle or None
    body = seq[:-1]
    if seq[0] != seq[-1] or len(set(body)) != len(body):
        return None
    return tuple(body)


def _jump_cycles(f: _Frame, jump: list, i: int, j: int, l: int, s: int, t: int, r: int):
    C = f.cycles
    first, last = C[0], C[-1]
    a, x = jump[0], jump[-1]
    Qs, Qt = f.inward[s], f.inward[t]
    Pr, Qr = f.outward[r], f.inward[r]
    Ci, Cj, Cl = C[i - 1], C[j - 1], C[l - 1]
    u_i, u_j = _meet(Pr, Ci), _meet(Pr, Cj)
    v_i, v_j = _meet(Qr, Ci), _meet(Qr, Cj)
    c1 = _walk(Ci, v_i, u_i) + _sub(Pr, u_i, u_j)[1:] + _walk(Cj, u_j, v_j)[1:] + _sub(Qr, v_j, v_i)[1:]
    b = Qs[-1]
    y = Qt[0]
    b_s, y_t = _meet(Qs, Cl), _meet(Qt, Cl)
    c3 = (_walk(Cl, y_t, b_s) + _sub(Qs, b_s, b)[1:] + _walk(first, b, a)[1:] + list(jump[1:])
          + _walk(last, x, y)[1:] + _sub(Qt, y, y_t)[1:])
    return _close(c1), tuple(Cj), _close(c3)


def _nearest_inward(f: _Frame, cycle: tuple, v: Vertex, backwards: bool, on_end: bool) -> list[int]:
    # inward path indices ordered by distance from v along the cycle (backwards: distance from the path to v)
    n = len(cycle)
    where = {}
    for idx, q in enumerate(f.inward):
        where[q[0] if on_end else q[-1]] = idx
    i0 = cycle.index(v)
    order = []
    for step in range(n):
        w = cycle[(i0 - step) % n] if backwards else cycle[(i0 + step) % n]
        if w in where:
            order.append(where[w])
    return order


def odd_bicycle_from_jump(G: Digraph, jump: Sequence[Vertex],
                          triple: tuple[int, int, int] | None = None) -> MinorModel:
    """Model of the order-3 odd bicycle in a cylindrical grid plus a path joining its first and last cycle.

    Three dicycles are built from the two boundary cycles, up to three inner cycles and four
    radial paths.  The radial paths are tried nearest-first around the jump's endpoints and the
    first combination that verifies is returned.
    """
    k = math.isqrt(G.n // 2)
    if k < 3 or 2 * k * k != G.n or G != cylindrical_grid(k):
        raise PreconditionError("expected a cylindrical grid of order at least 3")
    jump = list(jump)
    f = _grid_frame(k)
    inner, outer = set(f.cycles[0]), set(f.cycles[-1])
    if len(jump) < 2 or len(set(jump)) != len(jump) or any(x in G for x in jump[1:-1]):
        raise PreconditionError("jump must be a path internally disjoint from the grid")
    if jump[0] in inner and jump[-1] in outer:
        frame, work = f, jump
    elif jump[0] in outer and jump[-1] in inner:
        frame, work = _reverse_frame(f), jump[::-1]
    else:
        raise PreconditionError("jump must join the first and the last concentric cycle")
    extra = [x for x in jump if x not in G]
    H = Digraph(list(G.vertices) + extra, list(G.edges) + [e for e in zip(jump, jump[1:]) if not G.has_edge(*e)])
    flipped = frame is not f
    triples = [triple] if triple else [(i, j, l) for i in range(1, k + 1) for j in range(i + 1, k + 1)
                                       for l in range(j + 1, k + 1)]
    first, last = frame.cycles[0], frame.cycles[-1]
    s_order = _nearest_inward(frame, first, work[0], backwards=True, on_end=False)
    t_order = _nearest_inward(frame, last, work[-1], backwards=False, on_end=True)
    for (i, j, l) in triples:
        if not 1 <= i < j < l <= k:
            raise PreconditionError("need 1 <= i < j < l <= k")
        for s in s_order:
            for t in t_order:
                if t == s:
                    continue
                for r in range(k):
                    if r in (s, t):
                        continue
                    c1, c2, c3 = _jump_cycles(frame, work, i, j, l, s, t, r)
                    if c1 is None or c3 is None:
                        continue
                    if flipped:
                        c1, c2, c3 = (tuple(reversed(c)) for c in (c1, c2, c3))
                    m = model_from_three_dicycles(H, c1, c2, c3)
                    if m is not None:
                        return m
    raise VerificationFailure("no odd bicycle model found for this jump")
