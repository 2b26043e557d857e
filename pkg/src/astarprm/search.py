"""A* and Dijkstra on roadmaps and on the raw 8-connected grid."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .geometry import SQRT2, euclidean, manhattan, octile
from .grid_map import OccupancyGrid, Point, is_free

INF = math.inf


@dataclass(frozen=True)
class Path:
    """Polyline from start to goal. Consecutive duplicate waypoints are dropped."""

    waypoints: tuple[Point, ...]

    def __init__(self, waypoints: Sequence):
        pts: list[Point] = []
        for p in waypoints:
            p = Point(float(p[0]), float(p[1]))
            if not pts or pts[-1] != p:
                pts.append(p)
        object.__setattr__(self, "waypoints", tuple(pts))

    @property
    def total_length(self) -> float:
        w = self.waypoints
        return sum(euclidean(w[i], w[i + 1]) for i in range(len(w) - 1))

    @property
    def start(self) -> Point:
        return self.waypoints[0]

    @property
    def goal(self) -> Point:
        return self.waypoints[-1]

    def __len__(self):
        return len(self.waypoints)

    def segments(self):
        w = self.waypoints
        return [(w[i], w[i + 1]) for i in range(len(w) - 1)]


@dataclass
class SearchResult:
    path: Path | None
    cost: float
    expanded: int
    touched: int
    vertex_ids: list[int] | None = None

    @property
    def found(self) -> bool:
        return self.path is not None


def _zero(a, b) -> float:
    return 0.0


def _scaled_manhattan(a, b) -> float:
    # admissible on Euclidean edge weights: manhattan <= sqrt(2) * euclidean
    return manhattan(a, b) / SQRT2


ROADMAP_HEURISTICS: dict[str, Callable] = {
    "euclidean": euclidean,
    "manhattan": _scaled_manhattan,
    "zero": _zero,
}
GRID_HEURISTICS: dict[str, Callable] = {
    "octile": octile,
    "euclidean": euclidean,
    "manhattan": manhattan,
    "zero": _zero,
}


def _pick(table: dict, kind) -> Callable:
    if callable(kind):
        return kind
    try:
        return table[kind]
    except KeyError:
        raise ValueError(f"unknown heuristic {kind!r}; choose from {sorted(table)}") from None


def graph_astar(roadmap, s: int, g: int, heuristic="euclidean", T=None) -> SearchResult:
    """Best-first search on the roadmap with f = g + h.

    Ties on f go to the larger g, then to insertion order.  Closed vertices
    are never reopened, which is exact for the consistent heuristics offered
    here ("manhattan" is scaled by 1/sqrt(2) to stay admissible).
    """
    pts = roadmap.vertices.vertices
    n = len(pts)
    for name, idx in (("start", s), ("goal", g)):
        if not 0 <= idx < n:
            raise ValueError(f"{name} index {idx} out of range for {n} vertices")
    h = _pick(ROADMAP_HEURISTICS, heuristic)
    target = pts[g] if T is None else T
    adj = roadmap.adjacency

    gs = [INF] * n
    parent = [-1] * n
    closed = bytearray(n)
    seen = bytearray(n)
    gs[s] = 0.0
    seen[s] = 1
    touched = 1
    expanded = 0
    counter = 0
    heap = [(h(pts[s], target), -0.0, counter, s)]
    while heap:
        _, _, _, u = heapq.heappop(heap)
        if closed[u]:
            continue
        closed[u] = 1
        expanded += 1
        if u == g:
            ids = [u]
            while ids[-1] != s:
                ids.append(parent[ids[-1]])
            ids.reverse()
            return SearchResult(Path([pts[i] for i in ids]), gs[g], expanded, touched, ids)
        gu = gs[u]
        for v, w in adj[u]:
            if closed[v]:
                continue
            gt = gu + w
            if gt < gs[v]:
                gs[v] = gt
                parent[v] = u
                counter += 1
                heapq.heappush(heap, (gt + h(pts[v], target), -gt, counter, v))
                if not seen[v]:
                    seen[v] = 1
                    touched += 1
    return SearchResult(None, INF, expanded, touched)


def graph_dijkstra(roadmap, s: int, g: int) -> SearchResult:
    return graph_astar(roadmap, s, g, heuristic="zero")


def grid_astar(grid: OccupancyGrid, S, G, heuristic="octile") -> SearchResult:
    """8-connected search over cells; straight steps cost 1, diagonals sqrt 2.

    A diagonal step is allowed only when both cells sharing its corner are
    free.  Waypoints are the lattice points ``(i, j)`` of visited cells (the
    cells' lower corners), scaled by the grid resolution, so the returned cost
    equals the path length.
    """
    h = _pick(GRID_HEURISTICS, heuristic)
    for name, p in (("start", S), ("goal", G)):
        if not is_free(grid, p):
            raise ValueError(f"{name} {tuple(p)} is blocked or outside the map")
    res = grid.resolution
    W, H = grid.width, grid.height
    sx, sy = int(S[0] / res), int(S[1] / res)
    gx, gy = int(G[0] / res), int(G[1] / res)

    # pad with a blocked border so neighbour lookups need no bounds checks
    PW = W + 2
    src = grid.cells
    blocked = bytearray(b"\x01" * (PW * (H + 2)))
    for j in range(H):
        row = src[j * W : (j + 1) * W]
        blocked[(j + 1) * PW + 1 : (j + 1) * PW + 1 + W] = row
    start = (sy + 1) * PW + sx + 1
    goal = (gy + 1) * PW + gx + 1
    gpt = (gx, gy)

    straight = ((1, 0), (-1, 0), (0, 1), (0, -1))
    diagonal = ((1, 1), (1, -1), (-1, 1), (-1, -1))
    moves = [(dx + dy * PW, 1.0, 0, 0) for dx, dy in straight]
    moves += [(dx + dy * PW, SQRT2, dx, dy * PW) for dx, dy in diagonal]

    gs: dict[int, float] = {start: 0.0}
    parent: dict[int, int] = {start: -1}
    closed = bytearray(len(blocked))
    touched = 1
    expanded = 0
    counter = 0
    heap = [(h((sx, sy), gpt), -0.0, counter, start)]
    push, pop = heapq.heappush, heapq.heappop
    while heap:
        _, _, _, u = pop(heap)
        if closed[u]:
            continue
        closed[u] = 1
        expanded += 1
        if u == goal:
            break
        gu = gs[u]
        for off, cost, cx, cy in moves:
            v = u + off
            if blocked[v] or closed[v]:
                continue
            if cx and (blocked[u + cx] or blocked[u + cy]):
                continue
            gt = gu + cost
            old = gs.get(v)
            if old is None or gt < old:
                if old is None:
                    touched += 1
                gs[v] = gt
                parent[v] = u
                counter += 1
                vx, vy = v % PW - 1, v // PW - 1
                push(heap, (gt + h((vx, vy), gpt), -gt, counter, v))
    else:
        return SearchResult(None, INF, expanded, touched)

    cells = [goal]
    while cells[-1] != start:
        cells.append(parent[cells[-1]])
    cells.reverse()
    pts = [Point((c % PW - 1) * res, (c // PW - 1) * res) for c in cells]
    return SearchResult(Path(pts), gs[goal] * res, expanded, touched)


def grid_dijkstra(grid: OccupancyGrid, S, G) -> SearchResult:
    return grid_astar(grid, S, G, heuristic="zero")
