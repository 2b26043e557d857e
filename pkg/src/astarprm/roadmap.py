"""Roadmap construction: fixed-k PRM connection and heuristic dynamic connection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.spatial import cKDTree

from .errors import DegenerateQueryError
from .geometry import euclidean, manhattan, segment_is_free
from .grid_map import OccupancyGrid
from .sampling import VertexSet

BRUTE_FORCE_LIMIT = 2000
MIN_DYNAMIC_K = 3
SCORE_HEURISTIC_WEIGHT = 0.5

HEURISTICS: dict[str, Callable] = {"manhattan": manhattan, "euclidean": euclidean}


def heuristic_fn(kind: str) -> Callable:
    try:
        return HEURISTICS[kind]
    except KeyError:
        raise ValueError(f"unknown heuristic {kind!r}; choose from {sorted(HEURISTICS)}") from None


@dataclass
class ConnectionStats:
    attempted: int = 0
    accepted: int = 0

    @property
    def rate(self) -> float:
        return self.accepted / self.attempted if self.attempted else 0.0


@dataclass
class Roadmap:
    vertices: VertexSet
    edges: dict[tuple[int, int], float] = field(default_factory=dict)
    stats: ConnectionStats = field(default_factory=ConnectionStats)
    # per-vertex neighbours chosen from that vertex's own candidate ranking
    selected: list[list[int]] = field(default_factory=list)
    adjacency: list[list[tuple[int, float]]] = field(init=False, repr=False)

    def __post_init__(self):
        self.adjacency = [[] for _ in range(len(self.vertices))]
        for (u, v), w in sorted(self.edges.items()):
            self.adjacency[u].append((v, w))
            self.adjacency[v].append((u, w))

    @classmethod
    def from_edges(cls, vertices: VertexSet, edges) -> "Roadmap":
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples; weights default to Euclidean."""
        pts = vertices.vertices
        out = {}
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError("self-loops are not allowed")
            w = float(e[2]) if len(e) > 2 else euclidean(pts[u], pts[v])
            out[(min(u, v), max(u, v))] = w
        return cls(vertices, out, ConnectionStats(len(out), len(out)))

    def _add(self, u: int, v: int):
        key = (min(u, v), max(u, v))
        w = euclidean(self.vertices.vertices[u], self.vertices.vertices[v])
        self.edges[key] = w
        self.adjacency[u].append((v, w))
        self.adjacency[v].append((u, w))

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def edge_rows(self):
        for (u, v), w in sorted(self.edges.items()):
            yield {"u": u, "v": v, "weight": repr(w)}


class NeighborIndex:
    """k-nearest-neighbour lookup over a fixed point set.

    Results are ordered by (distance, index) and never contain the query
    vertex itself.  Small sets use an exact O(n^2) scan; larger ones a k-d tree.
    """

    def __init__(self, points: np.ndarray):
        self.points = np.asarray(points, dtype=float).reshape(-1, 2)
        self.n = len(self.points)
        self._tree = cKDTree(self.points) if self.n >= BRUTE_FORCE_LIMIT else None

    def knn_all(self, k: int) -> list[list[int]]:
        k = min(k, self.n - 1)
        if k <= 0:
            return [[] for _ in range(self.n)]
        if self._tree is None:
            return [self._brute(i, k) for i in range(self.n)]
        q = min(self.n, k + 2)
        dists, idxs = self._tree.query(self.points, k=q)
        out = []
        for i in range(self.n):
            cand = sorted(
                (float(d), int(j)) for d, j in zip(dists[i], idxs[i]) if j != i and j < self.n
            )
            out.append([j for _, j in cand[:k]])
        return out

    def _brute(self, i: int, k: int) -> list[int]:
        d = np.hypot(*(self.points - self.points[i]).T)
        d[i] = np.inf
        order = np.argsort(d, kind="stable")
        return [int(j) for j in order[:k]]


def dynamic_k(k_neighbors: int, h_u: float, h_max: float) -> int:
    """Target degree that grows as a vertex gets closer to the target."""
    if k_neighbors < 1:
        raise ValueError("k_neighbors must be >= 1")
    if h_max <= 0:
        raise DegenerateQueryError("h_max must be positive (start equals target?)")
    if h_u < 0:
        raise ValueError("h_u must be non-negative")
    scaled = k_neighbors * (1.0 - h_u / h_max)
    return max(math.floor(scaled + 1e-9), MIN_DYNAMIC_K)


def edge_score(u, v, h_v: float, h_u: float) -> float:
    return euclidean(u, v) + SCORE_HEURISTIC_WEIGHT * abs(h_v - h_u)


def connect_fixed_k(
    grid: OccupancyGrid, vertices: VertexSet, k: int, step: float | None = None
) -> Roadmap:
    """Classic PRM: try each vertex against its k nearest neighbours."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rm = Roadmap(vertices)
    pts = vertices.vertices
    nn = NeighborIndex(vertices.to_array()).knn_all(k)
    candidates = sorted({(min(u, v), max(u, v)) for u, row in enumerate(nn) for v in row})
    for u, v in candidates:
        rm.stats.attempted += 1
        if segment_is_free(grid, (pts[u], pts[v]), step):
            rm._add(u, v)
            rm.stats.accepted += 1
    rm.selected = [list(row) for row in nn]
    return rm


def connect_dynamic(
    grid: OccupancyGrid,
    vertices: VertexSet,
    k_neighbors: int,
    heuristic: str = "manhattan",
    T=None,
    pool_multiplier: int = 3,
    step: float | None = None,
) -> Roadmap:
    """Heuristic-driven connection.

    Each vertex ``u`` gets a target degree ``dynamic_k(k_neighbors, h_u, h_max)``
    with ``h_max = h(S, T)``.  Its ``pool_multiplier * k_neighbors`` nearest
    vertices are ranked by :func:`edge_score` and tried in that order until the
    target number of collision-free edges is reached.  An edge already present
    (added from the other endpoint) counts towards the target; a pair already
    rejected is not re-checked.
    """
    h = heuristic_fn(heuristic)
    pts = vertices.vertices
    if T is None:
        T = pts[1]
    h_max = h(pts[0], T)
    if h_max <= 0:
        raise DegenerateQueryError("start coincides with target under the chosen heuristic")
    hv = [h(p, T) for p in pts]
    pools = NeighborIndex(vertices.to_array()).knn_all(pool_multiplier * k_neighbors)

    rm = Roadmap(vertices)
    rejected: set[tuple[int, int]] = set()
    selected: list[list[int]] = []
    for u, pool in enumerate(pools):
        target = dynamic_k(k_neighbors, hv[u], h_max)
        ranked = sorted(pool, key=lambda v: (edge_score(pts[u], pts[v], hv[v], hv[u]), v))
        mine: list[int] = []
        for v in ranked:
            if len(mine) >= target:
                break
            key = (min(u, v), max(u, v))
            if key in rm.edges:
                mine.append(v)
                continue
            if key in rejected:
                continue
            rm.stats.attempted += 1
            if segment_is_free(grid, (pts[u], pts[v]), step):
                rm._add(u, v)
                rm.stats.accepted += 1
                mine.append(v)
            else:
                rejected.add(key)
        selected.append(mine)
    rm.selected = selected
    return rm
