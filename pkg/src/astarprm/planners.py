"""The four planners behind one entry point, :func:`plan`."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

from .geometry import euclidean
from .grid_map import OccupancyGrid, Point, is_free
from .metrics import PlanReport, max_curvature, path_length, smoothness
from .postprocess import SmoothingConfig, shortcut, smooth
from .roadmap import Roadmap, connect_dynamic, connect_fixed_k
from .sampling import SamplingConfig, VertexSet, sample_stratified, sample_uniform
from .search import Path, graph_astar, grid_astar

ALGORITHMS = ("dijkstra-grid", "astar-grid", "prm", "astar-prm")
ROADMAP_ALGORITHMS = ("prm", "astar-prm")


@dataclass(frozen=True)
class PlannerSpec:
    algorithm: str = "astar-prm"
    n_samples: int = 1000
    k_neighbors: int = 10
    heuristic: str = "manhattan"
    query_heuristic: str = "euclidean"
    grid_heuristic: str = "octile"
    seed: int = 0
    smoothing: SmoothingConfig = field(default_factory=SmoothingConfig)
    postprocess_enabled: bool | None = None
    sampling: SamplingConfig | None = None
    pool_multiplier: int = 3

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if self.algorithm in ROADMAP_ALGORITHMS and self.n_samples < 2:
            raise ValueError("n_samples must be >= 2 for sampling planners")
        if self.k_neighbors < 1:
            raise ValueError("k_neighbors must be >= 1")

    @property
    def postprocess(self) -> bool:
        if self.postprocess_enabled is None:
            return self.algorithm == "astar-prm"
        return self.postprocess_enabled

    def sampling_config(self) -> SamplingConfig:
        if self.sampling is None:
            return SamplingConfig(n_total=self.n_samples, seed=self.seed)
        return replace(self.sampling, n_total=self.n_samples, seed=self.seed)


@dataclass
class PlanOutcome:
    path: Path | None
    report: PlanReport
    raw_path: Path | None = None
    roadmap: Roadmap | None = None

    def __iter__(self):
        return iter((self.path, self.report))


def build_roadmap(grid: OccupancyGrid, S: Point, G: Point, spec: PlannerSpec) -> Roadmap:
    if spec.algorithm == "astar-prm":
        vs = sample_stratified(grid, spec.sampling_config(), S, G)
        return connect_dynamic(
            grid, vs, spec.k_neighbors, spec.heuristic, G, pool_multiplier=spec.pool_multiplier
        )
    vs = sample_uniform(grid, spec.n_samples, S, G, spec.seed)
    return connect_fixed_k(grid, vs, spec.k_neighbors)


def _fill_metrics(report: PlanReport, path: Path):
    report.success = True
    if len(path) < 2:
        report.path_length = report.smoothness = report.max_curvature = 0.0
        return
    report.path_length = path_length(path)
    report.smoothness = smoothness(path)
    report.max_curvature = max_curvature(path)


def plan(grid: OccupancyGrid, S, G, spec: PlannerSpec) -> PlanOutcome:
    """Plan from ``S`` to ``G``.

    Unpacks as ``(path, report)``; ``path`` is None when no route was found.
    Roadmap planners also expose the roadmap and the pre-postprocess path.
    """
    S, G = Point(float(S[0]), float(S[1])), Point(float(G[0]), float(G[1]))
    for name, p in (("start", S), ("goal", G)):
        if not is_free(grid, p):
            raise ValueError(f"{name} {tuple(p)} is blocked or outside the map")
    report = PlanReport(success=False)
    roadmap = None
    t0 = time.perf_counter()

    if S == G:
        raw = Path([S])
        report.raw_cost = 0.0
        report.node_expansion = spec.n_samples if spec.algorithm in ROADMAP_ALGORITHMS else 0
    elif spec.algorithm in ROADMAP_ALGORITHMS:
        roadmap = build_roadmap(grid, S, G, spec)
        result = graph_astar(roadmap, 0, 1, spec.query_heuristic)
        raw = result.path
        report.raw_cost = result.cost
        report.expanded = result.expanded
        report.node_expansion = len(roadmap.vertices)
        report.connection_rate = roadmap.stats.rate
        report.n_vertices = len(roadmap.vertices)
        report.n_edges = len(roadmap.edges)
    else:
        heur = "zero" if spec.algorithm == "dijkstra-grid" else spec.grid_heuristic
        result = grid_astar(grid, S, G, heur)
        raw = None
        if result.path is not None:
            # lattice anchors lie in the same cells as S and G
            raw = Path([S, *result.path.waypoints, G])
        report.raw_cost = result.cost + (
            euclidean(S, result.path.start) + euclidean(result.path.goal, G) if raw else 0.0
        )
        report.expanded = result.expanded
        report.node_expansion = result.expanded

    path = raw
    if raw is not None and len(raw) > 2 and spec.postprocess:
        path = smooth(grid, shortcut(grid, raw), spec.smoothing)
    report.wall_time = time.perf_counter() - t0

    if path is not None:
        _fill_metrics(report, path)
    return PlanOutcome(path, report, raw, roadmap)
