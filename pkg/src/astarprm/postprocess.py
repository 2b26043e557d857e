"""Path post-processing: redundant waypoint removal and smoothing."""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import euclidean, segment_is_free, turn_angle
from .grid_map import OccupancyGrid, Point
from .search import Path


@dataclass(frozen=True)
class SmoothingConfig:
    iterations: int = 3
    corner_ratio: float = 0.25
    collision_step: float | None = None

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if not 0.0 < self.corner_ratio < 0.5:
            raise ValueError("corner_ratio must be in (0, 0.5)")


def shortcut(grid: OccupancyGrid, path: Path, step: float | None = None) -> Path:
    """Greedy line-of-sight pruning.

    From the current waypoint jump to the farthest later waypoint that it can
    see in a straight collision-free line.  Neighbouring waypoints are assumed
    connected, so the sweep always advances.
    """
    w = path.waypoints
    n = len(w)
    if n <= 2:
        return path
    out = [w[0]]
    i = 0
    while i < n - 1:
        j = n - 1
        while j > i + 1 and not segment_is_free(grid, (w[i], w[j]), step):
            j -= 1
        out.append(w[j])
        i = j
    return Path(out)


def _turning_per_metre(pts: list) -> float:
    length = sum(euclidean(pts[i], pts[i + 1]) for i in range(len(pts) - 1))
    if length == 0.0:
        return 0.0
    turn = sum(turn_angle(pts[i - 1], pts[i], pts[i + 1]) for i in range(1, len(pts) - 1))
    return turn / length


def smooth(grid: OccupancyGrid, path: Path, cfg: SmoothingConfig | None = None) -> Path:
    """Corner relaxation with collision and smoothness rollback.

    Each pass pulls every interior waypoint towards its neighbours,
    ``p <- (1 - 2r) p + r (prev + next)`` with ``r = corner_ratio``; the new
    point is the midpoint of the classic corner cut at ratio ``r``.  A move is
    kept only if both incident segments stay collision-free and the path's
    degrees-per-metre turning does not grow.  Endpoints never move.
    """
    cfg = cfg or SmoothingConfig()
    pts = list(path.waypoints)
    if len(pts) <= 2 or cfg.iterations == 0:
        return path
    r = cfg.corner_ratio
    step = cfg.collision_step
    current = _turning_per_metre(pts)
    for _ in range(cfg.iterations):
        moved = False
        for i in range(1, len(pts) - 1):
            a, p, b = pts[i - 1], pts[i], pts[i + 1]
            q = Point(
                (1 - 2 * r) * p.x + r * (a.x + b.x),
                (1 - 2 * r) * p.y + r * (a.y + b.y),
            )
            if q == p or q == a or q == b:
                continue
            if not (segment_is_free(grid, (a, q), step) and segment_is_free(grid, (q, b), step)):
                continue
            pts[i] = q
            score = _turning_per_metre(pts)
            if score <= current:
                current = score
                moved = True
            else:
                pts[i] = p
        if not moved:
            break
    return Path(pts)
