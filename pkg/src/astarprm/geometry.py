"""Distances, segment collision checks and discrete curvature."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import GeometryError
from .grid_map import OccupancyGrid, Point, free_mask, is_free

DEFAULT_COLLISION_STEP = 0.5
SQRT2 = math.sqrt(2.0)


class Segment(NamedTuple):
    a: Point
    b: Point


def euclidean(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def manhattan(a, b) -> float:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def octile(a, b) -> float:
    """Exact 8-connected move cost on an empty lattice (straight 1, diagonal sqrt 2)."""
    dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
    return max(dx, dy) + (SQRT2 - 1.0) * min(dx, dy)


def _sample_points(a, b, step: float) -> tuple[np.ndarray, np.ndarray]:
    length = euclidean(a, b)
    n = max(1, math.ceil(length / step))
    t = np.linspace(0.0, 1.0, n + 1)
    return a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])


def _crossings(a0: float, a1: float, scale: float) -> np.ndarray:
    """Parameters t in (0, 1) where the coordinate crosses an integer cell boundary."""
    lo, hi = a0 / scale, a1 / scale
    if lo == hi:
        return np.empty(0)
    ks = np.arange(math.floor(min(lo, hi)) + 1, math.ceil(max(lo, hi)))
    return (ks - lo) / (hi - lo)


def segment_is_free(grid: OccupancyGrid, s, step: float | None = None) -> bool:
    """Collision check for the straight segment ``s = (a, b)``.

    With ``step`` given, points spaced at most ``step`` apart (both endpoints
    included) are tested.  With ``step=None`` the check is exact: every cell
    the segment passes through must be free, so any sampled check at any
    spacing also passes.
    """
    a, b = s
    if step is not None:
        if step <= 0:
            raise ValueError("step must be positive")
        xs, ys = _sample_points(a, b, step)
        return bool(free_mask(grid, xs, ys).all())

    if not (is_free(grid, a) and is_free(grid, b)):
        return False
    r = grid.resolution
    ts = np.concatenate(([0.0, 1.0], _crossings(a[0], b[0], r), _crossings(a[1], b[1], r)))
    ts.sort()
    # merge breakpoints that differ only by rounding (lattice-point passes)
    keep = np.concatenate(([True], np.diff(ts) > 1e-9))
    ts = ts[keep]
    if ts[-1] < 1.0:
        ts = np.append(ts, 1.0)
    mid = 0.5 * (ts[:-1] + ts[1:])
    xs = a[0] + mid * (b[0] - a[0])
    ys = a[1] + mid * (b[1] - a[1])
    return bool(free_mask(grid, xs, ys).all())


def point_segment_distance(p, a, b) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    denom = dx * dx + dy * dy
    if denom == 0.0:
        return euclidean(p, a)
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / denom
    t = min(1.0, max(0.0, t))
    return math.hypot(p[0] - (a[0] + t * dx), p[1] - (a[1] + t * dy))


def turn_angle(p_prev, p, p_next) -> float:
    """Absolute heading change at ``p``, in degrees within [0, 180]."""
    ux, uy = p[0] - p_prev[0], p[1] - p_prev[1]
    vx, vy = p_next[0] - p[0], p_next[1] - p[1]
    if (ux == 0.0 and uy == 0.0) or (vx == 0.0 and vy == 0.0):
        raise GeometryError(f"turn angle undefined at {tuple(p)}: zero-length segment")
    cross = ux * vy - uy * vx
    dot = ux * vx + uy * vy
    return abs(math.degrees(math.atan2(cross, dot)))


def menger_curvature(p_prev, p, p_next) -> float:
    """Inverse circumradius of three points; 0 when they are collinear."""
    a = euclidean(p_prev, p)
    b = euclidean(p, p_next)
    c = euclidean(p_prev, p_next)
    if a == 0.0 or b == 0.0 or c == 0.0:
        raise GeometryError("curvature undefined for coincident points")
    cross = (p[0] - p_prev[0]) * (p_next[1] - p_prev[1]) - (p[1] - p_prev[1]) * (
        p_next[0] - p_prev[0]
    )
    # |cross| is twice the triangle area
    return 2.0 * abs(cross) / (a * b * c)
