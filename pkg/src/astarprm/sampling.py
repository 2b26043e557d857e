"""Vertex sampling for the roadmap learning phase.

Two samplers are provided: plain uniform rejection sampling over free space
(classic PRM) and the stratified scheme that concentrates vertices in a
corridor around the start-goal segment, places a share of the corridor quota
in a band just outside it, and spreads the rest over the whole map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SamplingExhaustedError
from .geometry import euclidean
from .grid_map import OccupancyGrid, Point, free_mask, is_free

START, GOAL, CORE, BOUNDARY, GLOBAL = "start", "goal", "core", "boundary", "global"
MIN_FREE_FRACTION = 0.01
STRATUM_ATTEMPT_FACTOR = 200


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5 + 1e-9))


@dataclass(frozen=True)
class SamplingConfig:
    n_total: int
    core_fraction: float = 0.70
    boundary_subfraction: float = 0.30
    delta: float | None = None
    corridor_half_width: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.n_total < 2:
            raise ValueError("n_total must be >= 2")
        for name in ("core_fraction", "boundary_subfraction"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.delta is not None and not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.corridor_half_width is not None and self.corridor_half_width < 0:
            raise ValueError("corridor_half_width must be non-negative")

    def resolved(self, S, G) -> tuple[float, float]:
        """(corridor_half_width, delta) with the length-relative defaults filled in."""
        d = euclidean(S, G)
        half = self.corridor_half_width if self.corridor_half_width is not None else 0.15 * d
        delta = self.delta if self.delta is not None else 0.10 * d
        return half, delta

    def quotas(self) -> tuple[int, int, int]:
        """(core, boundary, global) counts for the ``n_total - 2`` random vertices."""
        n = self.n_total - 2
        corridor = round_half_up(self.core_fraction * n)
        boundary = round_half_up(self.boundary_subfraction * corridor)
        return corridor - boundary, boundary, n - corridor


@dataclass
class VertexSet:
    vertices: list[Point]
    provenance: list[str]
    fallbacks: dict[str, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.vertices)

    def to_array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=float).reshape(-1, 2)

    def to_csv_rows(self):
        for i, (p, tag) in enumerate(zip(self.vertices, self.provenance)):
            yield {"index": i, "x": repr(p.x), "y": repr(p.y), "provenance": tag}


def _check_endpoints(grid, S, G):
    for name, p in (("start", S), ("goal", G)):
        if not is_free(grid, p):
            raise ValueError(f"{name} {tuple(p)} is not in free space")


def _draw_global(grid: OccupancyGrid, rng: np.random.Generator, count: int) -> list[Point]:
    """Uniform rejection sampling over the map rectangle."""
    if count == 0:
        return []
    if grid.free_fraction() < MIN_FREE_FRACTION:
        raise SamplingExhaustedError(
            f"free space is {grid.free_fraction():.2%} of the map, below {MIN_FREE_FRACTION:.0%}"
        )
    wx = grid.width * grid.resolution
    wy = grid.height * grid.resolution
    out: list[Point] = []
    budget = int(count / MIN_FREE_FRACTION) + 1000
    while len(out) < count:
        if budget <= 0:
            raise SamplingExhaustedError(f"drew only {len(out)} of {count} free samples")
        batch = min(budget, max(64, 2 * (count - len(out))))
        budget -= batch
        xs = rng.uniform(0.0, wx, batch)
        ys = rng.uniform(0.0, wy, batch)
        ok = free_mask(grid, xs, ys)
        out.extend(Point(float(x), float(y)) for x, y in zip(xs[ok], ys[ok]))
    return out[:count]


def sample_uniform(grid: OccupancyGrid, n_total: int, S, G, seed: int) -> VertexSet:
    """Classic PRM vertex set: S, G, then ``n_total - 2`` uniform free points."""
    if n_total < 2:
        raise ValueError("n_total must be >= 2")
    S, G = Point(*map(float, S)), Point(*map(float, G))
    _check_endpoints(grid, S, G)
    rng = np.random.default_rng(seed)
    rand = _draw_global(grid, rng, n_total - 2)
    return VertexSet([S, G, *rand], [START, GOAL] + [GLOBAL] * len(rand))


def _draw_band(
    grid: OccupancyGrid,
    rng: np.random.Generator,
    S: Point,
    G: Point,
    count: int,
    inner: float,
    outer: float,
    two_sided_gap: bool,
) -> list[Point]:
    """Rejection-sample points whose signed offset from segment S-G lies in a band.

    ``two_sided_gap`` False samples offsets in [-outer, outer] (the core corridor);
    True samples |offset| in (inner, outer] on either side (the extension band).
    Projections onto the segment are uniform over [0, 1].
    """
    if count == 0:
        return []
    length = euclidean(S, G)
    ux, uy = (G.x - S.x) / length, (G.y - S.y) / length
    nx, ny = -uy, ux
    out: list[Point] = []
    attempts = STRATUM_ATTEMPT_FACTOR * count
    while len(out) < count and attempts > 0:
        batch = min(attempts, max(64, 2 * (count - len(out))))
        attempts -= batch
        t = rng.uniform(0.0, 1.0, batch)
        if two_sided_gap:
            # (inner, outer]: reflect the half-open uniform draw
            mag = outer - rng.uniform(0.0, outer - inner, batch)
            off = np.where(rng.random(batch) < 0.5, -mag, mag)
        else:
            off = rng.uniform(-outer, outer, batch)
        xs = S.x + t * length * ux + off * nx
        ys = S.y + t * length * uy + off * ny
        ok = free_mask(grid, xs, ys)
        out.extend(Point(float(x), float(y)) for x, y in zip(xs[ok], ys[ok]))
    return out[:count]


def sample_stratified(grid: OccupancyGrid, cfg: SamplingConfig, S, G) -> VertexSet:
    """Goal-directed vertex set: core corridor, extension band and global strata.

    A stratum that cannot be filled within ``200 * quota`` attempts tops up its
    remaining quota from the global sampler; ``VertexSet.fallbacks`` records
    how many vertices each stratum borrowed that way.
    """
    S, G = Point(*map(float, S)), Point(*map(float, G))
    _check_endpoints(grid, S, G)
    if S == G:
        raise ValueError("stratified sampling needs S != G")
    half, delta = cfg.resolved(S, G)
    n_core, n_boundary, n_global = cfg.quotas()
    rng = np.random.default_rng(cfg.seed)

    vertices = [S, G]
    provenance = [START, GOAL]
    fallbacks: dict[str, int] = {}
    for tag, quota, inner, outer, gap in (
        (CORE, n_core, 0.0, half, False),
        (BOUNDARY, n_boundary, half, half + delta, True),
    ):
        got = _draw_band(grid, rng, S, G, quota, inner, outer, gap)
        vertices += got
        provenance += [tag] * len(got)
        missing = quota - len(got)
        if missing:
            fallbacks[tag] = missing
            extra = _draw_global(grid, rng, missing)
            vertices += extra
            provenance += [GLOBAL] * len(extra)
    extra = _draw_global(grid, rng, n_global)
    vertices += extra
    provenance += [GLOBAL] * len(extra)
    return VertexSet(vertices, provenance, fallbacks)
