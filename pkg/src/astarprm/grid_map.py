"""Occupancy grids: loading, procedural generation and free-space queries.

Cell ``(i, j)`` covers the half-open square ``[i, i+1) x [j, j+1)`` in metres
(at the default resolution of 1 m per cell).  Row ``j`` of an ASCII or PGM
map is the ``j``-th line / raster row, so ``y`` grows downwards in images.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import MapFormatError, MapGenerationError

PGM_FREE_THRESHOLD = 128
FREE_CHAR = "."
BLOCKED_CHAR = "#"


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True, eq=False)
class OccupancyGrid:
    """Immutable binary raster. ``blocked[y, x]`` is True for obstacle cells."""

    blocked: np.ndarray
    resolution: float = 1.0
    start: Point | None = None
    goal: Point | None = None
    _flat: bytes = field(init=False, repr=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.blocked, dtype=bool)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"grid must be a non-empty 2D array, got shape {arr.shape}")
        if not self.resolution > 0:
            raise ValueError("resolution must be positive")
        arr.setflags(write=False)
        object.__setattr__(self, "blocked", arr)
        object.__setattr__(self, "_flat", arr.tobytes())

    @classmethod
    def empty(cls, width: int, height: int, resolution: float = 1.0) -> "OccupancyGrid":
        return cls(np.zeros((height, width), dtype=bool), resolution)

    @property
    def width(self) -> int:
        return self.blocked.shape[1]

    @property
    def height(self) -> int:
        return self.blocked.shape[0]

    @property
    def cells(self) -> bytes:
        """Row-major cell flags (1 = blocked), length ``width * height``."""
        return self._flat

    def cell_blocked(self, i: int, j: int) -> bool:
        if 0 <= i < self.width and 0 <= j < self.height:
            return self._flat[j * self.width + i] != 0
        return True

    def free_fraction(self) -> float:
        return 1.0 - float(self.blocked.mean())

    def __eq__(self, other):
        if not isinstance(other, OccupancyGrid):
            return NotImplemented
        return (
            self.resolution == other.resolution
            and self.blocked.shape == other.blocked.shape
            and self._flat == other._flat
        )

    def __hash__(self):
        return hash((self.blocked.shape, self._flat, self.resolution))

    def to_ascii(self) -> str:
        rows = [
            [BLOCKED_CHAR if b else FREE_CHAR for b in row] for row in self.blocked.tolist()
        ]
        for mark, p in (("S", self.start), ("G", self.goal)):
            if p is not None:
                rows[int(p.y)][int(p.x)] = mark
        return "".join("".join(r) + "\n" for r in rows)

    def to_pgm(self) -> bytes:
        """Binary P5 encoding (free = 255, blocked = 0)."""
        header = f"P5\n{self.width} {self.height}\n255\n".encode("ascii")
        raster = np.where(self.blocked, 0, 255).astype(np.uint8)
        return header + raster.tobytes()


def is_free(grid: OccupancyGrid, p) -> bool:
    """True iff ``p`` lies inside the map and its cell is free."""
    x, y = p[0] / grid.resolution, p[1] / grid.resolution
    if not (0.0 <= x < grid.width and 0.0 <= y < grid.height):
        return False
    return grid._flat[int(y) * grid.width + int(x)] == 0


def free_mask(grid: OccupancyGrid, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Vectorised :func:`is_free` over coordinate arrays."""
    xs = np.asarray(xs, dtype=float) / grid.resolution
    ys = np.asarray(ys, dtype=float) / grid.resolution
    inside = (xs >= 0) & (xs < grid.width) & (ys >= 0) & (ys < grid.height)
    out = np.zeros(xs.shape, dtype=bool)
    ix = np.floor(xs[inside]).astype(np.intp)
    iy = np.floor(ys[inside]).astype(np.intp)
    out[inside] = ~grid.blocked[iy, ix]
    return out


def load_ascii(text: str) -> OccupancyGrid:
    """Parse a ``.``/``#`` map. ``S`` and ``G`` mark free start/goal cells."""
    lines = text.splitlines()
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MapFormatError("empty map")
    width = len(lines[0])
    if width == 0:
        raise MapFormatError("empty first row")
    start = goal = None
    blocked = np.zeros((len(lines), width), dtype=bool)
    for j, line in enumerate(lines):
        if len(line) != width:
            raise MapFormatError(f"row {j} has length {len(line)}, expected {width}")
        for i, ch in enumerate(line):
            if ch == BLOCKED_CHAR:
                blocked[j, i] = True
            elif ch == "S":
                start = Point(float(i), float(j))
            elif ch == "G":
                goal = Point(float(i), float(j))
            elif ch != FREE_CHAR:
                raise MapFormatError(f"unknown character {ch!r} at row {j}, column {i}")
    return OccupancyGrid(blocked, start=start, goal=goal)


_PGM_TOKEN = re.compile(rb"(#[^\n]*\n?)|(\S+)")


def load_pgm(data: bytes) -> OccupancyGrid:
    """Parse a P2 (plain) or P5 (binary) greymap; values >= 128 are free."""
    if len(data) < 2 or data[:2] not in (b"P2", b"P5"):
        raise MapFormatError("not a P2/P5 PGM file")
    magic = data[:2]
    header: list[int] = []
    pos = 2
    # width, height, maxval; comments may appear between tokens
    while len(header) < 3:
        m = _PGM_TOKEN.search(data, pos)
        if m is None:
            raise MapFormatError("truncated PGM header")
        pos = m.end()
        if m.group(2) is not None:
            try:
                header.append(int(m.group(2)))
            except ValueError:
                raise MapFormatError(f"bad PGM header token {m.group(2)!r}") from None
    width, height, maxval = header
    if width < 1 or height < 1:
        raise MapFormatError("PGM dimensions must be positive")
    if not 0 < maxval <= 255:
        raise MapFormatError(f"unsupported maxval {maxval}")
    n = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates maxval from the raster
        raster = data[pos + 1 : pos + 1 + n]
        if len(raster) != n:
            raise MapFormatError("truncated PGM raster")
        values = np.frombuffer(raster, dtype=np.uint8)
    else:
        body = re.sub(rb"#[^\n]*", b"", data[pos:]).split()
        if len(body) < n:
            raise MapFormatError("truncated PGM raster")
        try:
            values = np.array([int(v) for v in body[:n]], dtype=np.int64)
        except ValueError:
            raise MapFormatError("non-integer PGM sample") from None
        if values.min() < 0 or values.max() > maxval:
            raise MapFormatError("PGM sample out of range")
    return OccupancyGrid(values.reshape(height, width) < PGM_FREE_THRESHOLD)


def load_map(path) -> OccupancyGrid:
    """Load a map file, choosing the parser from its magic bytes."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] in (b"P2", b"P5"):
        return load_pgm(data)
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError:
        raise MapFormatError(f"{path}: neither PGM nor ASCII") from None
    return load_ascii(text)


def warehouse_endpoints(width: int, height: int) -> tuple[Point, Point]:
    return Point(50.0, 50.0), Point(float(width - 50), float(height - 50))


def generate_warehouse(
    width: int,
    height: int,
    seed: int,
    obstacle_density: float,
    max_retries: int = 25,
    clear_radius: float = 10.0,
    rect_size: tuple[int, int] = (10, 80),
) -> OccupancyGrid:
    """Scatter axis-aligned rectangles until ``obstacle_density`` is reached.

    Discs of ``clear_radius`` around (50, 50) and (width-50, height-50) stay
    free, and a map is only returned once grid A* links those two points.
    The result is a pure function of the arguments.
    """
    from .search import grid_astar

    if width < 50 or height < 50:
        raise ValueError("warehouse maps need width and height >= 50")
    if not 0.0 <= obstacle_density <= 0.4:
        raise ValueError("obstacle_density must be in [0, 0.4]")
    start, goal = warehouse_endpoints(width, height)
    yy, xx = np.mgrid[0:height, 0:width]
    keep_free = np.zeros((height, width), dtype=bool)
    for c in (start, goal):
        keep_free |= (xx + 0.5 - c.x) ** 2 + (yy + 0.5 - c.y) ** 2 <= clear_radius**2
    # the endpoint cells themselves must be free whatever the radius
    for c in (start, goal):
        keep_free[int(c.y), int(c.x)] = True
    n_free_cells = keep_free.size - int(keep_free.sum())
    target = int(math.ceil(obstacle_density * keep_free.size))

    rng = np.random.default_rng(seed)
    lo, hi = rect_size
    for _ in range(max_retries):
        blocked = np.zeros((height, width), dtype=bool)
        n_blocked = 0
        while n_blocked < min(target, n_free_cells):
            w, h = rng.integers(lo, hi + 1, size=2)
            x0 = int(rng.integers(0, max(1, width - w + 1)))
            y0 = int(rng.integers(0, max(1, height - h + 1)))
            blocked[y0 : y0 + h, x0 : x0 + w] = True
            blocked &= ~keep_free
            n_blocked = int(blocked.sum())
        grid = OccupancyGrid(blocked)
        if n_blocked == 0 or grid_astar(grid, start, goal).path is not None:
            return grid
    raise MapGenerationError(
        f"no connected {width}x{height} map with density {obstacle_density} "
        f"after {max_retries} attempts (seed {seed})"
    )
