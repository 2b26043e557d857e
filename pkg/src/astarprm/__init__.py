"""2D occupancy-grid motion planning: A*-PRM, classic PRM, grid A* and Dijkstra."""

from .errors import (
    ConfigError,
    DegenerateQueryError,
    GeometryError,
    MapFormatError,
    MapGenerationError,
    PlanningError,
    SamplingExhaustedError,
)
from .grid_map import OccupancyGrid, Point, generate_warehouse, is_free, load_ascii, load_pgm
from .metrics import PlanReport, aggregate
from .planners import PlannerSpec, plan
from .search import Path

__all__ = [
    "ConfigError",
    "DegenerateQueryError",
    "GeometryError",
    "MapFormatError",
    "MapGenerationError",
    "OccupancyGrid",
    "Path",
    "PlanReport",
    "PlannerSpec",
    "PlanningError",
    "Point",
    "SamplingExhaustedError",
    "aggregate",
    "generate_warehouse",
    "is_free",
    "load_ascii",
    "load_pgm",
    "plan",
]
