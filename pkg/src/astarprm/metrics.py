"""Evaluation metrics for planned paths and trimmed trial aggregation."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .geometry import euclidean, menger_curvature, turn_angle

METRIC_FIELDS = (
    "path_length",
    "wall_time",
    "node_expansion",
    "smoothness",
    "max_curvature",
    "connection_rate",
)


def _waypoints(path):
    return path.waypoints if hasattr(path, "waypoints") else list(path)


def path_length(path) -> float:
    w = _waypoints(path)
    if len(w) < 2:
        raise ValueError("path_length needs at least two waypoints")
    return sum(euclidean(w[i], w[i + 1]) for i in range(len(w) - 1))


def smoothness(path) -> float:
    """Total absolute heading change in degrees divided by path length."""
    w = _waypoints(path)
    length = path_length(w)
    if length == 0.0:
        raise ValueError("smoothness is undefined for a zero-length path")
    if len(w) == 2:
        return 0.0
    total = sum(turn_angle(w[i - 1], w[i], w[i + 1]) for i in range(1, len(w) - 1))
    return total / length


def max_curvature(path) -> float:
    w = _waypoints(path)
    if len(w) < 2:
        raise ValueError("max_curvature needs at least two waypoints")
    return max(
        (menger_curvature(w[i - 1], w[i], w[i + 1]) for i in range(1, len(w) - 1)),
        default=0.0,
    )


@dataclass
class PlanReport:
    """Per-run measurements.

    ``node_expansion`` is the vertex count for roadmap planners and the number
    of frontier pops for grid planners; ``expanded`` always holds the pops.
    """

    success: bool
    path_length: float = math.nan
    wall_time: float = 0.0
    node_expansion: int = 0
    smoothness: float = math.nan
    max_curvature: float = math.nan
    connection_rate: float | None = None
    expanded: int = 0
    raw_cost: float = math.nan
    n_vertices: int = 0
    n_edges: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrialAggregate:
    n_trials: int
    trimmed_mean: dict[str, float] = field(default_factory=dict)
    trimmed_std: dict[str, float] = field(default_factory=dict)
    fluctuation: float = math.nan


def trimmed_stats(values) -> tuple[float, float]:
    """Mean and population std after dropping one maximum and one minimum."""
    vals = sorted(float(v) for v in values)
    if len(vals) < 3:
        raise ValueError("trimmed statistics need at least three values")
    kept = vals[1:-1]
    mean = math.fsum(kept) / len(kept)
    var = math.fsum((v - mean) ** 2 for v in kept) / len(kept)
    return mean, math.sqrt(var)


def aggregate(trials) -> TrialAggregate:
    trials = list(trials)
    if len(trials) < 3:
        raise ValueError(f"aggregate needs at least 3 trials, got {len(trials)}")
    agg = TrialAggregate(n_trials=len(trials))
    for name in METRIC_FIELDS:
        col = [getattr(t, name) for t in trials]
        if any(v is None for v in col):
            continue
        agg.trimmed_mean[name], agg.trimmed_std[name] = trimmed_stats(col)
    mean = agg.trimmed_mean.get("path_length", math.nan)
    if mean and not math.isnan(mean):
        agg.fluctuation = 100.0 * agg.trimmed_std["path_length"] / mean
    return agg
