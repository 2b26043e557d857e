import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from astarprm.geometry import euclidean
from astarprm.metrics import PlanReport, aggregate, max_curvature, path_length, smoothness
from astarprm.search import Path


def polygon(r, n, cx=0.0, cy=0.0):
    return [(cx + r * math.cos(2 * math.pi * i / n), cy + r * math.sin(2 * math.pi * i / n)) for i in range(n + 1)]


def random_path(rng, n):
    pts = np.cumsum(rng.uniform(-5, 5, size=(n, 2)), axis=0)
    return Path([tuple(p) for p in pts])


def test_path_length_examples():
    assert path_length(Path([(0, 0), (3, 4)])) == 5.0
    assert path_length(Path([(0, 0), (3, 4), (3, 10)])) == 11.0
    with pytest.raises(ValueError):
        path_length(Path([(1, 1)]))


def test_smoothness_examples():
    assert smoothness(Path([(0, 0), (7, 2)])) == 0.0
    assert smoothness(Path([(0, 0), (1, 0), (1, 1)])) == pytest.approx(45.0, abs=1e-12)


def _independent_smoothness(pts):
    total = 0.0
    for (x0, y0), (x1, y1), (x2, y2) in zip(pts, pts[1:], pts[2:]):
        h1 = math.atan2(y1 - y0, x1 - x0)
        h2 = math.atan2(y2 - y1, x2 - x1)
        d = (h2 - h1 + math.pi) % (2 * math.pi) - math.pi
        total += abs(math.degrees(d))
    length = sum(math.dist(a, b) for a, b in zip(pts, pts[1:]))
    return total / length


def test_smoothness_matches_independent_recomputation():
    rng = np.random.default_rng(0)
    for _ in range(50):
        p = random_path(rng, int(rng.integers(3, 30)))
        assert smoothness(p) == pytest.approx(_independent_smoothness(p.waypoints), abs=1e-9)


def test_max_curvature_examples():
    assert max_curvature(Path([(0, 0), (5, 5)])) == 0.0
    assert max_curvature(Path(polygon(2.0, 64))) == pytest.approx(0.5, rel=0.05)


def test_max_curvature_matches_exhaustive_triples():
    rng = np.random.default_rng(1)
    for _ in range(50):
        w = random_path(rng, int(rng.integers(3, 25))).waypoints
        brute = 0.0
        for i in range(1, len(w) - 1):
            a, b, c = w[i - 1], w[i], w[i + 1]
            area2 = abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
            brute = max(brute, 2 * area2 / (euclidean(a, b) * euclidean(b, c) * euclidean(a, c)))
        assert max_curvature(Path(w)) == brute


def test_reversal_and_rigid_invariance():
    rng = np.random.default_rng(2)
    for _ in range(30):
        p = random_path(rng, 12)
        rev = Path(p.waypoints[::-1])
        assert path_length(rev) == pytest.approx(path_length(p), abs=1e-9)
        th, tx, ty = rng.uniform(0, 2 * math.pi), *rng.uniform(-50, 50, 2)
        c, s = math.cos(th), math.sin(th)
        moved = Path([(c * x - s * y + tx, s * x + c * y + ty) for x, y in p.waypoints])
        assert smoothness(moved) == pytest.approx(smoothness(p), abs=1e-9)
        assert max_curvature(moved) == pytest.approx(max_curvature(p), abs=1e-9)


def _report(v, **kw):
    return PlanReport(True, path_length=v, wall_time=v / 10, node_expansion=int(v), smoothness=v,
                      max_curvature=v, connection_rate=kw.get("rate"))


def test_aggregate_constant():
    agg = aggregate([_report(7.5) for _ in range(12)])
    assert agg.trimmed_mean["path_length"] == 7.5
    assert agg.trimmed_std["path_length"] == 0.0
    assert agg.fluctuation == 0.0
    assert "connection_rate" not in agg.trimmed_mean


def test_aggregate_one_to_twelve():
    agg = aggregate([_report(float(v)) for v in range(1, 13)])
    assert agg.trimmed_mean["path_length"] == 6.5
    assert agg.n_trials == 12


def _naive(values):
    vals = sorted(values)[1:-1]
    mean = sum(vals) / len(vals)
    return mean, (sum((v - mean) ** 2 for v in vals) / len(vals)) ** 0.5


def test_aggregate_matches_naive_and_is_permutation_invariant():
    rng = np.random.default_rng(4)
    for _ in range(40):
        vals = list(rng.uniform(900, 1200, 12))
        reports = [_report(v, rate=v / 2000) for v in vals]
        agg = aggregate(reports)
        mean, std = _naive(vals)
        assert agg.trimmed_mean["path_length"] == pytest.approx(mean, rel=1e-12)
        assert agg.trimmed_std["path_length"] == pytest.approx(std, abs=1e-9)
        assert agg.fluctuation == pytest.approx(100 * std / mean, rel=1e-12)
        random.Random(0).shuffle(reports)
        assert aggregate(reports).trimmed_mean == agg.trimmed_mean


def test_aggregate_needs_three_trials():
    with pytest.raises(ValueError):
        aggregate([_report(1.0), _report(2.0)])


@given(st.lists(st.floats(0, 1e4), min_size=3, max_size=30))
def test_trimmed_mean_lies_between_extremes(values):
    agg = aggregate([_report(v) for v in values])
    assert min(values) - 1e-9 <= agg.trimmed_mean["path_length"] <= max(values) + 1e-9
