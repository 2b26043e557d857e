import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from astarprm.errors import GeometryError
from astarprm.geometry import (
    euclidean,
    manhattan,
    menger_curvature,
    octile,
    point_segment_distance,
    segment_is_free,
    turn_angle,
)
from astarprm.grid_map import OccupancyGrid, load_ascii

from conftest import random_grid

coord = st.floats(-1e3, 1e3, allow_nan=False)
point = st.tuples(coord, coord)


def test_euclidean_examples():
    assert euclidean((0, 0), (3, 4)) == 5.0
    assert euclidean((50, 50), (847, 500)) == pytest.approx(915.26, abs=0.01)
    assert euclidean((7.5, 2.0), (7.5, 2.0)) == 0.0


def test_manhattan_examples():
    assert manhattan((0, 0), (3, 4)) == 7.0
    assert manhattan((2, 9), (2, 9)) == 0.0
    assert manhattan((50, 50), (847, 500)) == 1247.0


def test_octile():
    assert octile((0, 0), (9, 9)) == pytest.approx(9 * math.sqrt(2))
    assert octile((0, 0), (0, 5)) == 5.0


@given(point, point, point)
def test_metric_axioms(a, b, c):
    for d in (euclidean, manhattan):
        assert d(a, b) == d(b, a) >= 0
        assert d(a, c) <= d(a, b) + d(b, c) + 1e-9
    assert euclidean(a, b) <= manhattan(a, b) + 1e-9


def test_segment_all_free_grid():
    g = OccupancyGrid.empty(30, 30)
    rng = np.random.default_rng(0)
    for a, b in rng.uniform(0, 30, size=(50, 2, 2)):
        assert segment_is_free(g, (a, b))
        assert segment_is_free(g, (a, b), step=0.5)


def test_segment_blocked_midpoint():
    g = load_ascii("...\n.#.\n...")
    seg = ((0.5, 1.5), (2.5, 1.5))
    assert not segment_is_free(g, seg, step=0.25)
    assert not segment_is_free(g, seg)


def test_segment_endpoint_outside_is_blocked():
    g = OccupancyGrid.empty(5, 5)
    assert not segment_is_free(g, ((1, 1), (5.0, 1)))
    assert segment_is_free(g, ((1, 1), (4.999, 1)))


def _oracle_free(grid, a, b, step):
    """Independent dense sampler: n+1 evenly spaced points, looked up cell by cell."""
    n = max(1, math.ceil(math.hypot(b[0] - a[0], b[1] - a[1]) / step))
    rows = grid.blocked.tolist()
    for i in range(n + 1):
        t = i / n
        x, y = a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])
        if not (0 <= x < grid.width and 0 <= y < grid.height) or rows[int(y)][int(x)]:
            return False
    return True


def test_segment_check_agrees_with_dense_oracle():
    rng = np.random.default_rng(42)
    grid = random_grid(rng, 40, 40, 0.04)
    step = 0.5
    verdicts = []
    for _ in range(100):
        a = rng.uniform(0, 40, 2)
        b = a + rng.uniform(-8, 8, 2)
        oracle = _oracle_free(grid, a, b, step / 10)
        assert segment_is_free(grid, (a, b)) == oracle
        verdicts.append(oracle)
    # the sample must exercise both outcomes
    assert 10 < sum(verdicts) < 90


def test_sampled_mode_matches_independent_sampler():
    rng = np.random.default_rng(5)
    grid = random_grid(rng, 30, 30, 0.05)
    for _ in range(200):
        a = rng.uniform(0, 30, 2)
        b = a + rng.uniform(-6, 6, 2)
        assert segment_is_free(grid, (a, b), step=0.5) == _oracle_free(grid, a, b, 0.5)


def test_exact_check_lattice_moves():
    # diagonal move between free cells whose corner neighbours are free
    g = load_ascii("..\n..")
    assert segment_is_free(g, ((1, 0), (0, 1)))
    # anti-diagonal step crossing cell (0, 0), which is blocked
    g = load_ascii("#.\n..")
    assert not segment_is_free(g, ((1, 0), (0, 1)))
    # straight runs along a grid line belong to the cells on their +x / +y side
    g = load_ascii(".#\n.#")
    assert segment_is_free(g, ((0.0, 0.0), (0.0, 1.5)))
    assert not segment_is_free(g, ((1.0, 0.0), (1.0, 1.5)))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_free_segment_has_free_subsegments(seed, s, t):
    rng = np.random.default_rng(seed)
    grid = random_grid(rng, 20, 20, 0.03)
    a = rng.uniform(0, 20, 2)
    b = rng.uniform(0, 20, 2)
    if not segment_is_free(grid, (a, b)):
        return
    s, t = sorted((s, t))
    p, q = a + s * (b - a), a + t * (b - a)
    assert segment_is_free(grid, (p, q))
    assert segment_is_free(grid, (a, p)) and segment_is_free(grid, (q, b))
    for step in (0.5, 0.25, 0.05):
        assert segment_is_free(grid, (p, q), step=step)


def test_step_must_be_positive():
    with pytest.raises(ValueError):
        segment_is_free(OccupancyGrid.empty(3, 3), ((0, 0), (1, 1)), step=0)


@pytest.mark.parametrize(
    "pts, expected",
    [(((0, 0), (1, 0), (2, 0)), 0.0), (((0, 0), (1, 0), (1, 1)), 90.0), (((0, 0), (1, 0), (0, 0)), 180.0)],
)
def test_turn_angle(pts, expected):
    assert turn_angle(*pts) == pytest.approx(expected, abs=1e-12)


def test_turn_angle_degenerate():
    with pytest.raises(GeometryError):
        turn_angle((0, 0), (0, 0), (1, 1))


def _on_circle(r, angles, cx=0.0, cy=0.0):
    return [(cx + r * math.cos(a), cy + r * math.sin(a)) for a in angles]


def test_menger_examples():
    assert menger_curvature((0, 0), (1, 1), (2, 2)) == 0.0
    assert menger_curvature(*_on_circle(1.0, (0.1, 1.3, 2.9))) == pytest.approx(1.0, abs=1e-9)
    assert menger_curvature(*_on_circle(2.0, (0.4, 2.0, 4.4))) == pytest.approx(0.5, abs=1e-9)


def test_menger_coincident_points():
    with pytest.raises(GeometryError):
        menger_curvature((1, 1), (1, 1), (2, 3))


@given(
    st.lists(st.tuples(st.floats(-50, 50), st.floats(-50, 50)), min_size=3, max_size=3, unique=True),
    st.floats(0, 2 * math.pi),
    st.floats(-100, 100),
    st.floats(-100, 100),
)
def test_menger_rigid_invariance(pts, theta, tx, ty):
    if min(euclidean(pts[i], pts[j]) for i, j in ((0, 1), (1, 2), (0, 2))) < 1.0:
        return
    c, s = math.cos(theta), math.sin(theta)
    moved = [(c * x - s * y + tx, s * x + c * y + ty) for x, y in pts]
    assert menger_curvature(*moved) == pytest.approx(menger_curvature(*pts), rel=0, abs=1e-9)


def test_point_segment_distance():
    assert point_segment_distance((5, 3), (0, 0), (10, 0)) == 3.0
    assert point_segment_distance((-4, 3), (0, 0), (10, 0)) == 5.0
    assert point_segment_distance((1, 1), (0, 0), (0, 0)) == pytest.approx(math.sqrt(2))
