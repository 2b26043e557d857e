import numpy as np
import pytest

from astarprm.errors import SamplingExhaustedError
from astarprm.geometry import point_segment_distance
from astarprm.grid_map import OccupancyGrid, is_free, warehouse_endpoints
from astarprm.sampling import (
    BOUNDARY,
    CORE,
    GLOBAL,
    SamplingConfig,
    round_half_up,
    sample_stratified,
    sample_uniform,
)

S, G = warehouse_endpoints(897, 550)


def test_uniform_two_vertices_is_just_endpoints():
    vs = sample_uniform(OccupancyGrid.empty(100, 100), 2, (1, 1), (90, 90), seed=3)
    assert vs.vertices == [(1.0, 1.0), (90.0, 90.0)]
    assert vs.provenance == ["start", "goal"]


def test_uniform_is_deterministic(warehouse):
    a = sample_uniform(warehouse, 1000, S, G, seed=4)
    b = sample_uniform(warehouse, 1000, S, G, seed=4)
    assert a.vertices == b.vertices
    assert a.vertices != sample_uniform(warehouse, 1000, S, G, seed=5).vertices


def test_uniform_vertices_are_free(warehouse):
    vs = sample_uniform(warehouse, 1000, S, G, seed=0)
    assert len(vs) == 1000
    assert vs.vertices[0] == S and vs.vertices[1] == G
    rows = warehouse.blocked.tolist()
    assert not any(rows[int(p.y)][int(p.x)] for p in vs.vertices)


def test_uniform_exhausted_on_nearly_blocked_map():
    blocked = np.ones((100, 100), dtype=bool)
    blocked[0:5, 0:1] = False
    with pytest.raises(SamplingExhaustedError):
        sample_uniform(OccupancyGrid(blocked), 50, (0.5, 0.5), (0.5, 4.5), seed=0)


def test_blocked_endpoint_rejected():
    with pytest.raises(ValueError):
        sample_uniform(OccupancyGrid(np.ones((5, 5), dtype=bool)), 5, (1, 1), (2, 2), 0)


def test_round_half_up():
    assert [round_half_up(x) for x in (0.5, 1.5, 2.5, 2.4999, 699.9999999999)] == [1, 2, 3, 2, 700]


def test_stratified_two_vertices():
    vs = sample_stratified(OccupancyGrid.empty(200, 200), SamplingConfig(2, seed=1), (10, 10), (150, 120))
    assert vs.vertices == [(10.0, 10.0), (150.0, 120.0)]


def test_stratified_exact_counts_on_free_map():
    grid = OccupancyGrid.empty(897, 550)
    vs = sample_stratified(grid, SamplingConfig(1002, seed=0), S, G)
    counts = {tag: vs.provenance.count(tag) for tag in (CORE, BOUNDARY, GLOBAL)}
    assert counts == {CORE: 490, BOUNDARY: 210, GLOBAL: 300}
    assert SamplingConfig(1002).quotas() == (490, 210, 300)
    assert len(vs) == 1002 and not vs.fallbacks


def test_stratified_band_geometry(warehouse):
    cfg = SamplingConfig(1000, seed=2)
    vs = sample_stratified(warehouse, cfg, S, G)
    half, delta = cfg.resolved(S, G)
    assert half == pytest.approx(0.15 * 915.2645, rel=1e-5)
    assert delta == pytest.approx(0.10 * 915.2645, rel=1e-5)
    assert vs.vertices[:2] == [S, G]
    for p, tag in zip(vs.vertices, vs.provenance):
        d = point_segment_distance(p, S, G)
        if tag == CORE:
            assert d <= half + 1e-9
        elif tag == BOUNDARY:
            assert half - 1e-9 < d <= half + delta + 1e-9
        assert is_free(warehouse, p)


def test_stratified_is_deterministic(warehouse):
    cfg = SamplingConfig(800, seed=9)
    a = sample_stratified(warehouse, cfg, S, G)
    b = sample_stratified(warehouse, cfg, S, G)
    assert a.vertices == b.vertices and a.provenance == b.provenance


def test_stratified_falls_back_when_corridor_blocked():
    blocked = np.zeros((100, 200), dtype=bool)
    blocked[40:60, :] = True  # corridor and band blocked apart from the endpoint cells
    blocked[50, 1] = blocked[50, 198] = False
    grid = OccupancyGrid(blocked)
    cfg = SamplingConfig(102, corridor_half_width=5.0, delta=3.0, seed=0)
    vs = sample_stratified(grid, cfg, (1.5, 50.5), (198.5, 50.5))
    assert len(vs) == 102
    assert vs.fallbacks  # some corridor quota was re-drawn globally
    assert sum(vs.fallbacks.values()) + vs.provenance.count(CORE) + vs.provenance.count(BOUNDARY) == 70
    assert all(is_free(grid, p) for p in vs.vertices)


def test_sampling_config_validation():
    with pytest.raises(ValueError):
        SamplingConfig(1)
    with pytest.raises(ValueError):
        SamplingConfig(10, core_fraction=1.5)
    with pytest.raises(ValueError):
        SamplingConfig(10, delta=0.0)
