import numpy as np
import pytest

from astarprm.grid_map import OccupancyGrid, generate_warehouse

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_grid(rng: np.random.Generator, width: int, height: int, p_blocked: float) -> OccupancyGrid:
    return OccupancyGrid(rng.random((height, width)) < p_blocked)


@pytest.fixture(scope="session")
def warehouse():
    """The documented benchmark map: 897x550, seed 7, 20% obstacles."""
    return generate_warehouse(897, 550, seed=7, obstacle_density=0.2)


@pytest.fixture(scope="session")
def small_warehouses():
    return [generate_warehouse(200, 150, seed=s, obstacle_density=0.2) for s in range(10)]
