import numpy as np
import pytest

from fdbeam import ArrayGeometry, DirectionGrid, coverage_grid


@pytest.fixture
def upa8() -> ArrayGeometry:
    return ArrayGeometry(8, 8)


@pytest.fixture
def default_grid() -> DirectionGrid:
    return DirectionGrid.from_degrees(-60, 60, 15, -30, 30, 15)


@pytest.fixture
def default_dirs(default_grid):
    return coverage_grid(default_grid)


def cn(rng: np.random.Generator, *shape):
    """Standard complex Gaussian test helper (scalar when no shape given)."""
    out = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return complex(out) if not shape else out
