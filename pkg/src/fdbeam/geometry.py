"""Planar array layouts, array response vectors, and direction grids.

Conventions used throughout the package:

* Arrays are uniform planar arrays lying in the y-z plane with broadside
  along +x.  Element positions are centered so the array centroid sits at
  the geometry origin, which makes the broadside response the all-ones
  vector (any global phase is irrelevant to the metrics downstream).
* The response phase of an element at position ``p`` (in carrier
  wavelengths) toward direction ``u`` is ``exp(+j 2 pi <p, u>)`` with
  ``u = (cos el cos az, cos el sin az, sin el)``.
* Angles are radians internally; degrees appear only at CLI/config
  boundaries.
* Direction grids enumerate elevation-major (elevation is the outer
  loop), azimuth ascending, so codebook indexing is deterministic.

Every response vector has squared norm exactly equal to the element
count, since all entries are unit modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Direction",
    "ArrayGeometry",
    "DirectionGrid",
    "SteeringMatrix",
    "element_positions",
    "array_response",
    "coverage_grid",
    "dense_eval_grid",
    "steering_matrix",
]


@dataclass(frozen=True)
class Direction:
    """A steering direction in azimuth/elevation, radians."""

    azimuth: float
    elevation: float

    def __post_init__(self) -> None:
        if not -math.pi - 1e-12 <= self.azimuth <= math.pi + 1e-12:
            raise ValueError(f"azimuth {self.azimuth} outside [-pi, pi]")
        if not -math.pi / 2 - 1e-12 <= self.elevation <= math.pi / 2 + 1e-12:
            raise ValueError(f"elevation {self.elevation} outside [-pi/2, pi/2]")

    def unit_vector(self) -> np.ndarray:
        """Unit propagation vector (x toward broadside)."""
        ca, sa = math.cos(self.azimuth), math.sin(self.azimuth)
        ce, se = math.cos(self.elevation), math.sin(self.elevation)
        return np.array([ce * ca, ce * sa, se])


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform planar array: ``rows`` along z, ``cols`` along y.

    ``spacing`` is the element pitch in carrier wavelengths and ``origin``
    an optional offset (also wavelengths) used when placing two arrays
    relative to each other.
    """

    rows: int
    cols: int
    spacing: float = 0.5
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be positive")
        if self.spacing <= 0:
            raise ValueError("spacing must be positive")

    @property
    def n_elements(self) -> int:
        return self.rows * self.cols


def element_positions(geometry: ArrayGeometry) -> np.ndarray:
    """(N, 3) element positions in wavelengths, centroid at ``origin``.

    Element index is row-major: ``n = row * cols + col``.
    """
    rows = np.arange(geometry.rows) - (geometry.rows - 1) / 2.0
    cols = np.arange(geometry.cols) - (geometry.cols - 1) / 2.0
    zz, yy = np.meshgrid(rows, cols, indexing="ij")
    pos = np.zeros((geometry.n_elements, 3))
    pos[:, 1] = geometry.spacing * yy.ravel()
    pos[:, 2] = geometry.spacing * zz.ravel()
    return pos + np.asarray(geometry.origin)


def array_response(geometry: ArrayGeometry, direction: Direction) -> np.ndarray:
    """Complex array response ``a`` with ``||a||^2 == N`` exactly."""
    phase = element_positions(geometry) @ direction.unit_vector()
    return np.exp(2j * np.pi * phase)


@dataclass(frozen=True)
class DirectionGrid:
    """Inclusive az/el extents plus step sizes, radians."""

    az_start: float
    az_stop: float
    az_step: float
    el_start: float
    el_stop: float
    el_step: float

    @staticmethod
    def from_degrees(az_start: float, az_stop: float, az_step: float,
                     el_start: float, el_stop: float, el_step: float) -> "DirectionGrid":
        return DirectionGrid(*(math.radians(v) for v in
                               (az_start, az_stop, az_step, el_start, el_stop, el_step)))


def _axis_points(start: float, stop: float, step: float, name: str) -> np.ndarray:
    if stop < start:
        raise ValueError(f"{name}: stop < start")
    span = stop - start
    if span == 0.0:
        return np.array([start])
    if step <= 0:
        raise ValueError(f"{name}: step must be positive for a non-degenerate range")
    count = span / step
    if abs(count - round(count)) > 1e-9:
        raise ValueError(f"{name}: step {step} does not evenly tile [{start}, {stop}]")
    n = int(round(count)) + 1
    return start + step * np.arange(n)


def coverage_grid(grid: DirectionGrid) -> list[Direction]:
    """Enumerate the grid elevation-major, azimuth ascending."""
    azs = _axis_points(grid.az_start, grid.az_stop, grid.az_step, "azimuth")
    els = _axis_points(grid.el_start, grid.el_stop, grid.el_step, "elevation")
    return [Direction(az, el) for el in els for az in azs]


def dense_eval_grid(grid: DirectionGrid, n_az: int, n_el: int) -> list[Direction]:
    """Uniform n_az x n_el grid spanning the same extents, endpoints inclusive."""
    if n_az < 2 or n_el < 2:
        raise ValueError("n_az and n_el must be >= 2")
    azs = np.linspace(grid.az_start, grid.az_stop, n_az)
    els = np.linspace(grid.el_start, grid.el_stop, n_el)
    return [Direction(az, el) for el in els for az in azs]


@dataclass(frozen=True)
class SteeringMatrix:
    """N x M stack of array response vectors with their directions."""

    entries: np.ndarray = field(repr=False)
    directions: tuple[Direction, ...]

    def __post_init__(self) -> None:
        if self.entries.ndim != 2 or self.entries.shape[1] != len(self.directions):
            raise ValueError("entries must be N x M with one column per direction")


def steering_matrix(geometry: ArrayGeometry, directions) -> SteeringMatrix:
    """Column i is ``array_response(geometry, directions[i])``, bit for bit."""
    directions = tuple(directions)
    n = geometry.n_elements
    entries = np.empty((n, len(directions)), dtype=complex)
    for i, d in enumerate(directions):
        entries[:, i] = array_response(geometry, d)
    return SteeringMatrix(entries=entries, directions=directions)
