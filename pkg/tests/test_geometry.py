import numpy as np
import pytest

from fdbeam import (ArrayGeometry, Direction, DirectionGrid, array_response,
                    coverage_grid, dense_eval_grid, element_positions,
                    steering_matrix)


class TestElementPositions:
    def test_single_element_at_origin(self):
        pos = element_positions(ArrayGeometry(1, 1))
        assert pos.shape == (1, 3)
        assert np.allclose(pos, 0.0)

    def test_two_elements_symmetric(self):
        pos = element_positions(ArrayGeometry(1, 2, spacing=0.5))
        assert np.allclose(pos[0], [0.0, -0.25, 0.0])
        assert np.allclose(pos[1], [0.0, +0.25, 0.0])

    def test_centroid_at_origin_8x8(self):
        pos = element_positions(ArrayGeometry(8, 8))
        assert pos.shape == (64, 3)
        assert np.all(np.abs(pos.mean(axis=0)) <= 1e-12)

    def test_origin_offset(self):
        pos = element_positions(ArrayGeometry(2, 2, origin=(1.0, 2.0, 3.0)))
        assert np.allclose(pos.mean(axis=0), [1.0, 2.0, 3.0])

    def test_invalid_geometry(self):
        with pytest.raises(ValueError):
            ArrayGeometry(0, 4)
        with pytest.raises(ValueError):
            ArrayGeometry(4, 4, spacing=0.0)


class TestArrayResponse:
    def test_broadside_all_ones(self):
        a = array_response(ArrayGeometry(4, 4), Direction(0.0, 0.0))
        assert np.allclose(a, 1.0)

    def test_two_element_30deg(self):
        # phase difference pi * sin(30 deg) = pi/2 split symmetrically
        a = array_response(ArrayGeometry(1, 2, spacing=0.5),
                           Direction(np.pi / 6, 0.0))
        assert np.allclose(a[0], np.exp(-1j * np.pi / 4))
        assert np.allclose(a[1], np.exp(+1j * np.pi / 4))

    def test_norm_is_element_count(self, upa8):
        rng = np.random.default_rng(1)
        d = Direction(rng.uniform(-np.pi, np.pi), rng.uniform(-np.pi / 2, np.pi / 2))
        a = array_response(upa8, d)
        assert abs(np.vdot(a, a).real - 64.0) <= 1e-9 * 64.0

    def test_norm_many_random_directions_and_geometries(self):
        rng = np.random.default_rng(2)
        for _ in range(2000):
            g = ArrayGeometry(int(rng.integers(1, 7)), int(rng.integers(1, 7)),
                              spacing=float(rng.uniform(0.1, 1.5)))
            d = Direction(rng.uniform(-np.pi, np.pi), rng.uniform(-np.pi / 2, np.pi / 2))
            a = array_response(g, d)
            n = g.n_elements
            assert abs(np.vdot(a, a).real - n) <= 1e-9 * n

    def test_continuity(self, upa8):
        d0 = Direction(0.4, -0.2)
        d1 = Direction(0.4 + 1e-6, -0.2)
        diff = np.max(np.abs(array_response(upa8, d0) - array_response(upa8, d1)))
        assert diff < 1e-4

    def test_conjugate_symmetry_via_mirrored_positions(self, upa8):
        # centered layout: mirroring positions through the origin reverses
        # the element order, so conj(a) equals the reversed response
        d = Direction(0.7, 0.3)
        a = array_response(upa8, d)
        assert np.allclose(np.conj(a), a[::-1], atol=1e-12)

    def test_direction_validation(self):
        with pytest.raises(ValueError):
            Direction(4.0, 0.0)
        with pytest.raises(ValueError):
            Direction(0.0, 2.0)


class TestCoverageGrid:
    def test_default_region_45_directions(self, default_grid):
        dirs = coverage_grid(default_grid)
        assert len(dirs) == 45

    def test_elevation_major_order(self, default_grid):
        dirs = coverage_grid(default_grid)
        # first 9 share the lowest elevation, azimuth ascending
        els = [d.elevation for d in dirs[:9]]
        azs = [d.azimuth for d in dirs[:9]]
        assert np.allclose(els, np.radians(-30))
        assert np.all(np.diff(azs) > 0)
        assert np.isclose(dirs[9].elevation, np.radians(-15))

    def test_degenerate_point(self):
        dirs = coverage_grid(DirectionGrid.from_degrees(0, 0, 1, 0, 0, 1))
        assert len(dirs) == 1
        assert dirs[0].azimuth == 0.0 and dirs[0].elevation == 0.0

    def test_non_dividing_step_errors(self):
        with pytest.raises(ValueError):
            coverage_grid(DirectionGrid.from_degrees(-60, 60, 7, -30, 30, 15))


class TestDenseEvalGrid:
    def test_corners(self, default_grid):
        dirs = dense_eval_grid(default_grid, 2, 2)
        assert len(dirs) == 4
        azs = sorted(d.azimuth for d in dirs)
        assert np.allclose([azs[0], azs[-1]], np.radians([-60, 60]))

    def test_one_degree_pitch(self, default_grid):
        assert len(dense_eval_grid(default_grid, 121, 61)) == 7381

    def test_collapsed_region(self):
        grid = DirectionGrid.from_degrees(10, 10, 1, 5, 5, 1)
        dirs = dense_eval_grid(grid, 3, 3)
        assert len(dirs) == 9
        assert all(np.isclose(d.azimuth, np.radians(10)) for d in dirs)

    def test_minimum_counts(self, default_grid):
        with pytest.raises(ValueError):
            dense_eval_grid(default_grid, 1, 5)


class TestSteeringMatrix:
    def test_single_direction(self, upa8):
        d = Direction(0.1, 0.2)
        sm = steering_matrix(upa8, [d])
        assert sm.entries.shape == (64, 1)
        assert np.array_equal(sm.entries[:, 0], array_response(upa8, d))

    def test_default_grid_norms(self, upa8, default_dirs):
        sm = steering_matrix(upa8, default_dirs)
        assert sm.entries.shape == (64, 45)
        norms = np.sum(np.abs(sm.entries) ** 2, axis=0)
        assert np.all(np.abs(norms - 64.0) <= 1e-9 * 64.0)

    def test_duplicate_directions_duplicate_columns(self, upa8):
        d = Direction(0.3, 0.0)
        sm = steering_matrix(upa8, [d, d])
        assert np.array_equal(sm.entries[:, 0], sm.entries[:, 1])

    def test_columns_bit_for_bit(self, upa8, default_dirs):
        sm = steering_matrix(upa8, default_dirs)
        for i in (0, 7, 22, 44):
            assert np.array_equal(sm.entries[:, i],
                                  array_response(upa8, default_dirs[i]))
