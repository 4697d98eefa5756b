import numpy as np
import pytest

from fdbeam import (ArrayGeometry, ChannelError, DirectionGrid, FarFieldRays,
                    Rayleigh, RicianMixture, SphericalNearField, array_response,
                    draw_channel, draw_error, draw_rayleigh, draw_user_channel,
                    farfield_channel, make_rng, rician_mixture,
                    spherical_channel, worst_case_error)

from conftest import cn


class TestRayleigh:
    def test_deterministic_given_seed(self):
        h1 = draw_rayleigh(4, 4, make_rng(99, 0))
        h2 = draw_rayleigh(4, 4, make_rng(99, 0))
        assert np.array_equal(h1, h2)

    def test_distinct_streams_differ(self):
        h1 = draw_rayleigh(4, 4, make_rng(99, 0))
        h2 = draw_rayleigh(4, 4, make_rng(99, 1))
        assert not np.allclose(h1, h2)

    def test_mean_energy(self):
        rng = make_rng(5, 0)
        vals = [np.linalg.norm(draw_rayleigh(8, 8, rng)) ** 2 / 64.0
                for _ in range(2000)]
        assert abs(np.mean(vals) - 1.0) < 0.05

    def test_single_entry_energy(self):
        rng = make_rng(6, 0)
        h = draw_rayleigh(1, 1, rng)
        vals = np.abs((rng.standard_normal(100000) + 1j * rng.standard_normal(100000))
                      / np.sqrt(2)) ** 2
        assert abs(np.mean(vals) - 1.0) < 0.02
        assert h.shape == (1, 1)

    def test_invalid_dims(self):
        with pytest.raises(ValueError):
            draw_rayleigh(0, 4, make_rng(0))


class TestSpherical:
    def test_single_elements(self):
        g = ArrayGeometry(1, 1)
        d = 7.25
        h = spherical_channel(g, g, d)
        assert h.shape == (1, 1)
        assert np.isclose(abs(h[0, 0]), 1.0)
        assert np.isclose(np.angle(h[0, 0]), np.angle(np.exp(-2j * np.pi * d)))

    def test_frobenius_normalization(self, upa8):
        h = spherical_channel(upa8, upa8, 10.0)
        assert abs(np.linalg.norm(h) ** 2 - 4096.0) <= 1e-9 * 4096.0

    def test_swap_roles_gives_index_permuted_transpose(self, upa8):
        # exchanging the two (mirror-symmetric) arrays reproduces the same
        # channel up to transposition and the y-mirror column permutation
        def y_mirror(g):
            idx = np.arange(g.n_elements).reshape(g.rows, g.cols)
            return idx[:, ::-1].ravel()

        g2 = ArrayGeometry(4, 8)
        h12 = spherical_channel(upa8, g2, 10.0)
        h21 = spherical_channel(g2, upa8, 10.0)
        permuted = h21.T[np.ix_(y_mirror(g2), y_mirror(upa8))]
        assert np.allclose(h12, permuted)

    def test_zero_separation_errors(self):
        g = ArrayGeometry(2, 2)
        with pytest.raises(ValueError):
            spherical_channel(g, g, 0.0)
        with pytest.raises(ValueError):
            SphericalNearField(separation_wavelengths=-1.0)


class TestFarField:
    def test_rank_one_single_ray(self):
        g = ArrayGeometry(4, 4)
        h = farfield_channel(g, g, 1, make_rng(7, 0))
        assert np.linalg.matrix_rank(h, tol=1e-9) == 1

    def test_normalized_per_realization(self):
        g = ArrayGeometry(4, 4)
        h = farfield_channel(g, g, 1, make_rng(7, 1))
        assert abs(np.linalg.norm(h) ** 2 - 256.0) <= 1e-9 * 256.0

    def test_rank_bounded_by_rays(self):
        g = ArrayGeometry(4, 4)
        h = farfield_channel(g, g, 5, make_rng(7, 2))
        assert np.linalg.matrix_rank(h, tol=1e-9) <= 5

    def test_ray_count_range_draw(self):
        g = ArrayGeometry(2, 2)
        counts = {np.linalg.matrix_rank(farfield_channel(g, g, (1, 3), make_rng(8, i)), tol=1e-9)
                  for i in range(30)}
        assert counts <= {1, 2, 3}
        assert len(counts) > 1


class TestRician:
    def test_kappa_large_is_near_field(self, upa8):
        h_nf = spherical_channel(upa8, upa8, 10.0)
        h_ff = farfield_channel(upa8, upa8, 3, make_rng(9, 0))
        h = rician_mixture(h_nf, h_ff, 1e12)
        assert np.max(np.abs(h - h_nf)) < 1e-5

    def test_kappa_zero_is_far_field(self, upa8):
        h_nf = spherical_channel(upa8, upa8, 10.0)
        h_ff = farfield_channel(upa8, upa8, 3, make_rng(9, 1))
        assert np.array_equal(rician_mixture(h_nf, h_ff, 0.0), h_ff)

    def test_unit_kappa_mean_energy(self):
        g = ArrayGeometry(2, 4)
        h_nf = spherical_channel(g, g, 10.0)
        target = 64.0
        vals = []
        for i in range(500):
            h_ff = farfield_channel(g, g, (1, 15), make_rng(10, i))
            h = rician_mixture(h_nf, h_ff, 1.0)
            e = np.linalg.norm(h) ** 2
            assert 0.0 <= e <= 4.0 * target
            vals.append(e)
        assert abs(np.mean(vals) - target) < 0.1 * target

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            rician_mixture(np.ones((2, 2)), np.ones((2, 3)), 1.0)

    def test_model_dispatch(self, upa8):
        for model in (Rayleigh(), SphericalNearField(), FarFieldRays(n_rays=2),
                      RicianMixture(kappa=2.0)):
            h = draw_channel(model, upa8, upa8, make_rng(11, 0))
            assert h.shape == (64, 64)


class TestChannelError:
    def test_zero_epsilon(self):
        assert np.all(draw_error(4, 4, 0.0, make_rng(12, 0)) == 0.0)

    def test_exact_frobenius_radius(self):
        for eps in (0.01, 0.1, 1.0, 3.0):
            d = draw_error(6, 5, eps, make_rng(12, 1))
            assert abs(np.linalg.norm(d) - eps) <= 1e-12 * eps

    def test_perturbed_channel_energy(self):
        nr, nt, eps = 4, 6, 0.2
        h = draw_rayleigh(nr, nt, make_rng(13, 0))
        d = draw_error(nr, nt, eps, make_rng(13, 1))
        h_bar = h + np.sqrt(nt * nr) * d
        assert np.isclose(np.linalg.norm(h_bar - h) ** 2, eps ** 2 * nt * nr)

    def test_role_validation(self):
        assert ChannelError(0.1, "train").role == "train"
        with pytest.raises(ValueError):
            ChannelError(-0.1)
        with pytest.raises(ValueError):
            ChannelError(0.1, "other")


class TestWorstCaseError:
    def test_identity_codebooks(self):
        eye = np.eye(3, dtype=complex)
        d = worst_case_error(eye, eye, 0.5)
        assert np.isclose(np.linalg.norm(eye.conj().T @ d @ eye), 0.5)

    def test_achieves_cross_term_exactly(self):
        rng = np.random.default_rng(20)
        for _ in range(20):
            w = cn(rng, 8, 8)
            f = cn(rng, 8, 8)
            eps = rng.uniform(0.01, 2.0)
            d = worst_case_error(f, w, eps)
            achieved = np.linalg.norm(w.conj().T @ d @ f)
            target = eps * (np.linalg.svd(w, compute_uv=False)[0]
                            * np.linalg.svd(f, compute_uv=False)[0])
            assert abs(achieved - target) <= 1e-9 * target

    def test_zero_epsilon_zero_matrix(self):
        rng = np.random.default_rng(21)
        d = worst_case_error(cn(rng, 3, 2), cn(rng, 4, 2), 0.0)
        assert np.all(d == 0.0)

    def test_degenerate_inputs_error(self):
        with pytest.raises(ValueError):
            worst_case_error(np.zeros((3, 2)), np.ones((3, 2)), 0.1)

    def test_upper_bound_never_violated(self):
        rng = np.random.default_rng(22)
        for _ in range(200):
            nr, nt, m = 4, 3, 3
            w, h, f = cn(rng, nr, m), cn(rng, nr, nt), cn(rng, nt, m)
            base = np.linalg.norm(w.conj().T @ h @ f)
            sw = np.linalg.svd(w, compute_uv=False)[0]
            sf = np.linalg.svd(f, compute_uv=False)[0]
            for _ in range(20):
                eps = rng.uniform(0, 1.5)
                d = draw_error(nr, nt, eps * rng.uniform(0, 1), rng)
                lhs = np.linalg.norm(w.conj().T @ (h + np.sqrt(nt * nr) * d) @ f)
                bound = base + eps * np.sqrt(nt * nr) * sw * sf
                assert lhs <= bound + 1e-9 * (1 + bound)


class TestUserChannel:
    def test_norm_matches_gain(self, upa8, default_grid):
        u = draw_user_channel(upa8, default_grid, make_rng(30, 0))
        assert np.isclose(np.linalg.norm(u.entries) ** 2, abs(u.gain) ** 2 * 64.0)

    def test_unit_gain_is_steering_vector(self, upa8, default_grid):
        u = draw_user_channel(upa8, default_grid, make_rng(30, 1))
        a = array_response(upa8, u.direction)
        assert np.allclose(u.entries / u.gain, a)

    def test_azimuth_uniform(self, upa8, default_grid):
        rng = make_rng(31, 0)
        azs = np.sort([draw_user_channel(upa8, default_grid, rng).direction.azimuth
                       for _ in range(10000)])
        lo, hi = np.radians(-60), np.radians(60)
        ecdf = (np.arange(1, azs.size + 1)) / azs.size
        uniform = (azs - lo) / (hi - lo)
        ks = np.max(np.abs(ecdf - uniform))
        assert ks < 0.02

    def test_degenerate_grid(self, upa8):
        grid = DirectionGrid.from_degrees(5, 5, 1, -10, -10, 1)
        u = draw_user_channel(upa8, grid, make_rng(31, 1))
        assert np.isclose(u.direction.azimuth, np.radians(5))
        assert np.isclose(u.direction.elevation, np.radians(-10))
