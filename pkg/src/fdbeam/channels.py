"""Self-interference channel models, bounded channel errors, user channels.

Four SI channel models are provided; all are normalized so that the
channel energy satisfies ``E||H||_F^2 = Nt * Nr`` (spherical and
far-field per realization, Rayleigh and the Rician mixture in
expectation), so only spatial structure differentiates them.

Channel-estimation error enters as ``H + sqrt(Nt*Nr) * D`` with
``||D||_F <= eps``; ``draw_error`` samples isotropically on the sphere
``||D||_F = eps`` and ``worst_case_error`` builds the rank-one error
that maximizes the coupling cross term.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import ArrayGeometry, Direction, DirectionGrid, array_response, element_positions

__all__ = [
    "Rayleigh",
    "SphericalNearField",
    "FarFieldRays",
    "RicianMixture",
    "ChannelError",
    "UserChannel",
    "make_rng",
    "draw_rayleigh",
    "spherical_channel",
    "farfield_channel",
    "rician_mixture",
    "draw_channel",
    "draw_error",
    "worst_case_error",
    "draw_user_channel",
]


@dataclass(frozen=True)
class Rayleigh:
    """I.i.d. CN(0,1) entries; unit mean energy per entry."""

    kind: str = field(default="rayleigh", init=False)


@dataclass(frozen=True)
class SphericalNearField:
    """Deterministic spherical-wave coupling between the two arrays."""

    separation_wavelengths: float = 10.0
    kind: str = field(default="spherical", init=False)

    def __post_init__(self) -> None:
        if self.separation_wavelengths <= 0:
            raise ValueError("separation must be positive")


@dataclass(frozen=True)
class FarFieldRays:
    """Sum of random plane-wave reflections; ``n_rays`` fixed or (lo, hi)."""

    n_rays: int | tuple[int, int] = (1, 15)
    kind: str = field(default="farfield", init=False)

    def __post_init__(self) -> None:
        lo = self.n_rays if isinstance(self.n_rays, int) else self.n_rays[0]
        if lo < 1:
            raise ValueError("n_rays must be >= 1")


@dataclass(frozen=True)
class RicianMixture:
    """Near-field/far-field mixture weighted by the Rician factor kappa."""

    kappa: float
    nf: SphericalNearField = SphericalNearField()
    ff: FarFieldRays = FarFieldRays()
    kind: str = field(default="rician", init=False)

    def __post_init__(self) -> None:
        if self.kappa < 0:
            raise ValueError("kappa must be nonnegative")


@dataclass(frozen=True)
class ChannelError:
    """Frobenius error bound; ``role`` separates design-time from eval-time."""

    epsilon: float
    role: str = "eval"  # train | eval

    def __post_init__(self) -> None:
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.role not in ("train", "eval"):
            raise ValueError(f"unknown role {self.role!r}")


@dataclass(frozen=True)
class UserChannel:
    """LOS user channel: complex gain times the array response."""

    entries: np.ndarray = field(repr=False)
    direction: Direction = Direction(0.0, 0.0)
    gain: complex = 1.0 + 0.0j


def make_rng(master_seed: int, *stream: int) -> np.random.Generator:
    """One generator per (master seed, stream indices) tuple.

    PCG64 seeded through SeedSequence spawn keys: bit-reproducible within
    a build, and distinct streams are independent, so trials can run in
    parallel with sequential-identical results.
    """
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=tuple(stream)))


def _cn01(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def draw_rayleigh(nr: int, nt: int, rng: np.random.Generator) -> np.ndarray:
    """I.i.d. CN(0,1) matrix; normalized in expectation, not per draw."""
    if nr < 1 or nt < 1:
        raise ValueError("dimensions must be >= 1")
    return _cn01(rng, (nr, nt))


def spherical_channel(tx_geom: ArrayGeometry, rx_geom: ArrayGeometry,
                      separation_wavelengths: float = 10.0) -> np.ndarray:
    """Spherical-wave channel, ``||H||_F^2 = Nt*Nr`` exactly.

    The receive array origin is offset by the separation along +y from
    the transmit array (both remain y-z planar, no rotation).
    """
    tx_pos = element_positions(tx_geom)
    rx_pos = element_positions(rx_geom) + np.array([0.0, separation_wavelengths, 0.0])
    # r[m, n] = distance between tx element n and rx element m, wavelengths
    diff = rx_pos[:, None, :] - tx_pos[None, :, :]
    r = np.linalg.norm(diff, axis=2)
    if np.any(r <= 0.0):
        raise ValueError("coincident tx/rx elements (zero separation)")
    h = np.exp(-2j * np.pi * r) / r
    gamma = np.sqrt(tx_geom.n_elements * rx_geom.n_elements) / np.linalg.norm(h)
    return gamma * h


def farfield_channel(tx_geom: ArrayGeometry, rx_geom: ArrayGeometry,
                     n_rays, rng: np.random.Generator) -> np.ndarray:
    """Random plane-wave reflections, normalized per realization.

    Ray gains are CN(0,1); each ray's AoD/AoA azimuth and elevation are
    drawn independently from U(-pi/2, pi/2).
    """
    if isinstance(n_rays, tuple):
        n_rays = int(rng.integers(n_rays[0], n_rays[1] + 1))
    if n_rays < 1:
        raise ValueError("n_rays must be >= 1")
    nr, nt = rx_geom.n_elements, tx_geom.n_elements
    h = np.zeros((nr, nt), dtype=complex)
    for _ in range(n_rays):
        beta = complex(_cn01(rng, ()))
        aoa = Direction(*rng.uniform(-np.pi / 2, np.pi / 2, size=2))
        aod = Direction(*rng.uniform(-np.pi / 2, np.pi / 2, size=2))
        h += beta * np.outer(array_response(rx_geom, aoa),
                             array_response(tx_geom, aod).conj())
    h *= np.sqrt(1.0 / n_rays)
    return h * (np.sqrt(nt * nr) / np.linalg.norm(h))


def rician_mixture(h_nf: np.ndarray, h_ff: np.ndarray, kappa: float) -> np.ndarray:
    """Mix two individually normalized components; no re-normalization."""
    if h_nf.shape != h_ff.shape:
        raise ValueError("component shapes differ")
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    return (np.sqrt(kappa / (kappa + 1.0)) * h_nf
            + np.sqrt(1.0 / (kappa + 1.0)) * h_ff)


def draw_channel(model, tx_geom: ArrayGeometry, rx_geom: ArrayGeometry,
                 rng: np.random.Generator) -> np.ndarray:
    """Draw one SI channel realization from any of the four models."""
    if isinstance(model, Rayleigh):
        return draw_rayleigh(rx_geom.n_elements, tx_geom.n_elements, rng)
    if isinstance(model, SphericalNearField):
        return spherical_channel(tx_geom, rx_geom, model.separation_wavelengths)
    if isinstance(model, FarFieldRays):
        return farfield_channel(tx_geom, rx_geom, model.n_rays, rng)
    if isinstance(model, RicianMixture):
        h_nf = spherical_channel(tx_geom, rx_geom, model.nf.separation_wavelengths)
        h_ff = farfield_channel(tx_geom, rx_geom, model.ff.n_rays, rng)
        return rician_mixture(h_nf, h_ff, model.kappa)
    raise TypeError(f"unknown channel model {model!r}")


def draw_error(nr: int, nt: int, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    """Isotropic error on the Frobenius sphere ``||D||_F = epsilon``.

    The perturbed channel is ``H + sqrt(Nt*Nr) * D``.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    g = _cn01(rng, (nr, nt))
    if epsilon == 0.0:
        return np.zeros((nr, nt), dtype=complex)
    return epsilon * g / np.linalg.norm(g)


def worst_case_error(f_mat: np.ndarray, w_mat: np.ndarray, epsilon: float) -> np.ndarray:
    """Rank-one error achieving ``||W* D F||_F = eps * smax(W) * smax(F)``.

    ``u`` is the top left singular vector of W (receive-antenna space),
    ``v`` the top left singular vector of F (transmit-antenna space).
    """
    if np.linalg.norm(f_mat) == 0.0 or np.linalg.norm(w_mat) == 0.0:
        raise ValueError("degenerate (zero) codebook matrix")
    u_w, _, _ = np.linalg.svd(w_mat, full_matrices=False)
    u_f, _, _ = np.linalg.svd(f_mat, full_matrices=False)
    return epsilon * np.outer(u_w[:, 0], u_f[:, 0].conj())


def draw_user_channel(geometry: ArrayGeometry, grid: DirectionGrid,
                      rng: np.random.Generator) -> UserChannel:
    """LOS user drawn uniformly over the continuous az/el extents."""
    az = rng.uniform(grid.az_start, grid.az_stop) if grid.az_stop > grid.az_start else grid.az_start
    el = rng.uniform(grid.el_start, grid.el_stop) if grid.el_stop > grid.el_start else grid.el_start
    direction = Direction(az, el)
    gain = complex(_cn01(rng, ()))
    return UserChannel(entries=gain * array_response(geometry, direction),
                       direction=direction, gain=gain)
