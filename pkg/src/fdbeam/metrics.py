"""Coupling, coverage, pattern cuts, and link-level rate metrics.

All dB conversions use the power convention ``10 log10`` on power
quantities (coupling E, squared gains, SNR, INR).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .codebooks import Codebook, to_matrix
from .geometry import ArrayGeometry, Direction, array_response, steering_matrix
from .quantization import QuantizedBeam, realize

__all__ = [
    "CouplingReport",
    "CoverageReport",
    "LinkBudget",
    "RateReport",
    "Cut",
    "average_coupling",
    "coverage",
    "pattern_cut",
    "check_coverage_constraint",
    "rate_tx",
    "rate_rx",
    "capacities",
    "to_db",
]


def to_db(x: float) -> float:
    """Power dB; -inf for zero."""
    return 10.0 * math.log10(x) if x > 0 else -math.inf


@dataclass(frozen=True)
class CouplingReport:
    """Average squared coupling over all beam pairs, plus the pair map."""

    E: float
    E_db: float
    pair_matrix: np.ndarray = field(repr=False)  # Mrx x Mtx of |w_j* H f_i|^2


@dataclass(frozen=True)
class CoverageReport:
    """Best-beam power gain over a dense direction grid."""

    directions: tuple[Direction, ...]
    gains: np.ndarray = field(repr=False)
    cdf: np.ndarray = field(repr=False)  # sorted gains
    median_db: float = -math.inf


@dataclass(frozen=True)
class LinkBudget:
    """Linear SNRs and INR, all referenced to no beamforming."""

    snr_tx: float
    snr_rx: float
    inr: float

    def __post_init__(self) -> None:
        if self.snr_tx < 0 or self.snr_rx < 0 or self.inr < 0:
            raise ValueError("link ratios must be nonnegative")


@dataclass(frozen=True)
class RateReport:
    r_tx: float
    r_rx: float
    sum: float
    c_fd: float
    c_hd: float


def _codebook_matrix(cb) -> np.ndarray:
    return to_matrix(cb) if isinstance(cb, Codebook) else np.asarray(cb, dtype=complex)


def average_coupling(w_mat, h: np.ndarray, f_mat) -> CouplingReport:
    """E = ||W* H F||_F^2 / (Mtx * Mrx); accepts matrices or Codebooks."""
    w = _codebook_matrix(w_mat)
    f = _codebook_matrix(f_mat)
    h = np.asarray(h, dtype=complex)
    if h.shape != (w.shape[0], f.shape[0]):
        raise ValueError(f"channel shape {h.shape} does not conform to "
                         f"W {w.shape} and F {f.shape}")
    pair = np.abs(w.conj().T @ h @ f) ** 2
    e = float(np.mean(pair))
    return CouplingReport(E=e, E_db=to_db(e), pair_matrix=pair)


def coverage(codebook: Codebook, dense_grid) -> CoverageReport:
    """Per-direction max power gain over the codebook's beams."""
    directions = tuple(dense_grid)
    a = steering_matrix(codebook.geometry, directions).entries  # N x D
    f = to_matrix(codebook)                                     # N x M
    gains = np.max(np.abs(a.conj().T @ f) ** 2, axis=1)
    cdf = np.sort(gains)
    return CoverageReport(directions=directions, gains=gains, cdf=cdf,
                          median_db=to_db(float(np.median(gains))))


@dataclass(frozen=True)
class Cut:
    """A pattern cut: sweep one angle, hold the other fixed (radians)."""

    kind: str  # azimuth | elevation
    fixed: float = 0.0
    start: float = -math.pi / 2
    stop: float = math.pi / 2

    def __post_init__(self) -> None:
        if self.kind not in ("azimuth", "elevation"):
            raise ValueError(f"unknown cut kind {self.kind!r}")


def pattern_cut(beam, geometry: ArrayGeometry, cut: Cut,
                n_points: int = 361) -> tuple[np.ndarray, np.ndarray]:
    """Power gain versus angle along the cut; returns (angles, gains)."""
    f = realize(beam) if isinstance(beam, QuantizedBeam) else np.asarray(beam, dtype=complex)
    angles = np.linspace(cut.start, cut.stop, n_points)
    gains = np.empty(n_points)
    for i, ang in enumerate(angles):
        d = Direction(ang, cut.fixed) if cut.kind == "azimuth" else Direction(cut.fixed, ang)
        gains[i] = abs(np.vdot(array_response(geometry, d), f)) ** 2
    return angles, gains


def check_coverage_constraint(codebook: Codebook, g_tgt: float, sigma_sq: float) -> float:
    """Aggregate coverage residual: lhs - rhs (feasible iff <= 0)."""
    a = steering_matrix(codebook.geometry, codebook.directions).entries
    f = to_matrix(codebook)
    diag = np.einsum("nm,nm->m", a.conj(), f)
    lhs = float(np.sum(np.abs(g_tgt - diag) ** 2))
    return lhs - sigma_sq * g_tgt ** 2 * codebook.size


def rate_tx(budget: LinkBudget, h_tx: np.ndarray, f: np.ndarray, nt: int) -> float:
    """Downlink spectral efficiency; 1/Nt accounts for power splitting."""
    gain = abs(np.vdot(h_tx, f)) ** 2
    return math.log2(1.0 + budget.snr_tx / nt * gain)


def rate_rx(budget: LinkBudget, h_rx: np.ndarray, w: np.ndarray,
            h_si: np.ndarray, f: np.ndarray) -> float:
    """Uplink spectral efficiency with self-interference in the noise term."""
    signal = budget.snr_rx * abs(np.vdot(w, h_rx)) ** 2
    wnorm = float(np.vdot(w, w).real)
    si = budget.inr * abs(np.vdot(w, h_si @ f)) ** 2
    denom = wnorm + si
    if denom == 0.0:
        return 0.0
    return math.log2(1.0 + signal / denom)


def capacities(budget: LinkBudget, h_tx: np.ndarray, h_rx: np.ndarray,
               nt: int) -> tuple[float, float]:
    """Full-duplex capacity bound (per-entry-bounded beams) and its TDD half.

    Transmit side: equal-gain phase matching achieves ||h||_1 under the
    unit-magnitude weight budget; receive side: matched filtering gives
    ||h||_2^2.
    """
    tx_term = math.log2(1.0 + budget.snr_tx / nt * float(np.sum(np.abs(h_tx))) ** 2)
    rx_term = math.log2(1.0 + budget.snr_rx * float(np.vdot(h_rx, h_rx).real))
    c_fd = tx_term + rx_term
    return c_fd, 0.5 * c_fd
