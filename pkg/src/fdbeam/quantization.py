"""Finite phase-shifter/attenuator grids and nearest-point projection.

A hardware-realizable beamforming weight is a phase level times an
amplitude level.  Phase levels are ``2 pi k / 2**b_phs``; amplitude
levels depend on the attenuator mode:

* ``log``: ``10**(-lsb_db * k / 20)`` — ``lsb_db`` is a *power* step, so
  the magnitude exponent divides by 20.
* ``linear``: level 0 is 1, then evenly spaced down to ``2**-b_amp``.
* ``none``: the single level 1 (constant-modulus beams, b_amp = 0).

Projection is exact: for any complex input the nearest grid point over
all phase x amplitude combinations is returned, computed in closed form
(nearest phase level to the input angle, then a 1-D search over at most
two amplitude-level candidates).  Ties break toward smaller amp_idx,
then smaller phase_idx.  Inputs with magnitude above 1 saturate at the
unit-magnitude level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "QuantizationSpec",
    "QuantizedWeight",
    "QuantizedBeam",
    "phase_levels",
    "amp_levels",
    "project_weight",
    "project_beam",
    "realize",
    "deepest_amp_level",
]

_MAX_ENUM_BITS = 22  # refuse to materialize level tables beyond ~4M entries


@dataclass(frozen=True)
class QuantizationSpec:
    """Resolution of the phase shifters and attenuators."""

    b_phs: int
    b_amp: int = 0
    lsb_db: float = 0.25
    amp_mode: str = "log"  # log | linear | none

    def __post_init__(self) -> None:
        if self.b_phs < 0 or self.b_amp < 0:
            raise ValueError("bit counts must be nonnegative")
        if self.lsb_db <= 0:
            raise ValueError("lsb_db must be positive")
        if self.amp_mode not in ("log", "linear", "none"):
            raise ValueError(f"unknown amp_mode {self.amp_mode!r}")

    @property
    def n_phase(self) -> int:
        return 2 ** self.b_phs

    @property
    def n_amp(self) -> int:
        return 1 if self.amp_mode == "none" else 2 ** self.b_amp


@dataclass(frozen=True)
class QuantizedWeight:
    phase_idx: int
    amp_idx: int


@dataclass(frozen=True)
class QuantizedBeam:
    """Per-entry grid indices for one beam, stored as arrays."""

    phase_idx: np.ndarray = field(repr=False)
    amp_idx: np.ndarray = field(repr=False)
    spec: QuantizationSpec = QuantizationSpec(b_phs=0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "phase_idx", np.asarray(self.phase_idx, dtype=np.int64))
        object.__setattr__(self, "amp_idx", np.asarray(self.amp_idx, dtype=np.int64))
        if self.phase_idx.shape != self.amp_idx.shape:
            raise ValueError("index arrays must have equal shape")
        if np.any(self.phase_idx < 0) or np.any(self.phase_idx >= self.spec.n_phase):
            raise ValueError("phase_idx out of range for spec")
        if np.any(self.amp_idx < 0) or np.any(self.amp_idx >= self.spec.n_amp):
            raise ValueError("amp_idx out of range for spec")

    def __len__(self) -> int:
        return self.phase_idx.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuantizedBeam):
            return NotImplemented
        return (self.spec == other.spec
                and np.array_equal(self.phase_idx, other.phase_idx)
                and np.array_equal(self.amp_idx, other.amp_idx))

    @property
    def weights(self) -> list[QuantizedWeight]:
        return [QuantizedWeight(int(p), int(a))
                for p, a in zip(self.phase_idx, self.amp_idx)]


def phase_levels(spec: QuantizationSpec) -> np.ndarray:
    """All phase levels in radians: ``2 pi k / 2**b_phs``."""
    if spec.b_phs > _MAX_ENUM_BITS:
        raise ValueError(f"refusing to enumerate 2**{spec.b_phs} phase levels")
    return 2.0 * np.pi * np.arange(spec.n_phase) / spec.n_phase


def amp_levels(spec: QuantizationSpec) -> np.ndarray:
    """All amplitude levels as linear magnitudes, strictly decreasing from 1."""
    if spec.amp_mode == "none":
        return np.array([1.0])
    if spec.b_amp > _MAX_ENUM_BITS:
        raise ValueError(f"refusing to enumerate 2**{spec.b_amp} amplitude levels")
    k = np.arange(spec.n_amp)
    return _amp_from_index(k, spec)


def _amp_from_index(k: np.ndarray, spec: QuantizationSpec) -> np.ndarray:
    if spec.amp_mode == "none":
        return np.ones_like(k, dtype=float)
    if spec.amp_mode == "log":
        return 10.0 ** (-spec.lsb_db * k / 20.0)
    # linear: 1 at k=0 down to 2**-b_amp at k = 2**b_amp - 1
    n = spec.n_amp
    if n == 1:
        return np.ones_like(k, dtype=float)
    c = (1.0 - 2.0 ** (-spec.b_amp)) / (n - 1)
    return 1.0 - c * k


def _nearest_phase_idx(angles: np.ndarray, spec: QuantizationSpec) -> np.ndarray:
    """Nearest phase level index, rounding half toward the smaller index."""
    n = spec.n_phase
    step = 2.0 * np.pi / n
    x = np.mod(angles, 2.0 * np.pi) / step
    k = np.ceil(x - 0.5).astype(np.int64)  # half-down: ties pick the lower level
    return np.mod(k, n)


def _nearest_amp_idx(target: np.ndarray, spec: QuantizationSpec) -> np.ndarray:
    """Index minimizing (level - target)^2; ties toward smaller index."""
    n = spec.n_amp
    if n == 1:
        return np.zeros_like(target, dtype=np.int64)
    if spec.amp_mode == "log":
        with np.errstate(divide="ignore"):
            cont = -20.0 * np.log10(np.maximum(target, 0.0)) / spec.lsb_db
        cont = np.where(np.isfinite(cont), cont, float(n))
    else:  # linear
        c = (1.0 - 2.0 ** (-spec.b_amp)) / (n - 1)
        cont = (1.0 - target) / c
    lo = np.clip(np.floor(cont), 0, n - 1).astype(np.int64)
    hi = np.clip(np.ceil(cont), 0, n - 1).astype(np.int64)
    d_lo = (_amp_from_index(lo, spec) - target) ** 2
    d_hi = (_amp_from_index(hi, spec) - target) ** 2
    # lo <= hi, so <= keeps the smaller index on ties
    return np.where(d_lo <= d_hi, lo, hi)


def project_beam(v: np.ndarray, spec: QuantizationSpec) -> QuantizedBeam:
    """Entrywise nearest-grid-point projection of a complex vector."""
    v = np.asarray(v, dtype=complex)
    phase_idx = _nearest_phase_idx(np.angle(v), spec)
    delta = np.angle(v * np.exp(-2j * np.pi * phase_idx / spec.n_phase))
    target = np.abs(v) * np.cos(delta)  # best amplitude along the chosen phase
    amp_idx = _nearest_amp_idx(target, spec)
    return QuantizedBeam(phase_idx=phase_idx, amp_idx=amp_idx, spec=spec)


def project_weight(w: complex, spec: QuantizationSpec) -> QuantizedWeight:
    """Nearest grid point for a single complex weight."""
    beam = project_beam(np.array([w]), spec)
    return QuantizedWeight(int(beam.phase_idx[0]), int(beam.amp_idx[0]))


def realize(beam: QuantizedBeam) -> np.ndarray:
    """Map grid indices back to the exact complex weights."""
    amp = _amp_from_index(beam.amp_idx, beam.spec)
    return amp * np.exp(2j * np.pi * beam.phase_idx / beam.spec.n_phase)


def deepest_amp_level(spec: QuantizationSpec) -> float:
    """Smallest realizable magnitude (the attenuator dynamic-range floor)."""
    return float(_amp_from_index(np.array([spec.n_amp - 1]), spec)[0])
