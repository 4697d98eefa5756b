"""Codebook container, conventional benchmarks, Taylor taper, scaling.

Benchmarks:

* ``cbf``: conjugate beamforming, beam i is the projected array response
  of direction i.
* ``windowed_cbf``: conjugate beams with a Taylor amplitude taper.  The
  taper is the outer product of a row window and a column window; by
  default the column (azimuth) axis carries the Taylor taper and the row
  window is all ones, which reproduces the benchmark gain losses of
  roughly 2 dB (20 dB taper) and 5 dB (40 dB taper) on an 8x8 array.
  ``axis='both'`` tapers both axes (a separable 2-D window, which costs
  twice the gain loss in dB).

``scale`` shrinks every beam by a common amplitude factor, re-projecting
onto the quantization grid; amplitudes that fall below the attenuator
dynamic range saturate at the deepest level (a warning is emitted).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .geometry import ArrayGeometry, Direction, array_response
from .quantization import (QuantizationSpec, QuantizedBeam, deepest_amp_level,
                           project_beam, realize)

__all__ = [
    "WindowSpec",
    "Codebook",
    "cbf",
    "taylor_window_1d",
    "windowed_cbf",
    "scale",
    "to_matrix",
    "save",
    "load",
    "CodebookFormatError",
]

FILE_VERSION = 1


class CodebookFormatError(ValueError):
    """Raised on malformed or out-of-range codebook files."""


@dataclass(frozen=True)
class WindowSpec:
    """Taylor taper target: sidelobe level (positive dB) and n-bar."""

    sll_db: float
    nbar: int = 4

    def __post_init__(self) -> None:
        if self.sll_db <= 0:
            raise ValueError("sll_db must be positive (dB below the main lobe)")
        if self.nbar < 1:
            raise ValueError("nbar must be >= 1")


@dataclass(frozen=True)
class Codebook:
    """M quantized beams indexed by the directions they serve."""

    geometry: ArrayGeometry
    spec: QuantizationSpec
    directions: tuple[Direction, ...]
    beams: tuple[QuantizedBeam, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if len(self.beams) != len(self.directions) or not self.beams:
            raise ValueError("need one beam per direction, at least one")
        for b in self.beams:
            if len(b) != self.geometry.n_elements:
                raise ValueError("beam length does not match geometry")
            if b.spec != self.spec:
                raise ValueError("beam quantization spec mismatch")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Codebook):
            return NotImplemented
        if (self.geometry != other.geometry or self.spec != other.spec
                or len(self.directions) != len(other.directions)):
            return False
        dirs_ok = all(
            abs(a.azimuth - b.azimuth) < 1e-12 and abs(a.elevation - b.elevation) < 1e-12
            for a, b in zip(self.directions, other.directions))
        return dirs_ok and all(a == b for a, b in zip(self.beams, other.beams))

    @property
    def size(self) -> int:
        return len(self.beams)


def cbf(geometry: ArrayGeometry, directions, spec: QuantizationSpec,
        label: str = "cbf") -> Codebook:
    """Conjugate beamforming codebook: beam i = P(a(dir_i))."""
    directions = tuple(directions)
    beams = tuple(project_beam(array_response(geometry, d), spec) for d in directions)
    return Codebook(geometry=geometry, spec=spec, directions=directions,
                    beams=beams, label=label)


def taylor_window_1d(n: int, window: WindowSpec) -> np.ndarray:
    """Classical Taylor n-bar taper, peak normalized to exactly 1.

    Raises when the requested (sll, nbar) pair degenerates: too many
    controlled sidelobes for the level produces a non-positive taper.
    """
    if n < window.nbar:
        raise ValueError(f"n={n} must be >= nbar={window.nbar}")
    if window.nbar == 1:
        return np.ones(n)
    r = 10.0 ** (window.sll_db / 20.0)
    a2 = (math.acosh(r) / math.pi) ** 2
    nbar = window.nbar
    sigma2 = nbar ** 2 / (a2 + (nbar - 0.5) ** 2)
    coeffs = []
    for m in range(1, nbar):
        num = np.prod([1.0 - m ** 2 / (sigma2 * (a2 + (i - 0.5) ** 2))
                       for i in range(1, nbar)])
        den = np.prod([1.0 - m ** 2 / i ** 2 for i in range(1, nbar) if i != m])
        coeffs.append(0.5 * (-1.0) ** (m + 1) * num / den)

    def envelope(x: np.ndarray) -> np.ndarray:
        w = np.ones_like(x)
        for m, f_m in enumerate(coeffs, start=1):
            w = w + 2.0 * f_m * np.cos(2.0 * np.pi * m * x)
        return w

    # validate on the continuous aperture taper so the check does not
    # depend on how many elements sample it
    dense = envelope(np.linspace(-0.5, 0.5, 1024))
    if np.min(dense) <= 0.0:
        raise ValueError(
            f"nbar={nbar} too large for sll={window.sll_db} dB: taper not strictly positive")
    w = envelope((np.arange(n) - (n - 1) / 2.0) / n)
    return w / np.max(w)


def _upa_window(geometry: ArrayGeometry, window: WindowSpec, axis: str) -> np.ndarray:
    """Flattened (row-major) outer product of row and column windows."""
    v_row = np.ones(geometry.rows)
    v_col = np.ones(geometry.cols)
    if axis in ("azimuth", "both"):
        v_col = taylor_window_1d(geometry.cols, window)
    if axis in ("elevation", "both"):
        v_row = taylor_window_1d(geometry.rows, window)
    if axis not in ("azimuth", "elevation", "both"):
        raise ValueError(f"unknown window axis {axis!r}")
    return np.outer(v_row, v_col).ravel()


def windowed_cbf(geometry: ArrayGeometry, directions, spec: QuantizationSpec,
                 window: WindowSpec, label: str = "", axis: str = "azimuth") -> Codebook:
    """Conjugate beams tapered element-wise by a Taylor window."""
    directions = tuple(directions)
    v = _upa_window(geometry, window, axis)
    beams = tuple(project_beam(array_response(geometry, d) * v, spec)
                  for d in directions)
    return Codebook(geometry=geometry, spec=spec, directions=directions,
                    beams=beams, label=label or f"cbf+tay-{window.sll_db:g}")


def scale(codebook: Codebook, delta_amplitude: float) -> Codebook:
    """Re-project every beam from ``delta * realize(beam)``.

    ``delta_amplitude`` is a linear amplitude in (0, 1].  Targets below
    the attenuator dynamic range saturate at the deepest level.
    """
    if not 0.0 < delta_amplitude <= 1.0:
        raise ValueError("delta_amplitude must be in (0, 1]")
    if delta_amplitude == 1.0:
        return codebook
    floor = deepest_amp_level(codebook.spec)
    saturated = 0
    beams = []
    for beam in codebook.beams:
        v = delta_amplitude * realize(beam)
        saturated += int(np.count_nonzero(np.abs(v) < floor))
        beams.append(project_beam(v, codebook.spec))
    if saturated:
        warnings.warn(
            f"scale({delta_amplitude:g}): {saturated} weights below the attenuator "
            f"dynamic range floor ({floor:g}); saturated at the deepest level",
            RuntimeWarning, stacklevel=2)
    return replace(codebook, beams=tuple(beams),
                   label=f"{codebook.label}@{delta_amplitude:g}")


def to_matrix(codebook: Codebook) -> np.ndarray:
    """Stack realized beams as columns: N x M complex."""
    return np.column_stack([realize(b) for b in codebook.beams])


def save(codebook: Codebook, path) -> None:
    """Write the codebook to JSON (quantization indices, degrees)."""
    doc = {
        "version": FILE_VERSION,
        "label": codebook.label,
        "geometry": {
            "rows": codebook.geometry.rows,
            "cols": codebook.geometry.cols,
            "spacing": codebook.geometry.spacing,
        },
        "spec": {
            "b_phs": codebook.spec.b_phs,
            "b_amp": codebook.spec.b_amp,
            "lsb_db": codebook.spec.lsb_db,
            "amp_mode": codebook.spec.amp_mode,
        },
        "directions_deg": [[math.degrees(d.azimuth), math.degrees(d.elevation)]
                           for d in codebook.directions],
        "beams": [{"phase_idx": b.phase_idx.tolist(), "amp_idx": b.amp_idx.tolist()}
                  for b in codebook.beams],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)


def load(path) -> Codebook:
    """Read a codebook file; every array is length-checked."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CodebookFormatError(f"cannot read codebook file {path}: {exc}") from exc
    try:
        if doc["version"] != FILE_VERSION:
            raise CodebookFormatError(f"unsupported codebook file version {doc['version']!r}")
        geometry = ArrayGeometry(rows=int(doc["geometry"]["rows"]),
                                 cols=int(doc["geometry"]["cols"]),
                                 spacing=float(doc["geometry"]["spacing"]))
        spec = QuantizationSpec(b_phs=int(doc["spec"]["b_phs"]),
                                b_amp=int(doc["spec"]["b_amp"]),
                                lsb_db=float(doc["spec"]["lsb_db"]),
                                amp_mode=str(doc["spec"]["amp_mode"]))
        directions = tuple(Direction(math.radians(az), math.radians(el))
                           for az, el in doc["directions_deg"])
        n = geometry.n_elements
        beams = []
        for entry in doc["beams"]:
            p = np.asarray(entry["phase_idx"], dtype=np.int64)
            a = np.asarray(entry["amp_idx"], dtype=np.int64)
            if p.shape != (n,) or a.shape != (n,):
                raise CodebookFormatError("beam index arrays do not match element count")
            beams.append(QuantizedBeam(phase_idx=p, amp_idx=a, spec=spec))
        if len(beams) != len(directions):
            raise CodebookFormatError("beam count does not match direction count")
        return Codebook(geometry=geometry, spec=spec, directions=directions,
                        beams=tuple(beams), label=str(doc.get("label", "")))
    except CodebookFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CodebookFormatError(f"malformed codebook file {path}: {exc}") from exc
