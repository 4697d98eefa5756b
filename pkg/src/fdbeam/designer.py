"""Codebook pair design: initialization, alternating per-beam solves,
quantization after every beam, and the robust regularized variant.

The algorithm initializes both codebooks as projections of the scaled
steering matrices (so every beam starts at its target gain, up to
quantization), then walks beam indices k = 1..max(Mtx, Mrx): solve the
k-th transmit beam against the current receive codebook, project it onto
the hardware grid, write it back, then do the same for the k-th receive
beam against the updated transmit codebook.  Later beams therefore react
to the quantization imposed on earlier ones.  With unequal sizes the
longer codebook finishes alone after min(Mtx, Mrx) interleaved steps.

Robustness to channel error enters purely through the per-beam
regularizer weight ``eps_tilde * sqrt(Nt*Nr) * smax(counterpart)``; with
eps_tilde == 0 the flow reduces exactly to the nominal design.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from ._linalg import spectral_norm
from .codebooks import Codebook
from .geometry import ArrayGeometry, DirectionGrid, coverage_grid, steering_matrix
from .quantization import QuantizationSpec, deepest_amp_level, project_beam, realize
from .solver import BeamSubproblem, InfeasibleProblemError, SolverConfig, solve_beam

__all__ = [
    "DesignParams",
    "DesignResult",
    "DesignError",
    "target_gains",
    "initialize",
    "design",
    "design_robust",
]


class DesignError(RuntimeError):
    """A per-beam subproblem failed; the message names beam and side."""


@dataclass(frozen=True)
class DesignParams:
    """Design knobs: gain-loss tolerances, variance budgets, robustness."""

    delta_tx_sq: float = 1.0          # tolerated tx power-gain loss, linear (0, 1]
    delta_rx_sq: float = 1.0
    sigma_tx_sq: float = 0.01         # normalized variance tolerance, linear
    sigma_rx_sq: float = 0.01
    eps_tilde: float = 0.0            # robustness regularizer weight (Frobenius eps)
    spec_tx: QuantizationSpec = QuantizationSpec(b_phs=5, b_amp=5)
    spec_rx: QuantizationSpec = QuantizationSpec(b_phs=5, b_amp=5)
    solver: SolverConfig = field(default_factory=SolverConfig)
    passes: int = 1

    def __post_init__(self) -> None:
        for name in ("delta_tx_sq", "delta_rx_sq"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must be in (0, 1]")
        if self.sigma_tx_sq < 0 or self.sigma_rx_sq < 0:
            raise ValueError("variance tolerances must be nonnegative")
        if self.eps_tilde < 0:
            raise ValueError("eps_tilde must be nonnegative")
        if self.passes < 1:
            raise ValueError("passes must be >= 1")


@dataclass(frozen=True)
class DesignResult:
    tx_codebook: Codebook
    rx_codebook: Codebook
    E_final: float
    per_beam_gain_tx: np.ndarray = field(repr=False)  # |a* f| at own directions
    per_beam_gain_rx: np.ndarray = field(repr=False)
    objective_trace: np.ndarray = field(repr=False)   # E after every beam write
    coverage_residual_tx: float = 0.0                 # post-quantization, lhs - rhs
    coverage_residual_rx: float = 0.0
    coverage_residual_tx_preq: float = 0.0            # pre-quantization solver iterates
    coverage_residual_rx_preq: float = 0.0
    notes: tuple[str, ...] = ()


def target_gains(params: DesignParams, nt: int, nr: int) -> tuple[float, float]:
    """Amplitude gain targets: sqrt(delta^2) * N per side."""
    return (np.sqrt(params.delta_tx_sq) * nt, np.sqrt(params.delta_rx_sq) * nr)


def _as_directions(grid) -> tuple:
    if isinstance(grid, DirectionGrid):
        return tuple(coverage_grid(grid))
    return tuple(grid)


def _init_side(geometry: ArrayGeometry, directions, delta_amp: float,
               spec: QuantizationSpec, label: str, notes: list[str]):
    a = steering_matrix(geometry, directions).entries
    floor = deepest_amp_level(spec)
    if spec.amp_mode != "none" and delta_amp < floor:
        msg = (f"{label}: initialization amplitude {delta_amp:.4g} is below the "
               f"attenuator dynamic-range floor {floor:.4g}; projection saturates")
        warnings.warn(msg, RuntimeWarning, stacklevel=3)
        notes.append(msg)
    beams = tuple(project_beam(delta_amp * a[:, i], spec) for i in range(a.shape[1]))
    cb = Codebook(geometry=geometry, spec=spec, directions=tuple(directions),
                  beams=beams, label=label)
    return a, cb


def initialize(geom_tx: ArrayGeometry, geom_rx: ArrayGeometry, grid_tx, grid_rx,
               params: DesignParams) -> tuple[Codebook, Codebook]:
    """Quantized projections of the scaled steering matrices."""
    notes: list[str] = []
    _, tx = _init_side(geom_tx, _as_directions(grid_tx), np.sqrt(params.delta_tx_sq),
                       params.spec_tx, "designed-tx", notes)
    _, rx = _init_side(geom_rx, _as_directions(grid_rx), np.sqrt(params.delta_rx_sq),
                       params.spec_rx, "designed-rx", notes)
    return tx, rx


def design(h: np.ndarray, geom_tx: ArrayGeometry, geom_rx: ArrayGeometry,
           grid_tx, grid_rx, params: DesignParams) -> DesignResult:
    """Run the full alternating design on channel ``h`` (Nr x Nt)."""
    h = np.asarray(h, dtype=complex)
    nt, nr = geom_tx.n_elements, geom_rx.n_elements
    if h.shape != (nr, nt):
        raise ValueError(f"channel shape {h.shape} does not match geometries ({nr}, {nt})")
    dirs_tx = _as_directions(grid_tx)
    dirs_rx = _as_directions(grid_rx)
    mtx, mrx = len(dirs_tx), len(dirs_rx)
    notes: list[str] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        a_tx, cb_tx = _init_side(geom_tx, dirs_tx, np.sqrt(params.delta_tx_sq),
                                 params.spec_tx, "designed-tx", notes)
        a_rx, cb_rx = _init_side(geom_rx, dirs_rx, np.sqrt(params.delta_rx_sq),
                                 params.spec_rx, "designed-rx", notes)
    for w in caught:
        warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)

    g_tx, g_rx = target_gains(params, nt, nr)
    sig_tx, sig_rx = np.sqrt(params.sigma_tx_sq), np.sqrt(params.sigma_rx_sq)
    beams_tx = list(cb_tx.beams)
    beams_rx = list(cb_rx.beams)
    f_mat = np.column_stack([realize(b) for b in beams_tx])
    w_mat = np.column_stack([realize(b) for b in beams_rx])
    root_ntnr = np.sqrt(nt * nr)

    trace: list[float] = []
    preq_tx = np.zeros(mtx)
    preq_rx = np.zeros(mrx)

    def coupling_e() -> float:
        prod = w_mat.conj().T @ h @ f_mat
        return float(np.linalg.norm(prod) ** 2) / (mtx * mrx)

    for _ in range(params.passes):
        for k in range(max(mtx, mrx)):
            if k < mtx:
                rho = (params.eps_tilde * root_ntnr * spectral_norm(w_mat)
                       if params.eps_tilde > 0 else 0.0)
                try:
                    prob = BeamSubproblem(coupling=w_mat.conj().T @ h,
                                          steer=a_tx[:, k], g_tgt=g_tx,
                                          sigma=sig_tx, rho=rho)
                    res = solve_beam(prob, replace(params.solver, warm_start=f_mat[:, k]))
                except InfeasibleProblemError as exc:
                    raise DesignError(f"transmit beam {k}: coverage constraint "
                                      f"infeasible ({exc})") from exc
                preq_tx[k] = abs(g_tx - np.vdot(a_tx[:, k], res.f)) ** 2
                beams_tx[k] = project_beam(res.f, params.spec_tx)
                f_mat[:, k] = realize(beams_tx[k])
                trace.append(coupling_e())
            if k < mrx:
                rho = (params.eps_tilde * root_ntnr * spectral_norm(f_mat)
                       if params.eps_tilde > 0 else 0.0)
                try:
                    prob = BeamSubproblem(coupling=(h @ f_mat).conj().T,
                                          steer=a_rx[:, k], g_tgt=g_rx,
                                          sigma=sig_rx, rho=rho)
                    res = solve_beam(prob, replace(params.solver, warm_start=w_mat[:, k]))
                except InfeasibleProblemError as exc:
                    raise DesignError(f"receive beam {k}: coverage constraint "
                                      f"infeasible ({exc})") from exc
                preq_rx[k] = abs(g_rx - np.vdot(a_rx[:, k], res.f)) ** 2
                beams_rx[k] = project_beam(res.f, params.spec_rx)
                w_mat[:, k] = realize(beams_rx[k])
                trace.append(coupling_e())

    cb_tx = replace(cb_tx, beams=tuple(beams_tx))
    cb_rx = replace(cb_rx, beams=tuple(beams_rx))

    gains_tx = np.abs(np.einsum("nm,nm->m", a_tx.conj(), f_mat))
    gains_rx = np.abs(np.einsum("nm,nm->m", a_rx.conj(), w_mat))
    lhs_tx = float(np.sum(np.abs(g_tx - np.einsum("nm,nm->m", a_tx.conj(), f_mat)) ** 2))
    lhs_rx = float(np.sum(np.abs(g_rx - np.einsum("nm,nm->m", a_rx.conj(), w_mat)) ** 2))
    bound_tx = params.sigma_tx_sq * g_tx ** 2 * mtx
    bound_rx = params.sigma_rx_sq * g_rx ** 2 * mrx
    resid_tx = lhs_tx - bound_tx
    resid_rx = lhs_rx - bound_rx
    if resid_tx > 0:
        notes.append(f"tx coverage constraint violated after quantization "
                     f"(residual {resid_tx:.4g})")
    if resid_rx > 0:
        notes.append(f"rx coverage constraint violated after quantization "
                     f"(residual {resid_rx:.4g})")

    from .metrics import average_coupling  # deferred: metrics imports codebooks

    e_final = average_coupling(w_mat, h, f_mat).E
    return DesignResult(
        tx_codebook=cb_tx,
        rx_codebook=cb_rx,
        E_final=e_final,
        per_beam_gain_tx=gains_tx,
        per_beam_gain_rx=gains_rx,
        objective_trace=np.asarray(trace),
        coverage_residual_tx=resid_tx,
        coverage_residual_rx=resid_rx,
        coverage_residual_tx_preq=float(np.sum(preq_tx)) - bound_tx,
        coverage_residual_rx_preq=float(np.sum(preq_rx)) - bound_rx,
        notes=tuple(notes),
    )


def design_robust(h_est: np.ndarray, geom_tx: ArrayGeometry, geom_rx: ArrayGeometry,
                  grid_tx, grid_rx, params: DesignParams) -> DesignResult:
    """Worst-case-regularized design; identical to ``design`` when eps_tilde == 0."""
    return design(h_est, geom_tx, geom_rx, grid_tx, grid_rx, params)
