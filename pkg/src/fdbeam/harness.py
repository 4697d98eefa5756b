"""Seeded Monte Carlo trials, parameter sweeps, and CSV/JSON persistence.

A sweep is the Cartesian product of the design axes (delta^2, sigma^2,
phase/amplitude bits, eps_tilde) times ``trials`` seeds.  Every trial
draws its own channel from a dedicated RNG stream keyed by
``(master_seed, axis_index, trial_index)``, so trials can run in any
order (or in parallel) and still reproduce bit-for-bit.

CSV schema (stable column order, '.' decimal, empty string for null):

    seed, delta_db, sigma_db, b_phs, b_amp, eps_tilde_db, eps_eval_db,
    model, E_design_db, E_cbf_db, E_tay20_db, E_tay40_db, med_gtx_db,
    med_grx_db, cov_resid_tx, cov_resid_rx, status, ms

Aggregate rows (status ``aggregate``) average coupling in the linear
domain before converting to dB; failed trials are excluded and counted
in the run manifest.  The ``ms`` wall-time column is informational and
not covered by the reproducibility contract.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__ as _build_version
from .channels import (FarFieldRays, Rayleigh, RicianMixture, SphericalNearField,
                       draw_channel, draw_error, draw_user_channel, make_rng)
from .codebooks import Codebook, cbf, scale, to_matrix, windowed_cbf, WindowSpec
from .designer import DesignError, DesignParams, design
from .geometry import ArrayGeometry, DirectionGrid, coverage_grid, dense_eval_grid
from .metrics import LinkBudget, average_coupling, capacities, coverage, rate_rx, rate_tx, to_db
from .quantization import QuantizationSpec
from .solver import SolverConfig

__all__ = [
    "ExperimentConfig",
    "make_design_params",
    "AxisPoint",
    "TrialRecord",
    "CSV_COLUMNS",
    "axis_points",
    "run_trial",
    "sweep",
    "evaluate_under_error",
    "link_sweep",
    "worker_count",
]

CSV_COLUMNS = [
    "seed", "delta_db", "sigma_db", "b_phs", "b_amp", "eps_tilde_db",
    "eps_eval_db", "model", "E_design_db", "E_cbf_db", "E_tay20_db",
    "E_tay40_db", "med_gtx_db", "med_grx_db", "cov_resid_tx",
    "cov_resid_rx", "status", "ms",
]

_KEY_COLUMNS = ["seed", "delta_db", "sigma_db", "b_phs", "b_amp",
                "eps_tilde_db", "eps_eval_db", "model"]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isinf(x):
            return ""  # -inf coupling sentinel stored as null
        return format(x, ".12g")
    return str(x)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a sweep needs; see ``from_dict`` for the JSON schema."""

    geometry_tx: ArrayGeometry = ArrayGeometry(8, 8)
    geometry_rx: ArrayGeometry = ArrayGeometry(8, 8)
    grid_tx: DirectionGrid = DirectionGrid.from_degrees(-60, 60, 15, -30, 30, 15)
    grid_rx: DirectionGrid = DirectionGrid.from_degrees(-60, 60, 15, -30, 30, 15)
    dense_n_az: int = 121
    dense_n_el: int = 61
    si_model: object = Rayleigh()
    delta_db: tuple = (0.0,)
    sigma_db: tuple = (-20.0,)
    b_phs: tuple = (5,)
    b_amp: tuple = (5,)
    eps_tilde_db: tuple = (None,)
    lsb_db: float = 0.25
    amp_mode: str = "log"
    benchmark_b_phs: int | None = None
    benchmark_b_amp: int | None = None
    eps_eval_db: tuple = ()
    n_error_draws: int = 20
    snr_db: tuple = (0.0,)
    inr_db: tuple = (-30.0, 0.0, 30.0, 60.0, 90.0)
    n_user_draws: int = 50
    trials: int = 20
    master_seed: int = 0
    solver: SolverConfig = field(default_factory=SolverConfig)
    passes: int = 1
    benchmark_only: bool = False

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for name in ("delta_db", "sigma_db", "b_phs", "b_amp", "eps_tilde_db"):
            if not tuple(getattr(self, name)):
                raise ValueError(f"axis {name} must be nonempty")

    @staticmethod
    def from_dict(doc: dict) -> "ExperimentConfig":
        def geom(key, default):
            g = doc.get(key)
            if g is None:
                return default
            return ArrayGeometry(rows=int(g["rows"]), cols=int(g["cols"]),
                                 spacing=float(g.get("spacing", 0.5)))

        def grid(key, default):
            g = doc.get(key)
            if g is None:
                return default
            return DirectionGrid.from_degrees(
                g["az_start_deg"], g["az_stop_deg"], g["az_step_deg"],
                g["el_start_deg"], g["el_stop_deg"], g["el_step_deg"])

        model = _model_from_dict(doc.get("si_model", {"kind": "rayleigh"}))
        design_doc = doc.get("design", {})
        eval_doc = doc.get("eval", {})
        link_doc = doc.get("link", {})
        dense = doc.get("dense_grid", {})
        solver_doc = doc.get("solver", {})
        solver = SolverConfig(
            max_iters=int(solver_doc.get("max_iters", 2000)),
            step_rule=str(solver_doc.get("step_rule", "auto")),
            dykstra_iters=int(solver_doc.get("dykstra_iters", 50)),
            feas_tol=float(solver_doc.get("feas_tol", 1e-8)),
            obj_tol=float(solver_doc.get("obj_tol", 1e-7)),
        )
        defaults = ExperimentConfig()
        return ExperimentConfig(
            geometry_tx=geom("geometry_tx", defaults.geometry_tx),
            geometry_rx=geom("geometry_rx", defaults.geometry_rx),
            grid_tx=grid("grid_tx", defaults.grid_tx),
            grid_rx=grid("grid_rx", defaults.grid_rx),
            dense_n_az=int(dense.get("n_az", 121)),
            dense_n_el=int(dense.get("n_el", 61)),
            si_model=model,
            delta_db=tuple(design_doc.get("delta_db", (0.0,))),
            sigma_db=tuple(design_doc.get("sigma_db", (-20.0,))),
            b_phs=tuple(design_doc.get("b_phs", (5,))),
            b_amp=tuple(design_doc.get("b_amp", (5,))),
            eps_tilde_db=tuple(design_doc.get("eps_tilde_db", (None,))),
            lsb_db=float(design_doc.get("lsb_db", 0.25)),
            amp_mode=str(design_doc.get("amp_mode", "log")),
            benchmark_b_phs=design_doc.get("benchmark_b_phs"),
            benchmark_b_amp=design_doc.get("benchmark_b_amp"),
            eps_eval_db=tuple(eval_doc.get("eps_eval_db", ())),
            n_error_draws=int(eval_doc.get("n_error_draws", 20)),
            snr_db=tuple(link_doc.get("snr_db", (0.0,))),
            inr_db=tuple(link_doc.get("inr_db", defaults.inr_db)),
            n_user_draws=int(link_doc.get("n_user_draws", 50)),
            trials=int(doc.get("trials", 20)),
            master_seed=int(doc.get("master_seed", 0)),
            solver=solver,
            passes=int(doc.get("passes", 1)),
            benchmark_only=bool(doc.get("benchmark_only", False)),
        )

    @staticmethod
    def from_json(path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return ExperimentConfig.from_dict(json.load(fh))


def _model_from_dict(doc: dict):
    kind = doc.get("kind", "rayleigh")
    if kind == "rayleigh":
        return Rayleigh()
    if kind == "spherical":
        return SphericalNearField(separation_wavelengths=float(
            doc.get("separation_wavelengths", 10.0)))
    if kind == "farfield":
        n = doc.get("n_rays", [1, 15])
        return FarFieldRays(n_rays=int(n) if isinstance(n, (int, float)) else (int(n[0]), int(n[1])))
    if kind == "rician":
        n = doc.get("n_rays", [1, 15])
        return RicianMixture(
            kappa=float(doc.get("kappa", 1.0)),
            nf=SphericalNearField(separation_wavelengths=float(
                doc.get("separation_wavelengths", 10.0))),
            ff=FarFieldRays(n_rays=int(n) if isinstance(n, (int, float)) else (int(n[0]), int(n[1]))))
    raise ValueError(f"unknown si_model kind {kind!r}")


@dataclass(frozen=True)
class AxisPoint:
    """One point of the sweep's Cartesian design-parameter product."""

    index: int
    delta_db: float
    sigma_db: float
    b_phs: int
    b_amp: int
    eps_tilde_db: float | None = None


def axis_points(config: ExperimentConfig) -> list[AxisPoint]:
    pts = []
    i = 0
    for d in config.delta_db:
        for s in config.sigma_db:
            for bp in config.b_phs:
                for ba in config.b_amp:
                    for et in config.eps_tilde_db:
                        pts.append(AxisPoint(i, float(d), float(s), int(bp), int(ba),
                                             None if et is None else float(et)))
                        i += 1
    return pts


@dataclass(frozen=True)
class TrialRecord:
    """One CSV row; every metric is recomputable from the stored codebooks."""

    seed: int
    delta_db: float
    sigma_db: float
    b_phs: int
    b_amp: int
    eps_tilde_db: float | None
    eps_eval_db: float | None
    model: str
    E_design_db: float | None
    E_cbf_db: float | None
    E_tay20_db: float | None
    E_tay40_db: float | None
    med_gtx_db: float | None
    med_grx_db: float | None
    cov_resid_tx: float | None
    cov_resid_rx: float | None
    status: str
    ms: float

    def to_row(self) -> list[str]:
        return [_fmt(getattr(self, c)) for c in CSV_COLUMNS]


def _db_to_linear_power(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _db_to_eps(db: float | None) -> float:
    # eps is an amplitude-like Frobenius bound; its dB value is the power dB of eps^2
    return 0.0 if db is None else 10.0 ** (db / 20.0)


def make_design_params(config: ExperimentConfig, axis: AxisPoint) -> DesignParams:
    spec = QuantizationSpec(b_phs=axis.b_phs, b_amp=axis.b_amp,
                            lsb_db=config.lsb_db, amp_mode=config.amp_mode)
    return DesignParams(
        delta_tx_sq=_db_to_linear_power(axis.delta_db),
        delta_rx_sq=_db_to_linear_power(axis.delta_db),
        sigma_tx_sq=_db_to_linear_power(axis.sigma_db),
        sigma_rx_sq=_db_to_linear_power(axis.sigma_db),
        eps_tilde=_db_to_eps(axis.eps_tilde_db),
        spec_tx=spec, spec_rx=spec,
        solver=config.solver, passes=config.passes,
    )


def _benchmark_pairs(config: ExperimentConfig, axis: AxisPoint):
    """CBF / Tay-20 / Tay-40 tx+rx codebooks, delta-scaled per side."""
    bp = config.benchmark_b_phs if config.benchmark_b_phs is not None else axis.b_phs
    ba = config.benchmark_b_amp if config.benchmark_b_amp is not None else axis.b_amp
    spec = QuantizationSpec(b_phs=bp, b_amp=ba, lsb_db=config.lsb_db,
                            amp_mode=config.amp_mode)
    dirs_tx = coverage_grid(config.grid_tx)
    dirs_rx = coverage_grid(config.grid_rx)
    delta_amp = 10.0 ** (axis.delta_db / 20.0)
    out = {}
    for name, maker in (
            ("cbf", lambda g, d: cbf(g, d, spec)),
            ("tay20", lambda g, d: windowed_cbf(g, d, spec, WindowSpec(20.0))),
            ("tay40", lambda g, d: windowed_cbf(g, d, spec, WindowSpec(40.0)))):
        tx = maker(config.geometry_tx, dirs_tx)
        rx = maker(config.geometry_rx, dirs_rx)
        if delta_amp < 1.0:
            tx = scale(tx, delta_amp)
            rx = scale(rx, delta_amp)
        out[name] = (tx, rx)
    return out


def _mean_e_under_error(f_mat, w_mat, h, eps, n_draws, rng) -> float:
    nr, nt = h.shape
    root = math.sqrt(nt * nr)
    vals = [average_coupling(w_mat, h + root * draw_error(nr, nt, eps, rng), f_mat).E
            for _ in range(n_draws)]
    return float(np.mean(vals))


def run_trial(config: ExperimentConfig, axis: AxisPoint, seed: int,
              h_override: np.ndarray | None = None) -> list[TrialRecord]:
    """One seeded trial; returns the nominal row plus one per eps_eval."""
    t0 = time.perf_counter()
    rng = make_rng(config.master_seed, axis.index, seed, 0)
    if h_override is not None:
        h = np.asarray(h_override, dtype=complex)
    else:
        h = draw_channel(config.si_model, config.geometry_tx, config.geometry_rx, rng)
    model_name = getattr(config.si_model, "kind", "custom")
    dirs_tx = coverage_grid(config.grid_tx)
    dirs_rx = coverage_grid(config.grid_rx)
    dense_tx = dense_eval_grid(config.grid_tx, config.dense_n_az, config.dense_n_el)
    dense_rx = dense_eval_grid(config.grid_rx, config.dense_n_az, config.dense_n_el)

    benches = _benchmark_pairs(config, axis)
    bench_e = {}
    bench_mats = {}
    for name, (tx, rx) in benches.items():
        fm, wm = to_matrix(tx), to_matrix(rx)
        bench_mats[name] = (fm, wm)
        bench_e[name] = average_coupling(wm, h, fm).E

    status = "ok"
    e_design = None
    med_gtx = med_grx = None
    resid_tx = resid_rx = None
    design_mats = None
    if not config.benchmark_only:
        try:
            result = design(h, config.geometry_tx, config.geometry_rx,
                            dirs_tx, dirs_rx, make_design_params(config, axis))
            e_design = result.E_final
            med_gtx = coverage(result.tx_codebook, dense_tx).median_db
            med_grx = coverage(result.rx_codebook, dense_rx).median_db
            resid_tx = result.coverage_residual_tx
            resid_rx = result.coverage_residual_rx
            design_mats = (to_matrix(result.tx_codebook), to_matrix(result.rx_codebook))
        except DesignError:
            status = "failed"

    def make_record(eps_db, e_d, e_b, elapsed_ms) -> TrialRecord:
        return TrialRecord(
            seed=seed, delta_db=axis.delta_db, sigma_db=axis.sigma_db,
            b_phs=axis.b_phs, b_amp=axis.b_amp, eps_tilde_db=axis.eps_tilde_db,
            eps_eval_db=eps_db, model=model_name,
            E_design_db=None if e_d is None else to_db(e_d),
            E_cbf_db=to_db(e_b["cbf"]), E_tay20_db=to_db(e_b["tay20"]),
            E_tay40_db=to_db(e_b["tay40"]),
            med_gtx_db=med_gtx, med_grx_db=med_grx,
            cov_resid_tx=resid_tx, cov_resid_rx=resid_rx,
            status=status, ms=elapsed_ms,
        )

    records = [make_record(None, e_design, bench_e,
                           (time.perf_counter() - t0) * 1e3)]
    for j, eps_db in enumerate(config.eps_eval_db):
        eps = _db_to_eps(eps_db)
        err_rng = make_rng(config.master_seed, axis.index, seed, 1, j)
        e_d = None
        if design_mats is not None:
            e_d = _mean_e_under_error(design_mats[0], design_mats[1], h, eps,
                                      config.n_error_draws, err_rng)
        e_b = {name: _mean_e_under_error(fm, wm, h, eps, config.n_error_draws,
                                         make_rng(config.master_seed, axis.index,
                                                  seed, 2, j, i))
               for i, (name, (fm, wm)) in enumerate(bench_mats.items())}
        records.append(make_record(float(eps_db), e_d, e_b,
                                   (time.perf_counter() - t0) * 1e3))
    return records


def evaluate_under_error(f_mat, w_mat, h: np.ndarray, eps_eval: float,
                         n_draws: int, rng: np.random.Generator) -> tuple[float, float]:
    """Mean and std of E over error draws at Frobenius radius eps_eval."""
    f = to_matrix(f_mat) if isinstance(f_mat, Codebook) else np.asarray(f_mat, dtype=complex)
    w = to_matrix(w_mat) if isinstance(w_mat, Codebook) else np.asarray(w_mat, dtype=complex)
    nr, nt = h.shape
    root = math.sqrt(nt * nr)
    vals = np.array([average_coupling(w, h + root * draw_error(nr, nt, eps_eval, rng), f).E
                     for _ in range(n_draws)])
    return float(np.mean(vals)), float(np.std(vals))


def link_sweep(config: ExperimentConfig, f_cb, w_cb, h: np.ndarray,
               seed: int | None = None) -> list[dict]:
    """Average sum spectral efficiency over user draws per (SNR, INR) point.

    User positions/gains are drawn once and reused across the grid so the
    sweep is monotone-comparable in INR.
    """
    f = to_matrix(f_cb) if isinstance(f_cb, Codebook) else np.asarray(f_cb, dtype=complex)
    w = to_matrix(w_cb) if isinstance(w_cb, Codebook) else np.asarray(w_cb, dtype=complex)
    nt = config.geometry_tx.n_elements
    rng = make_rng(config.master_seed if seed is None else seed, 3)
    users = [(draw_user_channel(config.geometry_tx, config.grid_tx, rng),
              draw_user_channel(config.geometry_rx, config.grid_rx, rng))
             for _ in range(config.n_user_draws)]
    # serving beams do not depend on SNR/INR: pick once per user
    serve = []
    for u_tx, u_rx in users:
        i = int(np.argmax(np.abs(f.conj().T @ u_tx.entries)))
        j = int(np.argmax(np.abs(w.conj().T @ u_rx.entries)))
        serve.append((i, j))
    rows = []
    for snr_db in config.snr_db:
        for inr_db in config.inr_db:
            budget = LinkBudget(snr_tx=_db_to_linear_power(snr_db),
                                snr_rx=_db_to_linear_power(snr_db),
                                inr=_db_to_linear_power(inr_db))
            r_tx_vals, r_rx_vals, c_fd_vals = [], [], []
            for (u_tx, u_rx), (i, j) in zip(users, serve):
                r_tx_vals.append(rate_tx(budget, u_tx.entries, f[:, i], nt))
                r_rx_vals.append(rate_rx(budget, u_rx.entries, w[:, j], h, f[:, i]))
                c_fd_vals.append(capacities(budget, u_tx.entries, u_rx.entries, nt)[0])
            r_tx_m, r_rx_m = float(np.mean(r_tx_vals)), float(np.mean(r_rx_vals))
            c_fd = float(np.mean(c_fd_vals))
            rows.append({"snr_db": float(snr_db), "inr_db": float(inr_db),
                         "r_tx": r_tx_m, "r_rx": r_rx_m, "sum_rate": r_tx_m + r_rx_m,
                         "c_fd": c_fd, "c_hd": 0.5 * c_fd})
    return rows


def worker_count(override: int | None = None) -> int:
    if override is not None and override >= 1:
        return override
    env = os.environ.get("FDBEAM_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, min(os.cpu_count() or 1, 8))


def _trial_task(args):
    config, axis, seed = args
    try:
        return [r.to_row() for r in run_trial(config, axis, seed)]
    except Exception as exc:  # record, never kill the sweep
        rec = TrialRecord(
            seed=seed, delta_db=axis.delta_db, sigma_db=axis.sigma_db,
            b_phs=axis.b_phs, b_amp=axis.b_amp, eps_tilde_db=axis.eps_tilde_db,
            eps_eval_db=None, model=getattr(config.si_model, "kind", "custom"),
            E_design_db=None, E_cbf_db=None, E_tay20_db=None, E_tay40_db=None,
            med_gtx_db=None, med_grx_db=None, cov_resid_tx=None, cov_resid_rx=None,
            status=f"failed:{type(exc).__name__}", ms=0.0)
        return [rec.to_row()]


def _aggregate_rows(data_rows: list[list[str]]) -> list[list[str]]:
    """One aggregate row per (axis values, eps_eval); linear-domain E means."""
    col = {c: i for i, c in enumerate(CSV_COLUMNS)}
    groups: dict[tuple, list[list[str]]] = {}
    order: list[tuple] = []
    for row in data_rows:
        key = tuple(row[col[c]] for c in _KEY_COLUMNS if c != "seed")
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(row)
    out = []
    for key in order:
        rows = [r for r in groups[key] if r[col["status"]].startswith("ok")]
        agg = [""] * len(CSV_COLUMNS)
        for i, c in enumerate(_KEY_COLUMNS[1:], start=0):
            agg[col[c]] = key[i]
        agg[col["status"]] = "aggregate"
        if rows:
            for c in ("E_design_db", "E_cbf_db", "E_tay20_db", "E_tay40_db"):
                vals = [float(r[col[c]]) for r in rows if r[col[c]] != ""]
                if len(vals) == len(rows):
                    agg[col[c]] = _fmt(to_db(float(np.mean([10 ** (v / 10) for v in vals]))))
            for c in ("med_gtx_db", "med_grx_db", "cov_resid_tx", "cov_resid_rx", "ms"):
                vals = [float(r[col[c]]) for r in rows if r[col[c]] != ""]
                if vals:
                    agg[col[c]] = _fmt(float(np.mean(vals)))
        out.append(agg)
    return out


def sweep(config: ExperimentConfig, out_path, workers: int | None = None) -> dict:
    """Run (or resume) the full sweep; returns the manifest dict.

    Data rows are flushed as they complete, so an interrupted sweep keeps
    its finished trials; re-running skips completed (axis, seed) pairs and
    rebuilds the aggregate rows.
    """
    t0 = time.perf_counter()
    out_path = str(out_path)
    col = {c: i for i, c in enumerate(CSV_COLUMNS)}
    existing: list[list[str]] = []
    done: set[tuple] = set()
    if os.path.exists(out_path):
        with open(out_path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header == CSV_COLUMNS:
                for row in reader:
                    if len(row) == len(CSV_COLUMNS) and row[col["status"]] != "aggregate":
                        existing.append(row)
                        done.add(tuple(row[col[c]] for c in _KEY_COLUMNS))

    axes = axis_points(config)
    tasks = []
    for axis in axes:
        for seed in range(config.trials):
            probe = TrialRecord(
                seed=seed, delta_db=axis.delta_db, sigma_db=axis.sigma_db,
                b_phs=axis.b_phs, b_amp=axis.b_amp, eps_tilde_db=axis.eps_tilde_db,
                eps_eval_db=None, model=getattr(config.si_model, "kind", "custom"),
                E_design_db=None, E_cbf_db=None, E_tay20_db=None, E_tay40_db=None,
                med_gtx_db=None, med_grx_db=None, cov_resid_tx=None,
                cov_resid_rx=None, status="ok", ms=0.0).to_row()
            if tuple(probe[col[c]] for c in _KEY_COLUMNS) not in done:
                tasks.append((config, axis, seed))

    n_workers = worker_count(workers)
    data_rows = list(existing)
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in existing:
            writer.writerow(row)
        fh.flush()
        if n_workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=n_workers) as pool:
                for rows in pool.map(_trial_task, tasks):
                    for row in rows:
                        writer.writerow(row)
                        data_rows.append(row)
                    fh.flush()
        else:
            for task in tasks:
                for row in _trial_task(task):
                    writer.writerow(row)
                    data_rows.append(row)
                fh.flush()
        for row in _aggregate_rows(data_rows):
            writer.writerow(row)

    n_failed = sum(1 for r in data_rows if not r[col["status"]].startswith("ok"))
    manifest = {
        "build": _build_version,
        "config_sha256": config_hash(config),
        "master_seed": config.master_seed,
        "axis_points": len(axes),
        "trials": config.trials,
        "rows": len(data_rows),
        "failed": n_failed,
        "workers": n_workers,
        "wall_time_s": round(time.perf_counter() - t0, 3),
    }
    with open(out_path + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1)
    return manifest


def config_hash(config: ExperimentConfig) -> str:
    blob = repr(config).encode()
    return hashlib.sha256(blob).hexdigest()
