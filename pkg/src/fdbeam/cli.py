"""Command-line front end.

Subcommands: design, eval, bench, sweep, linksim, cut, info.  All numeric
inputs are dB and degrees; conversion happens here, at the boundary.
Exit codes: 0 ok, 1 usage or bad input, 2 infeasible design / failed
trials present.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .channels import draw_channel, make_rng
from .codebooks import CodebookFormatError, load, save, to_matrix
from .designer import DesignError, design
from .geometry import coverage_grid, dense_eval_grid
from .harness import (ExperimentConfig, axis_points, config_hash, link_sweep,
                      make_design_params, run_trial, sweep, worker_count, CSV_COLUMNS)
from .metrics import Cut, average_coupling, coverage, pattern_cut, to_db
from .quantization import realize


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    p = _Parser(prog="fdbeam", description=__doc__)
    p.add_argument("--version", action="version", version=f"fdbeam {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config=True, out=True):
        if config:
            sp.add_argument("--config", required=True, help="experiment config JSON")
        if out:
            sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--seed", type=int, default=None, help="master seed override")
        sp.add_argument("--workers", type=int, default=None,
                        help="worker count (overrides FDBEAM_WORKERS)")
        sp.add_argument("--quiet", action="store_true")

    common(sub.add_parser("design", help="design one codebook pair (first axis point of the config)"))
    sp = sub.add_parser("eval", help="evaluate saved codebooks against a channel")
    sp.add_argument("--codebooks", required=True, help="directory with tx.json/rx.json")
    sp.add_argument("--channel", default=None, help=".npy complex channel file")
    common(sp)
    common(sub.add_parser("bench", help="design vs conventional codebooks"))
    common(sub.add_parser("sweep", help="full Monte Carlo parameter sweep"))
    sp = sub.add_parser("linksim", help="rate vs INR/SNR for saved codebooks")
    sp.add_argument("--codebooks", required=True)
    common(sp)
    sp = sub.add_parser("cut", help="pattern cut of one beam as CSV")
    sp.add_argument("--codebook", required=True, help="codebook JSON file")
    sp.add_argument("--beam", type=int, default=0, help="beam index")
    sp.add_argument("--kind", choices=("azimuth", "elevation"), default="azimuth")
    sp.add_argument("--fixed-deg", type=float, default=0.0,
                    help="fixed angle of the other axis, degrees")
    sp.add_argument("--n-points", type=int, default=361)
    common(sp, config=False)
    sp = sub.add_parser("info", help="validate a config and print its shape")
    sp.add_argument("--config", required=True)
    sp.add_argument("--quiet", action="store_true")
    return p


def _load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_json(args.config)
    if getattr(args, "seed", None) is not None:
        from dataclasses import replace
        cfg = replace(cfg, master_seed=args.seed)
    return cfg


def _say(args, msg: str) -> None:
    if not getattr(args, "quiet", False):
        print(msg)


def _write_csv(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _cmd_design(args) -> int:
    cfg = _load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    axis = axis_points(cfg)[0]
    rng = make_rng(cfg.master_seed, axis.index, 0, 0)
    h = draw_channel(cfg.si_model, cfg.geometry_tx, cfg.geometry_rx, rng)
    try:
        result = design(h, cfg.geometry_tx, cfg.geometry_rx,
                        coverage_grid(cfg.grid_tx), coverage_grid(cfg.grid_rx),
                        make_design_params(cfg, axis))
    except DesignError as exc:
        print(f"fdbeam design: infeasible: {exc}", file=sys.stderr)
        return 2
    save(result.tx_codebook, out / "tx.json")
    save(result.rx_codebook, out / "rx.json")
    np.save(out / "channel.npy", h)
    report = {
        "E_final": result.E_final,
        "E_final_db": to_db(result.E_final),
        "per_beam_gain_tx": result.per_beam_gain_tx.tolist(),
        "per_beam_gain_rx": result.per_beam_gain_rx.tolist(),
        "objective_trace": result.objective_trace.tolist(),
        "coverage_residual_tx": result.coverage_residual_tx,
        "coverage_residual_rx": result.coverage_residual_rx,
        "coverage_residual_tx_preq": result.coverage_residual_tx_preq,
        "coverage_residual_rx_preq": result.coverage_residual_rx_preq,
        "notes": list(result.notes),
        "axis": vars(axis).copy(),
        "master_seed": cfg.master_seed,
        "config_sha256": config_hash(cfg),
    }
    with open(out / "design_report.json", "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=1)
    _say(args, f"designed {result.tx_codebook.size}+{result.rx_codebook.size} beams, "
               f"E = {to_db(result.E_final):.2f} dB -> {out}")
    return 0


def _cmd_eval(args) -> int:
    cfg = _load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cb_dir = Path(args.codebooks)
    tx = load(cb_dir / "tx.json")
    rx = load(cb_dir / "rx.json")
    if args.channel:
        h = np.load(args.channel)
    elif (cb_dir / "channel.npy").exists():
        h = np.load(cb_dir / "channel.npy")
    else:
        h = draw_channel(cfg.si_model, cfg.geometry_tx, cfg.geometry_rx,
                         make_rng(cfg.master_seed, 0, 0, 0))
    rep = average_coupling(to_matrix(rx), h, to_matrix(tx))
    _write_csv(out / "coupling.csv", ["E", "E_db"], [[rep.E, rep.E_db]])
    pair_rows = [[j, i, rep.pair_matrix[j, i]]
                 for j in range(rep.pair_matrix.shape[0])
                 for i in range(rep.pair_matrix.shape[1])]
    _write_csv(out / "pair_matrix.csv", ["rx_beam", "tx_beam", "coupling_power"], pair_rows)
    for name, cb, grid in (("tx", tx, cfg.grid_tx), ("rx", rx, cfg.grid_rx)):
        cov = coverage(cb, dense_eval_grid(grid, cfg.dense_n_az, cfg.dense_n_el))
        rows = [[math.degrees(d.azimuth), math.degrees(d.elevation), g]
                for d, g in zip(cov.directions, cov.gains)]
        _write_csv(out / f"coverage_{name}.csv", ["az_deg", "el_deg", "gain_power"], rows)
        _say(args, f"{name}: median coverage {cov.median_db:.2f} dB")
    _say(args, f"E = {rep.E_db:.2f} dB -> {out}")
    return 0


def _cmd_bench(args) -> int:
    cfg = _load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    failed = 0
    for axis in axis_points(cfg):
        for seed in range(cfg.trials):
            for rec in run_trial(cfg, axis, seed):
                rows.append(rec.to_row())
                failed += 0 if rec.status.startswith("ok") else 1
    _write_csv(out / "bench.csv", CSV_COLUMNS, rows)
    _say(args, f"{len(rows)} rows -> {out / 'bench.csv'}")
    return 2 if failed else 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = sweep(cfg, out / "sweep.csv", workers=worker_count(args.workers))
    _say(args, f"{manifest['rows']} rows ({manifest['failed']} failed) "
               f"in {manifest['wall_time_s']}s -> {out / 'sweep.csv'}")
    return 2 if manifest["failed"] else 0


def _cmd_linksim(args) -> int:
    cfg = _load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cb_dir = Path(args.codebooks)
    tx = load(cb_dir / "tx.json")
    rx = load(cb_dir / "rx.json")
    if (cb_dir / "channel.npy").exists():
        h = np.load(cb_dir / "channel.npy")
    else:
        h = draw_channel(cfg.si_model, cfg.geometry_tx, cfg.geometry_rx,
                         make_rng(cfg.master_seed, 0, 0, 0))
    rows = link_sweep(cfg, tx, rx, h)
    header = ["snr_db", "inr_db", "r_tx", "r_rx", "sum_rate", "c_fd", "c_hd"]
    _write_csv(out / "rates.csv", header, [[r[k] for k in header] for r in rows])
    _say(args, f"{len(rows)} rate points -> {out / 'rates.csv'}")
    return 0


def _cmd_cut(args) -> int:
    cb = load(args.codebook)
    if not 0 <= args.beam < cb.size:
        print(f"fdbeam cut: beam index {args.beam} out of range [0, {cb.size})",
              file=sys.stderr)
        return 1
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cut = Cut(kind=args.kind, fixed=math.radians(args.fixed_deg))
    angles, gains = pattern_cut(realize(cb.beams[args.beam]), cb.geometry,
                                cut, args.n_points)
    rows = [[math.degrees(a), g, to_db(g)] for a, g in zip(angles, gains)]
    _write_csv(out / "cut.csv", ["angle_deg", "gain_power", "gain_db"], rows)
    _say(args, f"{args.kind} cut of beam {args.beam} -> {out / 'cut.csv'}")
    return 0


def _cmd_info(args) -> int:
    cfg = ExperimentConfig.from_json(args.config)
    dirs_tx = coverage_grid(cfg.grid_tx)
    dirs_rx = coverage_grid(cfg.grid_rx)
    print(json.dumps({
        "version": __version__,
        "config_sha256": config_hash(cfg),
        "nt": cfg.geometry_tx.n_elements,
        "nr": cfg.geometry_rx.n_elements,
        "m_tx": len(dirs_tx),
        "m_rx": len(dirs_rx),
        "axis_points": len(axis_points(cfg)),
        "trials": cfg.trials,
        "model": getattr(cfg.si_model, "kind", "custom"),
    }, indent=1))
    return 0


_COMMANDS = {
    "design": _cmd_design,
    "eval": _cmd_eval,
    "bench": _cmd_bench,
    "sweep": _cmd_sweep,
    "linksim": _cmd_linksim,
    "cut": _cmd_cut,
    "info": _cmd_info,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (OSError, json.JSONDecodeError, CodebookFormatError, ValueError) as exc:
        print(f"fdbeam {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
