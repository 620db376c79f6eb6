"""Monte-Carlo harness: sweep x drop grid, per-scheme rows, CSV output.

Per-drop seeds are master_seed XOR drop index, so a drop sees identical
geometry and fading across sweep values (paired comparisons), and reruns
with the same master seed reproduce every number except wall_ms.
"""

from __future__ import annotations

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import baselines, channel, optimizer
from .config import dbm_to_watts

CSV_COLUMNS = ("scheme", "sweep_var", "sweep_value", "drop", "seed",
               "wsse_bps_hz", "pu_rate_bps_hz", "status", "outer_iters", "wall_ms")

_U64 = (1 << 64) - 1


@dataclass
class ResultRow:
    scheme: str
    sweep_var: str
    sweep_value: float
    drop: int
    seed: int
    wsse_bps_hz: float
    pu_rate_bps_hz: float
    status: str
    outer_iters: int
    wall_ms: float


def drop_seed(master_seed, drop):
    return (int(master_seed) ^ int(drop)) & _U64


def apply_sweep(scenario, params, var, value):
    """Return (scenario, params) with one knob turned."""
    if var == "none":
        return scenario, params
    if var == "K":
        return replace(scenario, elements_per_ris=int(value)), params
    if var == "N":
        return replace(scenario, n_pt_antennas=int(value)), params
    if var == "M":
        return replace(scenario, n_ris=int(value)), params.with_m(int(value))
    if var == "P_dbm":
        return scenario, replace(params, p=dbm_to_watts(value))
    if var == "r_th":
        return scenario, replace(params, r_th=float(value))
    raise ValueError(f"unknown sweep variable {var!r}")


def _run_cell(args):
    """All scheme rows for one (sweep value, drop) cell."""
    template, params, schemes, sweep_var, value, drop, seed, bcd = args
    scenario = channel.draw_scenario(template, seed)
    channels = channel.draw_channels(scenario, seed)
    rows = []
    proposed_report = None
    for scheme in schemes:
        t0 = time.perf_counter()
        if scheme == "proposed":
            rep = optimizer.run(channels, params, bcd)
            proposed_report = rep
            out = (rep.wsse, rep.pu_rate, rep.status, rep.outer_iters)
        elif scheme == "sud":
            rep = baselines.run_sud(channels, params, bcd)
            out = (rep.wsse, rep.pu_rate, rep.status, rep.outer_iters)
        elif scheme == "tdma":
            rep = baselines.run_tdma(channels, params, bcd)
            out = (rep.wsse, rep.pu_rate, rep.status, rep.outer_iters)
        elif scheme == "proposed_2bit":
            rep = baselines.run_proposed_2bit(channels, params, bcd, base=proposed_report)
            out = (rep.wsse, rep.pu_rate, rep.status, rep.outer_iters)
        elif scheme.startswith("aa_noma@"):
            p_a = dbm_to_watts(float(scheme.split("@", 1)[1]))
            aa = channel.draw_aa_channels(scenario, seed)
            rep = baselines.aa_noma_wsse(channels, aa, params, p_a)
            out = (rep.wsse, rep.pu_rate, rep.status, 0)
        else:
            raise ValueError(f"unknown scheme {scheme!r}")
        wall = (time.perf_counter() - t0) * 1e3
        rows.append(ResultRow(scheme, sweep_var, float(value), drop, seed,
                              out[0], out[1], out[2], out[3], wall))
    return rows


def run_experiment(config, jobs=1, out_path=None, master_seed=None, bcd=None):
    """Run the full grid and write the CSV; returns (rows, path)."""
    bcd = bcd or optimizer.BcdConfig()
    seed0 = config.master_seed if master_seed is None else master_seed
    values = config.sweep_values if config.sweep_var != "none" else [0.0]
    tasks = []
    for value in values:
        scenario, params = apply_sweep(config.scenario, config.params,
                                       config.sweep_var, value)
        for drop in range(config.n_drops):
            tasks.append((scenario, params, list(config.schemes), config.sweep_var,
                          value, drop, drop_seed(seed0, drop), bcd))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_run_cell, tasks))
    else:
        cells = [_run_cell(t) for t in tasks]
    rows = [row for cell in cells for row in cell]
    path = out_path or config.output_path
    write_csv(rows, path)
    return rows, path


def _fmt(x):
    if isinstance(x, float):
        return format(x, ".10g")
    return str(x)


def write_csv(rows, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow([r.scheme, r.sweep_var, _fmt(r.sweep_value), r.drop,
                             r.seed, _fmt(r.wsse_bps_hz), _fmt(r.pu_rate_bps_hz),
                             r.status, r.outer_iters, _fmt(r.wall_ms)])
    return path


def run_trace(config, out_path=None, master_seed=None, bcd=None):
    """Per-iteration objective rows for convergence plots: same columns,
    sweep_var='iter', sweep_value = outer iteration index (0 = start)."""
    bcd = bcd or optimizer.BcdConfig()
    seed0 = config.master_seed if master_seed is None else master_seed
    scheme = config.schemes[0] if config.schemes else "proposed"
    if scheme not in ("proposed", "sud"):
        scheme = "proposed"
    rows = []
    for drop in range(config.n_drops):
        seed = drop_seed(seed0, drop)
        scenario = channel.draw_scenario(config.scenario, seed)
        channels = channel.draw_channels(scenario, seed)
        t0 = time.perf_counter()
        if scheme == "sud":
            rep = baselines.run_sud(channels, config.params, bcd)
        else:
            rep = optimizer.run(channels, config.params, bcd)
        wall = (time.perf_counter() - t0) * 1e3
        for t, val in enumerate(rep.wsse_trace):
            rows.append(ResultRow(scheme, "iter", float(t), drop, seed, float(val),
                                  rep.pu_rate, rep.status, t, wall))
    path = out_path or config.output_path
    write_csv(rows, path)
    return rows, path
