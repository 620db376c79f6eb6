"""Comparison schemes: no-cancellation decoding, time sharing, coarse
phase quantization, and an active-antenna substitute.

Each scheme reuses the coordinate-ascent machinery where optimization is
involved; evaluation formulas live here.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import fractional, network, optimizer, power_split, beamforming
from .exceptions import EhInfeasible, PsInfeasible, QosInfeasible, SubproblemInfeasible

QUANT_LEVELS = np.array([0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi])


def sud_sinrs(state, channels, params):
    """Every surface decoded against all the others (no cancellation)."""
    order = network.decoding_order(channels, params)
    return network.sinrs(state, channels, params, order, mode="sud")


def sud_wsse(state, channels, params):
    g = sud_sinrs(state, channels, params)
    return float(np.sum(params.weights * np.log2(1.0 + g)))


def run_sud(channels, params, config=None):
    """Optimize with the no-cancellation denominators throughout."""
    config = config or optimizer.BcdConfig()
    return optimizer.run(channels, params, replace(config, mode="sud"))


@dataclass
class TdmaReport:
    wsse: float
    pu_rate: float
    status: str
    outer_iters: int
    report: optimizer.RunReport


def run_tdma(channels, params, config=None):
    """Equal orthogonal slots, one surface backscattering per slot, under a
    single frame-long transmit beam (the primary link is continuous and
    cannot re-point per secondary slot).  The whole frame is optimized
    jointly: per-slot rates carry weight w_j / M, no surface interferes
    with any other, every harvesting floor holds throughout, and the
    protection floor must survive each slot's own leakage."""
    config = config or optimizer.BcdConfig()
    m = channels.m
    if m == 1:
        rep = optimizer.run(channels, params, config)  # one slot is the whole frame
    else:
        shared = replace(params, weights=params.weights / m)
        rep = optimizer.run(channels, shared, replace(config, mode="tdma"))
    return TdmaReport(
        wsse=rep.wsse,
        pu_rate=rep.pu_rate,
        status=rep.status,
        outer_iters=rep.outer_iters,
        report=rep,
    )


def tdma_wsse(channels, params, config=None):
    return run_tdma(channels, params, config).wsse


def quantize_2bit(phi):
    """Snap each phase to the nearest of {0, pi/2, pi, 3pi/2}; ties go to
    the smaller level. Idempotent."""
    ang = np.angle(phi)  # (-pi, pi]
    diff = ang[:, None] - QUANT_LEVELS[None, :]
    dist = np.abs((diff + np.pi) % (2.0 * np.pi) - np.pi)
    # argmin returns the first minimum, and levels are sorted ascending,
    # so exact ties already land on the smaller level
    return np.exp(1j * QUANT_LEVELS[np.argmin(dist, axis=1)])


@dataclass
class Quantized2BitReport:
    wsse: float
    pu_rate: float
    status: str
    outer_iters: int
    state: object
    continuous: optimizer.RunReport


def run_proposed_2bit(channels, params, config=None, base=None):
    """Continuous run, then 2-bit phase snapping, split re-optimization,
    and a single repair beam solve if protection broke."""
    config = config or optimizer.BcdConfig()
    base = base or optimizer.run(channels, params, config)
    if base.status == optimizer.INIT_INFEASIBLE:
        return Quantized2BitReport(0.0, 0.0, base.status, 0, None, base)
    order = network.decoding_order(channels, params)
    state = base.final_state.copy()
    state = replace(state, phi=[quantize_2bit(p) for p in state.phi])

    def reoptimize_splits(st):
        aux = fractional.update_aux(st, channels, params, order, config.mode)
        try:
            qp = power_split.build_ps_qp(aux, st, channels, params, order, config.mode)
            return replace(st, delta=power_split.solve_ps(qp, tol=config.ps_tol))
        except (EhInfeasible, QosInfeasible, PsInfeasible):
            return st

    state = reoptimize_splits(state)
    status = base.status
    if not network.constraint_report(state, channels, params).feasible():
        aux = fractional.update_aux(state, channels, params, order, config.mode)
        try:
            res = beamforming.solve_beam(
                aux, state, channels, params, order,
                schedule=config.beam_schedule, inner_tol=config.inner_tol,
                max_inner=config.max_inner, mode=config.mode,
                sdp_tol=config.sdp_tol, sdp_max_iters=config.sdp_max_iters,
                enforce_ascent=False)
            state = reoptimize_splits(replace(state, w=res.w))
        except SubproblemInfeasible:
            pass
        if not network.constraint_report(state, channels, params).feasible():
            return Quantized2BitReport(0.0, network.pu_rate(state, channels, params),
                                       "infeasible", base.outer_iters, state, base)
    return Quantized2BitReport(
        wsse=network.wsse(state, channels, params, order, config.mode),
        pu_rate=network.pu_rate(state, channels, params),
        status=status,
        outer_iters=base.outer_iters,
        state=state,
        continuous=base,
    )


@dataclass
class AaReport:
    wsse: float
    pu_rate: float
    status: str
    zeta: float  # common transmit scaling applied for protection


def aa_noma_wsse(channels, aa, params, p_a):
    """Active-antenna terminals at the surface positions, maximum-ratio
    beams toward the access point, a common power scaling enforcing the
    protection floor, and the transmitter steering its full budget at the
    protected user."""
    m = len(aa.st_ap)
    hp = channels.h_p
    hp2 = float(np.real(np.vdot(hp, hp)))
    w_pt = np.sqrt(params.p) * hp / np.sqrt(hp2)
    theta = 2.0 ** params.r_th - 1.0

    units = [v / np.linalg.norm(v) for v in aa.st_ap]
    leak = np.array([abs(np.vdot(aa.st_pu[j], units[j])) ** 2 for j in range(m)])
    margin = params.p * hp2 / theta - params.sigma2
    if margin <= 0.0:
        return AaReport(0.0, float(np.log2(1.0 + params.p * hp2 / params.sigma2)),
                        "infeasible", 0.0)
    total_leak = p_a * float(np.sum(leak))
    zeta = 1.0 if total_leak <= 0.0 else min(1.0, margin / total_leak)

    s = zeta * p_a * np.array([float(np.real(np.vdot(v, v))) for v in aa.st_ap])
    d0 = abs(np.vdot(channels.h, w_pt)) ** 2 + params.sigma2
    order = np.argsort(-s, kind="stable")
    gam = np.empty(m)
    s_pos = s[order]
    tail = np.concatenate([np.cumsum(s_pos[::-1])[::-1][1:], [0.0]])
    gam[order] = s_pos / (tail + d0)
    wsse = float(np.sum(params.weights * np.log2(1.0 + gam)))
    pu = float(np.log2(1.0 + params.p * hp2 / (zeta * total_leak + params.sigma2)))
    return AaReport(wsse, pu, "converged", float(zeta))
