"""Block-coordinate ascent over auxiliaries, phases, beam, and splits.

Per outer pass: closed-form auxiliary update (tight surrogate), the two
lifted SDP subproblems with their penalty loops, then the splitting QP.
Every block either improves the surrogate or keeps its previous value,
and the auxiliary update collapses the surrogate back onto the true
objective, so the reported objective trace is monotone nondecreasing.
The outer loop stops on relative improvement below outer_rel_tol (with
an absolute floor for flat traces).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import fractional, network, power_split, reflection, beamforming
from .exceptions import (EhInfeasible, InitInfeasible, PsInfeasible,
                         QosInfeasible, SubproblemInfeasible)
from .network import LOG2, NetworkState
from .reflection import PenaltySchedule

CONVERGED = "converged"
MAX_OUTER = "max_outer"
INIT_INFEASIBLE = "init_infeasible"


@dataclass
class BcdConfig:
    outer_rel_tol: float = 0.01
    outer_abs_tol: float = 1e-6
    max_outer: int = 50
    inner_tol: float = 1e-4
    max_inner: int = 30
    refl_schedule: PenaltySchedule = field(default_factory=PenaltySchedule)
    beam_schedule: PenaltySchedule = field(default_factory=PenaltySchedule)
    init_delta_fraction: float = 0.9
    sdp_tol: float = 3e-6
    sdp_max_iters: int = 4000
    ps_tol: float = 1e-9
    mode: str = "noma"


@dataclass
class RunReport:
    wsse_trace: np.ndarray      # bits/s/Hz, entry 0 is the starting point
    final_state: NetworkState | None
    final_rates: np.ndarray | None
    pu_rate: float
    iteration_counts: tuple     # (outer, [phase inners], [beam inners])
    constraint_report: object
    status: str
    fp_gap_max: float = 0.0     # |f1 at fresh auxiliaries - true objective|, nats
    refl_gap_max: float = 0.0   # worst lifted rank-one gap ratio seen
    beam_gap_max: float = 0.0

    @property
    def wsse(self):
        return float(self.wsse_trace[-1]) if len(self.wsse_trace) else 0.0

    @property
    def outer_iters(self):
        return self.iteration_counts[0]


def _delta_caps(w, channels, params):
    mu_k = params.mu * channels.k
    caps = np.empty(channels.m)
    for j in range(channels.m):
        fw = channels.F[j] @ w
        fw2 = float(np.real(np.vdot(fw, fw)))
        ratio = mu_k / (params.chi * fw2) if fw2 > 0.0 else np.inf
        if ratio >= 1.0:
            raise InitInfeasible("harvesting floor exceeds incident power at the probe beam")
        caps[j] = np.sqrt(1.0 - ratio)
    return caps


def initialize(channels, params, config=None):
    """Feasible starting point: probe beam, all-ones phases, splits at a
    fixed fraction of their harvesting caps; one feasibility-only beam
    solve repairs the protection constraint when the probe violates it."""
    config = config or BcdConfig()
    slotted = config.mode == "tdma"
    w0 = network.init_beamformer(params.p, channels.n)
    phi0 = [np.ones(channels.k, dtype=complex) for _ in range(channels.m)]

    def splits_for(w):
        caps = _delta_caps(w, channels, params)
        return np.clip(config.init_delta_fraction * caps,
                       power_split.DELTA_LO, power_split.DELTA_HI)

    state = NetworkState(w=w0, phi=phi0, delta=splits_for(w0))
    if network.constraint_report(state, channels, params, slotted).feasible():
        return state
    order = network.decoding_order(channels, params)
    aux0 = fractional.AuxVars(alpha=np.full(channels.m, fractional.ALPHA_FLOOR),
                              beta=np.zeros(channels.m, dtype=complex))
    try:
        res = beamforming.solve_beam(
            aux0, state, channels, params, order,
            schedule=config.beam_schedule, inner_tol=config.inner_tol,
            max_inner=config.max_inner, mode=config.mode,
            sdp_tol=config.sdp_tol, sdp_max_iters=config.sdp_max_iters,
            enforce_ascent=False)
    except SubproblemInfeasible as exc:
        raise InitInfeasible(str(exc)) from exc
    state = NetworkState(w=res.w, phi=phi0, delta=splits_for(res.w))
    if not network.constraint_report(state, channels, params, slotted).feasible():
        raise InitInfeasible("protection floor unreachable from the probe start")
    return state


def run(channels, params, config=None, initial_state=None):
    """Full coordinate-ascent run for one drop; returns the report."""
    config = config or BcdConfig()
    order = network.decoding_order(channels, params)
    if initial_state is not None:
        state = initial_state.copy()
    else:
        try:
            state = initialize(channels, params, config)
        except InitInfeasible:
            return RunReport(
                wsse_trace=np.zeros(0), final_state=None, final_rates=None,
                pu_rate=0.0, iteration_counts=(0, [], []), constraint_report=None,
                status=INIT_INFEASIBLE)

    mode = config.mode
    trace = [network.wsse(state, channels, params, order, mode)]
    i2, i3 = [], []
    warm_refl = warm_beam = None
    fp_gap_max = refl_gap_max = beam_gap_max = 0.0
    status = MAX_OUTER
    for _ in range(config.max_outer):
        # a stalled pass must be confirmed cold: warm-start state carried
        # from before a large move can park the splitting solver on a
        # plateau, and stopping there would mistake that for a fixed point
        cold_pass = warm_refl is None and warm_beam is None
        aux = fractional.update_aux(state, channels, params, order, mode)
        f_now = fractional.f1(aux, state, channels, params, order, mode)
        fp_gap_max = max(fp_gap_max, abs(f_now - trace[-1] * LOG2))

        try:
            rres = reflection.solve_reflection(
                aux, state, channels, params, order,
                schedule=config.refl_schedule, inner_tol=config.inner_tol,
                max_inner=config.max_inner, mode=mode,
                sdp_tol=config.sdp_tol, sdp_max_iters=config.sdp_max_iters,
                warm=warm_refl)
            state = replace(state, phi=rres.phi)
            warm_refl = rres.warm
            i2.append(rres.inner_iters)
            refl_gap_max = max(refl_gap_max, float(np.max(rres.gap_ratios)))
        except SubproblemInfeasible:
            i2.append(0)

        try:
            bres = beamforming.solve_beam(
                aux, state, channels, params, order,
                schedule=config.beam_schedule, inner_tol=config.inner_tol,
                max_inner=config.max_inner, mode=mode,
                sdp_tol=config.sdp_tol, sdp_max_iters=config.sdp_max_iters,
                warm=warm_beam)
            state = replace(state, w=bres.w)
            warm_beam = bres.warm
            i3.append(bres.inner_iters)
            beam_gap_max = max(beam_gap_max, bres.gap_ratio)
        except SubproblemInfeasible:
            i3.append(0)

        try:
            qp = power_split.build_ps_qp(aux, state, channels, params, order, mode)
            cand = replace(state, delta=power_split.solve_ps(qp, tol=config.ps_tol))
            f_old = fractional.f1(aux, state, channels, params, order, mode)
            f_new = fractional.f1(aux, cand, channels, params, order, mode)
            if f_new >= f_old - 1e-9:
                state = cand
        except (EhInfeasible, QosInfeasible, PsInfeasible):
            pass

        r_new = network.wsse(state, channels, params, order, mode)
        gain = r_new - trace[-1]
        trace.append(r_new)
        if abs(gain) <= max(config.outer_rel_tol * abs(trace[-2]), config.outer_abs_tol):
            if cold_pass:
                status = CONVERGED
                break
            warm_refl = warm_beam = None

    slotted = mode == "tdma"
    return RunReport(
        wsse_trace=np.array(trace),
        final_state=state,
        final_rates=network.rates(state, channels, params, order, mode),
        pu_rate=network.pu_rate(state, channels, params, slotted),
        iteration_counts=(len(i2), i2, i3),
        constraint_report=network.constraint_report(state, channels, params, slotted),
        status=status,
        fp_gap_max=fp_gap_max,
        refl_gap_max=refl_gap_max,
        beam_gap_max=beam_gap_max,
    )
