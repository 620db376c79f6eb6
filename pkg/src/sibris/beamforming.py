"""Transmit-beam subproblem: lifted SDP with a rank-one penalty loop.

Mirror of the phase step.  With phases, splits, and auxiliaries frozen,
write xi_j = delta_j g_j^H diag(phi_j) F_j so the cascades become linear
in w, append a unit entry (w_hat = [w; 1]) and lift to W = w_hat w_hat^H.
All surrogate terms and constraints are then traces:

    2 Re{conj(beta_j) xi_j w}  = Tr(NJ_j W)     (off-diagonal block)
    |xi_j w|^2                 = Tr(MJ_j W)
    ||F_j w||^2                = Tr(TJ_j W)     (harvesting lower bound)
    |h^H w|^2, |h_p^H w|^2     = Tr(HH W), Tr(HP W)
    ||w||^2                    = Tr(XI W)       (power budget)

plus the corner pin W[N, N] = 1.  The relaxation is solved first and its
optimum is usually rank-one already; only otherwise does the penalized
difference-of-convex loop engage, with the slack kept PSD as a trailing
1x1 block.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import fractional, network
from .exceptions import SubproblemInfeasible
from .reflection import PenaltySchedule, dc_linearization, rank_one_gap
from .sdp import INFEASIBLE, SdpProblem, max_eigpair, solve_sdp


@dataclass
class BeamResult:
    w: np.ndarray
    objective_trace: list
    inner_iters: int
    gap_ratio: float
    upsilon: float
    accepted: bool
    warm: dict | None


def build_beam_matrices(aux, state, channels, params):
    """Lifted (N+1)-dim coefficient matrices for the beam program."""
    n = channels.n
    nj, mj, mp, tj = [], [], [], []
    for j in range(channels.m):
        xi = state.delta[j] * (np.conj(channels.g[j]) * state.phi[j]) @ channels.F[j]
        xi_p = state.delta[j] * (np.conj(channels.g_p[j]) * state.phi[j]) @ channels.F[j]
        row = np.conj(aux.beta[j]) * xi
        a = np.zeros((n + 1, n + 1), dtype=complex)
        a[n, :n] = row
        a[:n, n] = row.conj()
        nj.append(a)
        b = np.zeros((n + 1, n + 1), dtype=complex)
        b[:n, :n] = np.outer(xi.conj(), xi)
        mj.append(b)
        c = np.zeros((n + 1, n + 1), dtype=complex)
        c[:n, :n] = np.outer(xi_p.conj(), xi_p)
        mp.append(c)
        t = np.zeros((n + 1, n + 1), dtype=complex)
        t[:n, :n] = channels.F[j].conj().T @ channels.F[j]
        tj.append(t)
    hh = np.zeros((n + 1, n + 1), dtype=complex)
    hh[:n, :n] = np.outer(channels.h, channels.h.conj())
    hp = np.zeros((n + 1, n + 1), dtype=complex)
    hp[:n, :n] = np.outer(channels.h_p, channels.h_p.conj())
    xi_pow = np.zeros((n + 1, n + 1), dtype=complex)
    xi_pow[:n, :n] = np.eye(n)
    return nj, mj, mp, tj, hh, hp, xi_pow


def extract_beam(w_hat, n):
    """Principal eigenvector normalized by its last entry; None when the
    corner entry has collapsed and no direction can be read off."""
    _, v = max_eigpair(w_hat)
    if abs(v[n]) < 1e-12:
        return None
    v = v / v[n]
    return v[:n]


def solve_beam(aux, state, channels, params, order, schedule=None,
               inner_tol=1e-4, max_inner=30, mode="noma",
               sdp_tol=3e-6, sdp_max_iters=20000, warm=None,
               enforce_ascent=True, relax_gap_tol=1e-4):
    """Relaxation solve, rank-one repair if needed, then extraction.

    Extraction repair: the candidate beam is rescaled into the power ball
    first; if harvesting or protection is then violated (1e-6 relative) —
    or the surrogate would decrease while enforce_ascent is set — the
    incoming beam is kept.  enforce_ascent=False is for feasibility
    repair from an infeasible starting point, where there is nothing to
    preserve.
    """
    schedule = schedule or PenaltySchedule()
    nn = channels.n
    slotted = mode == "tdma"
    warm = dict(warm) if warm else {"relax": None, "pen": None}

    nj, mj, mp, tj, hh, hp, xi_pow = build_beam_matrices(aux, state, channels, params)
    coef = fractional.cumulative_weights(aux.beta, order, mode)
    sq = np.sqrt(params.weights * (1.0 + aux.alpha))
    theta = 2.0 ** params.r_th - 1.0
    mu_k = params.mu * channels.k

    c_top = sum(sq[j] * nj[j] for j in range(channels.m))
    c_top = c_top - sum(coef[j] * mj[j] for j in range(channels.m))
    c_top = c_top - float(np.sum(np.abs(aux.beta) ** 2)) * hh

    corner1 = np.zeros((nn + 1, nn + 1), dtype=complex)
    corner1[nn, nn] = 1.0
    ineqs1 = [(xi_pow, params.p)]
    for j in range(channels.m):
        lift_gain = params.chi * (1.0 - state.delta[j] ** 2)
        ineqs1.append((-tj[j], -mu_k / lift_gain))
    if slotted:
        # orthogonal slots: the floor must hold against each leakage alone
        for j in range(channels.m):
            ineqs1.append((theta * mp[j] - hp, -theta * params.sigma2))
    else:
        ineqs1.append((theta * sum(mp) - hp, -theta * params.sigma2))

    sol = solve_sdp(SdpProblem(nn + 1, c_top, [(corner1, 1.0)], ineqs1,
                               blocks=[nn + 1]),
                    tol=sdp_tol, max_iters=sdp_max_iters, warm_start=warm["relax"])
    if sol.status == INFEASIBLE:
        raise SubproblemInfeasible("lifted beam program reported infeasible")
    warm["relax"] = sol.warm
    what_mat = sol.X
    trace = [sol.objective_value]
    upsilon = 0.0
    gap = rank_one_gap(what_mat) / max(float(np.real(np.trace(what_mat))), 1e-30)

    if gap > relax_gap_tol:
        # rank-one repair: escalating penalty on the linearized DC surface.
        # The weight starts proportional to the relaxed objective so the
        # slack term is never lost in the solver noise, and the loop runs
        # until the gap closes — objective stagnation alone only counts
        # once the weight is maxed out.
        dim = nn + 2
        blocks = [nn + 1, 1]
        tail = nn + 1

        def pad(a):
            out = np.zeros((dim, dim), dtype=complex)
            out[:nn + 1, :nn + 1] = a
            return out

        eqs = [(pad(corner1), 1.0)]
        base_ineqs = [(pad(a), b) for a, b in ineqs1]
        rho = schedule.rho0 * max(1.0, abs(trace[0]))
        obj_prev = float(np.real(np.trace(c_top @ what_mat)))
        for _ in range(max_inner - 1):
            lam_max, proj = dc_linearization(what_mat)
            dmat = np.zeros((dim, dim), dtype=complex)
            dmat[:nn + 1, :nn + 1] = np.eye(nn + 1) - proj
            dmat[tail, tail] = -1.0
            rhs = lam_max - float(np.real(np.trace(proj @ what_mat)))
            c = pad(c_top)
            c[tail, tail] = -rho
            sol = solve_sdp(SdpProblem(dim, c, eqs, base_ineqs + [(dmat, rhs)],
                                       blocks=blocks),
                            tol=sdp_tol, max_iters=sdp_max_iters,
                            warm_start=warm["pen"])
            if sol.status == INFEASIBLE:
                raise SubproblemInfeasible("lifted beam program reported infeasible")
            warm["pen"] = sol.warm
            what_mat = sol.X[:nn + 1, :nn + 1].copy()
            upsilon = sol.X[tail, tail].real
            trace.append(sol.objective_value)
            gap = rank_one_gap(what_mat) / max(float(np.real(np.trace(what_mat))), 1e-30)
            if gap <= relax_gap_tol:
                break
            if (rho >= schedule.rho_max
                    and abs(sol.objective_value - obj_prev)
                    <= inner_tol * max(1.0, abs(obj_prev))):
                break
            rho = min(schedule.growth * rho, schedule.rho_max)
            obj_prev = sol.objective_value
        gap = rank_one_gap(what_mat) / max(float(np.real(np.trace(what_mat))), 1e-30)

    new_w = extract_beam(what_mat, nn)
    ok = new_w is not None
    if ok:
        nrm2 = float(np.real(np.vdot(new_w, new_w)))
        if nrm2 > params.p:
            new_w = new_w * np.sqrt(params.p / nrm2)
        cand = replace(state, w=new_w)
        ok = network.constraint_report(cand, channels, params, slotted).feasible()
        if ok and enforce_ascent:
            f_old = fractional.f1(aux, state, channels, params, order, mode)
            f_new = fractional.f1(aux, cand, channels, params, order, mode)
            ok = f_new >= f_old - 1e-9
    if not ok:
        new_w = state.w.copy()
    return BeamResult(
        w=new_w,
        objective_trace=trace,
        inner_iters=len(trace),
        gap_ratio=gap,
        upsilon=float(upsilon),
        accepted=bool(ok),
        warm=warm,
    )
