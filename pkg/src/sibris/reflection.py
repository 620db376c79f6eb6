"""Phase-vector subproblem: lifted SDP with a rank-one penalty loop.

With w, delta, and the auxiliaries frozen, the surrogate is a quadratic
form in each phase vector.  Appending a unit entry, phi_hat = [phi; 1],
and lifting to PHI = phi_hat phi_hat^H turns every term into a trace:

    2 sqrt(w_j (1+a_j)) Re{conj(beta_j) eps_j phi_j} = Tr(LAM_j PHI_j)
    |eps_j phi_j|^2                                  = Tr(OM_j  PHI_j)

with eps_j = delta_j g_j^H diag(F_j w) (and the protected-user analog
for the leakage).  The lifted program over all surfaces is one joint
block-diagonal SDP with unit diagonals.

The relaxation is solved as-is first; in this problem family its optimum
is almost always rank-one already, and then the phases can be read off
directly.  Only when the relaxed optimum is not rank-one does the
difference-of-convex loop engage: Tr(PHI) - lam_max(PHI) <= 0 linearized
at the previous iterate and exchanged for a penalized slack eta >= 0
whose weight escalates geometrically, slacks riding along as extra 1x1
blocks so their nonnegativity comes from the cone itself.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import fractional, network
from .exceptions import SubproblemInfeasible
from .sdp import INFEASIBLE, SdpProblem, max_eigpair, solve_sdp


@dataclass
class PenaltySchedule:
    rho0: float = 1e-3
    growth: float = 10.0
    rho_max: float = 1e6


@dataclass
class ReflectionResult:
    phi: list
    objective_trace: list
    inner_iters: int
    gap_ratios: np.ndarray  # (Tr - lam_max) / Tr per lifted block, pre-extraction
    eta: np.ndarray
    accepted: bool
    warm: dict | None


def build_lift_matrices(aux, state, channels, params):
    """Per-surface (LAM_j, OM_j, OM_pj), each (K+1) x (K+1)."""
    k = channels.k
    sq = np.sqrt(params.weights * (1.0 + aux.alpha))
    lams, oms, omps = [], [], []
    for j in range(channels.m):
        fw = channels.F[j] @ state.w
        eps = state.delta[j] * np.conj(channels.g[j]) * fw       # row of g^H diag(Fw)
        eps_p = state.delta[j] * np.conj(channels.g_p[j]) * fw
        row = sq[j] * np.conj(aux.beta[j]) * eps
        lam = np.zeros((k + 1, k + 1), dtype=complex)
        lam[k, :k] = row
        lam[:k, k] = row.conj()
        om = np.zeros((k + 1, k + 1), dtype=complex)
        om[:k, :k] = np.outer(eps.conj(), eps)
        omp = np.zeros((k + 1, k + 1), dtype=complex)
        omp[:k, :k] = np.outer(eps_p.conj(), eps_p)
        lams.append(lam)
        oms.append(om)
        omps.append(omp)
    return lams, oms, omps


def rank_one_gap(x):
    """Tr(x) - lam_max(x); zero exactly on rank-one PSD matrices."""
    lam, _ = max_eigpair(x)
    return float(np.real(np.trace(x))) - lam


def dc_linearization(x):
    """(lam_max, v v^H) at the expansion point: the tangent minorant of
    lam_max is Tr(v v^H .)."""
    lam, v = max_eigpair(x)
    return lam, np.outer(v, v.conj())


def _lift(phi):
    ph = np.concatenate([phi, [1.0 + 0.0j]])
    return np.outer(ph, ph.conj())


def _embed(n, ofs, block):
    out = np.zeros((n, n), dtype=complex)
    b = block.shape[0]
    out[ofs:ofs + b, ofs:ofs + b] = block
    return out


def extract_phases(phi_hat, k):
    """Principal eigenvector, normalized by its last entry, then projected
    entrywise onto the unit circle."""
    _, v = max_eigpair(phi_hat)
    if abs(v[k]) > 1e-12:
        v = v / v[k]
    return np.exp(1j * np.angle(v[:k]))


def _gap_ratios(phi_hat):
    traces = np.array([max(float(np.real(np.trace(ph))), 1e-30) for ph in phi_hat])
    return np.array([rank_one_gap(ph) for ph in phi_hat]) / traces


def solve_reflection(aux, state, channels, params, order, schedule=None,
                     inner_tol=1e-4, max_inner=30, mode="noma",
                     sdp_tol=3e-6, sdp_max_iters=20000, warm=None,
                     relax_gap_tol=1e-4):
    """Relaxation solve, rank-one repair if needed, then extraction.

    The extracted phases are accepted only when the resulting state stays
    feasible (relative slack 1e-6) and does not lower the surrogate; both
    gates fall back to the incoming phi, which keeps every outer pass an
    ascent step.
    """
    schedule = schedule or PenaltySchedule()
    m, k = channels.m, channels.k
    kp = k + 1
    n1 = m * kp
    warm = dict(warm) if warm else {"relax": None, "pen": None}

    theta = 2.0 ** params.r_th - 1.0
    qos_rhs = abs(np.vdot(channels.h_p, state.w)) ** 2 / theta - params.sigma2
    if qos_rhs <= 0.0:
        raise SubproblemInfeasible("protection floor unreachable for the current beam")

    lams, oms, omps = build_lift_matrices(aux, state, channels, params)
    coef = fractional.cumulative_weights(aux.beta, order, mode)

    slotted = mode == "tdma"
    c1 = np.zeros((n1, n1), dtype=complex)
    qos1 = np.zeros((n1, n1), dtype=complex)
    eqs1 = []
    for j in range(m):
        ofs = j * kp
        c1[ofs:ofs + kp, ofs:ofs + kp] = lams[j] - coef[j] * oms[j]
        qos1[ofs:ofs + kp, ofs:ofs + kp] = omps[j]
        for d in range(kp):
            e = np.zeros((n1, n1), dtype=complex)
            e[ofs + d, ofs + d] = 1.0
            eqs1.append((e, 1.0))
    if slotted:
        # orthogonal slots: each surface leaks alone, one cap per slot
        qos_ineqs1 = [(_embed(n1, j * kp, omps[j]), qos_rhs) for j in range(m)]
    else:
        qos_ineqs1 = [(qos1, qos_rhs)]

    sol = solve_sdp(SdpProblem(n1, c1, eqs1, qos_ineqs1, blocks=[kp] * m),
                    tol=sdp_tol, max_iters=sdp_max_iters, warm_start=warm["relax"])
    if sol.status == INFEASIBLE:
        raise SubproblemInfeasible("lifted phase program reported infeasible")
    warm["relax"] = sol.warm
    phi_hat = [sol.X[j * kp:(j + 1) * kp, j * kp:(j + 1) * kp].copy() for j in range(m)]
    trace = [sol.objective_value]
    eta = np.zeros(m)
    gaps = _gap_ratios(phi_hat)

    if float(np.max(gaps)) > relax_gap_tol:
        # rank-one repair: escalating penalty on the linearized DC surface.
        # The weight starts proportional to the relaxed objective so the
        # slack term is never lost in the solver noise, and the loop runs
        # until the gap closes — objective stagnation alone only counts
        # once the weight is maxed out.
        n = n1 + m
        blocks = [kp] * m + [1] * m
        tail0 = n1
        c_static = _embed(n, 0, c1)
        qos_pen = [(_embed(n, 0, q), rhs) for q, rhs in qos_ineqs1]
        eqs = [(_embed(n, 0, e), b) for e, b in eqs1]
        rho = schedule.rho0 * max(1.0, abs(trace[0]))
        obj_prev = float(sum(np.real(np.trace(c1[j * kp:(j + 1) * kp, j * kp:(j + 1) * kp]
                                              @ phi_hat[j])) for j in range(m)))
        for _ in range(max_inner - 1):
            ineqs = list(qos_pen)
            for j in range(m):
                lam_max, proj = dc_linearization(phi_hat[j])
                dmat = _embed(n, j * kp, np.eye(kp, dtype=complex) - proj)
                dmat[tail0 + j, tail0 + j] = -1.0
                # tangency makes the right-hand side vanish analytically; keep
                # the literal value so an inexact expansion point stays a
                # valid bound
                rhs = lam_max - float(np.real(np.trace(proj @ phi_hat[j])))
                ineqs.append((dmat, rhs))
            c = c_static.copy()
            for j in range(m):
                c[tail0 + j, tail0 + j] = -rho
            sol = solve_sdp(SdpProblem(n, c, eqs, ineqs, blocks=blocks),
                            tol=sdp_tol, max_iters=sdp_max_iters,
                            warm_start=warm["pen"])
            if sol.status == INFEASIBLE:
                raise SubproblemInfeasible("lifted phase program reported infeasible")
            warm["pen"] = sol.warm
            phi_hat = [sol.X[j * kp:(j + 1) * kp, j * kp:(j + 1) * kp].copy()
                       for j in range(m)]
            eta = np.array([sol.X[tail0 + j, tail0 + j].real for j in range(m)])
            trace.append(sol.objective_value)
            gaps = _gap_ratios(phi_hat)
            if float(np.max(gaps)) <= relax_gap_tol:
                break
            if (rho >= schedule.rho_max
                    and abs(sol.objective_value - obj_prev)
                    <= inner_tol * max(1.0, abs(obj_prev))):
                break
            rho = min(schedule.growth * rho, schedule.rho_max)
            obj_prev = sol.objective_value
        gaps = _gap_ratios(phi_hat)

    new_phi = [extract_phases(phi_hat[j], k) for j in range(m)]
    cand = replace(state, phi=new_phi)
    ok = network.constraint_report(cand, channels, params, slotted).feasible()
    if ok:
        f_old = fractional.f1(aux, state, channels, params, order, mode)
        f_new = fractional.f1(aux, cand, channels, params, order, mode)
        ok = f_new >= f_old - 1e-9
    if not ok:
        new_phi = [p.copy() for p in state.phi]
    return ReflectionResult(
        phi=new_phi,
        objective_trace=trace,
        inner_iters=len(trace),
        gap_ratios=gaps,
        eta=eta,
        accepted=ok,
        warm=warm,
    )
