"""Splitting-ratio subproblem: separable concave QP under a box and one
quadratic coupling constraint.

With w, phi, and the auxiliaries frozen the surrogate reduces to
sum_j a_j d_j - sum_j c_j d_j^2 over d in [lo, hi_j] with
sum_j k_j d_j^2 <= C (the protection ellipsoid).  The harvesting floor
gives the per-surface upper bound hi_j = sqrt(1 - mu K / (chi ||F_j w||^2)).
Dualize the single coupling constraint: for multiplier lam >= 0 the
coordinate maximizer is a clipped ratio, and the constraint value is
nonincreasing in lam, so a bisection pins the KKT point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fractional
from .exceptions import EhInfeasible, PsInfeasible, QosInfeasible

DELTA_LO = 1e-6
DELTA_HI = 1.0 - 1e-6


@dataclass
class PsQp:
    a: np.ndarray          # linear coefficients
    c: np.ndarray          # quadratic coefficients, >= 0
    box_upper: np.ndarray  # harvesting-floor caps, before the global HI clamp
    qos_k: np.ndarray      # ellipsoid weights, >= 0
    qos_c: float           # ellipsoid radius


def build_ps_qp(aux, state, channels, params, order, mode="noma"):
    """Assemble the QP data at the current beam and phases."""
    m = channels.m
    sq = np.sqrt(params.weights * (1.0 + aux.alpha))
    coef = fractional.cumulative_weights(aux.beta, order, mode)
    t = np.empty(m, dtype=complex)
    tp = np.empty(m, dtype=complex)
    fw2 = np.empty(m)
    for j in range(m):
        fw = channels.F[j] @ state.w
        t[j] = np.vdot(channels.g[j], fw * state.phi[j])
        tp[j] = np.vdot(channels.g_p[j], fw * state.phi[j])
        fw2[j] = float(np.real(np.vdot(fw, fw)))
    mu_k = params.mu * channels.k
    if np.any(fw2 <= 0.0):
        raise EhInfeasible("a surface receives no power from the current beam")
    ratio = mu_k / (params.chi * fw2)
    if np.any(ratio >= 1.0):
        raise EhInfeasible("harvesting floor exceeds the incident power")
    theta = 2.0 ** params.r_th - 1.0
    qos_c = abs(np.vdot(channels.h_p, state.w)) ** 2 / theta - params.sigma2
    if qos_c <= 0.0:
        raise QosInfeasible("protection floor unreachable for the current beam")
    box_upper = np.sqrt(np.maximum(1.0 - ratio, 0.0))
    qos_k = np.abs(tp) ** 2
    if mode == "tdma":
        # orthogonal slots decouple the protection constraint: each surface
        # leaks alone, so the ellipsoid collapses to per-coordinate caps
        bind = qos_k > 0.0
        box_upper[bind] = np.minimum(box_upper[bind], np.sqrt(qos_c / qos_k[bind]))
        qos_k = np.zeros(m)
    return PsQp(
        a=2.0 * sq * np.real(np.conj(aux.beta) * t),
        c=np.abs(t) ** 2 * coef,
        box_upper=box_upper,
        qos_k=qos_k,
        qos_c=qos_c,
    )


def _coordinate_max(qp, lam, lo, hi):
    q = qp.c + lam * qp.qos_k
    out = np.empty(len(qp.a))
    pos = q > 0.0
    out[pos] = np.clip(qp.a[pos] / (2.0 * q[pos]), lo, hi[pos])
    flat = ~pos
    out[flat & (qp.a > 0.0)] = hi[flat & (qp.a > 0.0)]
    out[flat & (qp.a < 0.0)] = lo
    degen = flat & (qp.a == 0.0)
    out[degen] = 0.5 * (lo + hi[degen])  # fully flat coordinate: box midpoint
    return out


def objective(qp, delta):
    return float(np.sum(qp.a * delta) - np.sum(qp.c * delta ** 2))


def solve_ps(qp, tol=1e-9):
    """Global maximizer of the QP, exact up to the bisection tolerance."""
    lo = DELTA_LO
    hi = np.minimum(qp.box_upper, DELTA_HI)
    if np.any(hi < lo):
        raise PsInfeasible("harvesting cap below the lower clamp")

    def coupling(delta):
        return float(np.sum(qp.qos_k * delta ** 2)) - qp.qos_c

    d0 = _coordinate_max(qp, 0.0, lo, hi)
    if coupling(d0) <= tol * max(1.0, qp.qos_c):
        return d0
    if coupling(np.full(len(qp.a), lo)) > 0.0:
        raise PsInfeasible("box and protection ellipsoid do not intersect")

    lam_hi = 1.0
    for _ in range(200):
        if coupling(_coordinate_max(qp, lam_hi, lo, hi)) <= 0.0:
            break
        lam_hi *= 4.0
    else:
        raise PsInfeasible("coupling constraint not closable")
    lam_lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lam_lo + lam_hi)
        if coupling(_coordinate_max(qp, mid, lo, hi)) > 0.0:
            lam_lo = mid
        else:
            lam_hi = mid
    return _coordinate_max(qp, lam_hi, lo, hi)  # the feasible side of the bisection
