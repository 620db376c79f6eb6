"""Fractional-programming surrogate for the weighted sum rate.

Two standard moves turn sum-of-log-of-ratios into something block-wise
tractable.  First the Lagrangian-dual transform,

    ln(1 + gamma) = max_{a > 0} [ ln(1 + a) - a + (1 + a) gamma / (1 + gamma) ],

tight at a = gamma.  Then the quadratic transform on each remaining
ratio, with complex auxiliaries beta_j, gives the concave surrogate

    f1 = sum_j w_j [ln(1 + a_j) - a_j]
       + sum_j 2 sqrt(w_j (1 + a_j)) Re{conj(beta_j) A_j}
       - sum_j |beta_j|^2 B_j,

where A_j is the cascaded gain and B_j collects the not-yet-decoded
signal powers INCLUDING surface j's own, plus the direct-beam power and
noise.  f1 is maximized over beta in closed form at
beta_j = sqrt(w_j (1 + a_j)) A_j / B_j, where it collapses back to
sum_j w_j ln(1 + gamma_j).  Natural logs inside; conversion to bits
happens only at reporting boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import network

ALPHA_FLOOR = 1e-12


@dataclass
class AuxVars:
    alpha: np.ndarray  # (M,) real, > 0
    beta: np.ndarray   # (M,) complex


def dual_transform_value(alpha, gamma):
    """ln(1 + a) - a + (1 + a) g / (1 + g); maximized over a at a = g."""
    return np.log1p(alpha) - alpha + (1.0 + alpha) * gamma / (1.0 + gamma)


def denominator_terms(s, d0, order, mode):
    """B_j = sum over the surfaces decoded at j's position or later of S_i,
    plus d0; under sud every surface contributes to every B_j; under tdma
    (orthogonal slots) only the own signal does."""
    m = len(s)
    if mode == "sud":
        return np.full(m, np.sum(s) + d0)
    if mode == "tdma":
        return s + d0
    b = np.empty(m)
    s_pos = s[order]
    b[order] = np.cumsum(s_pos[::-1])[::-1] + d0
    return b


def cumulative_weights(beta, order, mode):
    """coef_i = sum of |beta_j|^2 over the j whose denominator contains
    surface i's power: earlier-or-equal decode positions (noma), all (sud),
    or itself alone (tdma)."""
    w = np.abs(beta) ** 2
    m = len(w)
    if mode == "sud":
        return np.full(m, np.sum(w))
    if mode == "tdma":
        return w.copy()
    coef = np.empty(m)
    coef[order] = np.cumsum(w[order])
    return coef


def update_aux(state, channels, params, order, mode="noma"):
    """Closed-form coordinate maximizers: alpha = gamma (floored), then
    beta_j = sqrt(w_j (1 + alpha_j)) A_j / B_j."""
    gam = network.sinrs(state, channels, params, order, mode)
    alpha = np.maximum(gam, ALPHA_FLOOR)
    a = network.effective_gains(state, channels)
    s = np.abs(a) ** 2
    d0 = abs(np.vdot(channels.h, state.w)) ** 2 + params.sigma2
    b = denominator_terms(s, d0, order, mode)
    beta = np.sqrt(params.weights * (1.0 + alpha)) * a / b
    return AuxVars(alpha=alpha, beta=beta)


def f1(aux, state, channels, params, order, mode="noma"):
    """Surrogate value in nats for the current variables and auxiliaries."""
    a = network.effective_gains(state, channels)
    s = np.abs(a) ** 2
    d0 = abs(np.vdot(channels.h, state.w)) ** 2 + params.sigma2
    b = denominator_terms(s, d0, order, mode)
    sq = np.sqrt(params.weights * (1.0 + aux.alpha))
    const = np.sum(params.weights * (np.log1p(aux.alpha) - aux.alpha))
    lin = np.sum(2.0 * sq * np.real(np.conj(aux.beta) * a))
    quad = np.sum(np.abs(aux.beta) ** 2 * b)
    return float(const + lin - quad)
