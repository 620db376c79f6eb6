"""Signal model: effective gains, SINRs, harvested power, rate objective.

A surface j modulates what it reflects, so the useful symbol arrives at
the access point through the cascade  A_j = delta_j g_j^H diag(F_j w) phi_j
while the direct transmitter beam acts as interference there.  Decoding
is successive in a fixed order; the protected user sees the surfaces as
interference on top of its own beam.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

LOG2 = np.log(2.0)


@dataclass
class SystemParams:
    """Operating point: powers in watts, rates in bits/s/Hz."""

    p: float = 10.0 ** 0.4          # transmit power budget (34 dBm)
    sigma2: float = 1e-8            # receiver noise power (-80 dBW)
    chi: float = 0.8                # harvester conversion efficiency
    mu: float = 1e-6                # per-element activation power, watts
    r_th: float = 1.5               # protected-user rate floor
    weights: np.ndarray = field(default_factory=lambda: np.ones(2))

    def with_m(self, m):
        return replace(self, weights=np.ones(m))


@dataclass
class NetworkState:
    """Current optimization variables: beam w (N,), per-surface phase
    vectors phi (each (K,), unit modulus), splitting ratios delta (M,)."""

    w: np.ndarray
    phi: list
    delta: np.ndarray

    def copy(self):
        return NetworkState(self.w.copy(), [p.copy() for p in self.phi], self.delta.copy())


def init_beamformer(p, n):
    """Full-power constant-modulus probe used for ordering and warm starts."""
    return np.full(n, np.sqrt(p / n) * (1.0 + 1.0j) / np.sqrt(2.0))


def effective_gain(j, state, channels):
    """A_j = delta_j g_j^H diag(F_j w) phi_j (complex scalar)."""
    fw = channels.F[j] @ state.w
    return state.delta[j] * np.vdot(channels.g[j], fw * state.phi[j])


def effective_gains(state, channels):
    return np.array([effective_gain(j, state, channels) for j in range(channels.m)])


def harvested_power(j, state, channels, params):
    """chi (1 - delta_j^2) ||F_j w||^2 left for the surface electronics."""
    fw = channels.F[j] @ state.w
    return params.chi * (1.0 - state.delta[j] ** 2) * float(np.real(np.vdot(fw, fw)))


def pu_sinr(state, channels, params, slotted=False):
    """Protected-user SINR: own beam over surface leakage plus noise.

    slotted: only one surface backscatters at a time (orthogonal slots),
    so the binding slot carries the worst single leakage instead of the
    sum."""
    sig = abs(np.vdot(channels.h_p, state.w)) ** 2
    leaks = np.empty(channels.m)
    for j in range(channels.m):
        fw = channels.F[j] @ state.w
        leaks[j] = abs(state.delta[j] * np.vdot(channels.g_p[j], fw * state.phi[j])) ** 2
    leak = float(np.max(leaks)) if slotted and channels.m else float(np.sum(leaks))
    return sig / (leak + params.sigma2)


def pu_rate(state, channels, params, slotted=False):
    return float(np.log2(1.0 + pu_sinr(state, channels, params, slotted)))


def decoding_order(channels, params):
    """Descending cascaded-gain order under the fixed probe beam, all-ones
    phases and unit splitting; ties break toward the lower index."""
    w0 = init_beamformer(params.p, channels.n)
    gains = np.array([
        abs(np.vdot(channels.g[j], (channels.F[j] @ w0))) for j in range(channels.m)
    ])
    return np.argsort(-gains, kind="stable")


def sinrs(state, channels, params, order, mode="noma"):
    """Per-surface decode SINRs, indexed by surface.

    noma: position p decodes order[p] against the not-yet-decoded surfaces;
    sud:  every surface is decoded against all the others (no cancellation);
    tdma: each surface backscatters alone in its own slot (no co-surface
          interference at all).
    The direct transmitter beam plus noise load every denominator.
    """
    s = np.abs(effective_gains(state, channels)) ** 2
    d0 = abs(np.vdot(channels.h, state.w)) ** 2 + params.sigma2
    m = channels.m
    out = np.empty(m)
    if mode == "noma":
        s_pos = s[order]
        tail = np.concatenate([np.cumsum(s_pos[::-1])[::-1][1:], [0.0]])  # strictly-later sum
        out[order] = s_pos / (tail + d0)
    elif mode == "sud":
        out = s / (np.sum(s) - s + d0)
    elif mode == "tdma":
        out = s / d0
    else:
        raise ValueError(f"unknown access mode {mode!r}")
    return out


def wsse(state, channels, params, order, mode="noma"):
    """Weighted sum of the secondary spectral efficiencies, bits/s/Hz."""
    g = sinrs(state, channels, params, order, mode)
    return float(np.sum(params.weights * np.log2(1.0 + g)))


def rates(state, channels, params, order, mode="noma"):
    return np.log2(1.0 + sinrs(state, channels, params, order, mode))


@dataclass
class ConstraintReport:
    """Signed slacks (nonnegative = satisfied) plus normalizers for
    relative feasibility checks."""

    power_slack: float
    eh_slack: np.ndarray
    pu_rate_slack: float
    unit_modulus_error: float
    delta_bounds_ok: bool
    p: float
    mu_k: float
    r_th: float

    def feasible(self, rel=1e-6, power_rel=1e-9):
        if not self.delta_bounds_ok or self.unit_modulus_error > 1e-9:
            return False
        if self.power_slack < -power_rel * self.p:
            return False
        if np.min(self.eh_slack) < -rel * max(self.mu_k, 1e-30):
            return False
        return self.pu_rate_slack >= -rel * max(self.r_th, 1e-30)


def constraint_report(state, channels, params, slotted=False):
    mu_k = params.mu * channels.k
    eh = np.array([
        harvested_power(j, state, channels, params) - mu_k for j in range(channels.m)
    ])
    umax = max(
        float(np.max(np.abs(np.abs(p) - 1.0))) for p in state.phi
    )
    d = state.delta
    return ConstraintReport(
        power_slack=params.p - float(np.real(np.vdot(state.w, state.w))),
        eh_slack=eh,
        pu_rate_slack=pu_rate(state, channels, params, slotted) - params.r_th,
        unit_modulus_error=umax,
        delta_bounds_ok=bool(np.all((d > 0.0) & (d < 1.0))),
        p=params.p,
        mu_k=mu_k,
        r_th=params.r_th,
    )
