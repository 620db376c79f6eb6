"""Scenario geometry, path loss, and Rician small-scale fading.

Link naming throughout the package:
  h    transmitter -> access point          (N,)
  h_p  transmitter -> protected user        (N,)
  F[j] transmitter -> surface j             (K, N)
  g[j] surface j   -> access point          (K,)
  g_p[j] surface j -> protected user        (K,)

Conventions: the transmitter carries an N-element uniform linear array
along the x axis; each surface is a K-element uniform planar array in
the x-z plane with kx columns and K/kx rows, indexed column-major
(kron(a_x, a_z)).  Line-of-sight angles come from the 3-D geometry; the
phase steps use the element spacing measured in wavelengths.  Every draw
is reproducible from a 64-bit seed via a counter-based generator, so
seeds can be split arithmetically across drops without correlation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

_U64 = (1 << 64) - 1

PT_POS = np.array([0.0, 0.0, 10.0])
AP_POS = np.array([20.0, 15.0, 1.0])
RIS_DISC_CENTER = np.array([5.0, 0.0])
RIS_DISC_RADIUS = 10.0
RIS_HEIGHT_RANGE = (7.0, 10.0)
PU_DISC_RADIUS = 20.0

DEFAULT_EXPONENTS = {
    "pt_ap": 3.5,
    "pt_pu": 2.8,
    "pt_ris": 2.2,
    "ris_ap": 2.8,
    "ris_pu": 2.8,
}


def rng(seed, stream=0):
    """Counter-based generator keyed on (seed, stream)."""
    return np.random.Generator(np.random.Philox(key=[int(seed) & _U64, int(stream) & _U64]))


def upa_shape(k):
    """(columns, rows) for a K-element planar array: 5 columns when 5 | K,
    otherwise the largest divisor of K that is <= 5."""
    if k <= 0:
        raise ValueError(f"element count must be positive, got {k}")
    for kx in (5, 4, 3, 2, 1):
        if k % kx == 0:
            return kx, k // kx
    raise AssertionError  # kx = 1 always divides


def path_loss_db(distance, exponent, beta0_db=-20.0, d0=1.0):
    """beta0 - 10 * exponent * log10(d / d0), in dB."""
    if distance <= 0.0:
        raise ValueError(f"distance must be positive, got {distance}")
    return beta0_db - 10.0 * exponent * np.log10(distance / d0)


def path_loss_linear(distance, exponent, beta0_db=-20.0, d0=1.0):
    return 10.0 ** (path_loss_db(distance, exponent, beta0_db, d0) / 10.0)


def ula_steering(n, phi, spacing_ratio=0.5):
    """Linear-array response exp(-j 2 pi s n' cos(phi)), n' = 0..n-1."""
    return np.exp(-2j * np.pi * spacing_ratio * np.arange(n) * np.cos(phi))


def upa_steering(kx, kz, phi, theta, spacing_ratio=0.5):
    """Planar-array response kron(a_x, a_z) with steps
    -2 pi s sin(theta) cos(phi) along x and -2 pi s cos(theta) along z."""
    ax = np.exp(-2j * np.pi * spacing_ratio * np.arange(kx) * np.sin(theta) * np.cos(phi))
    az = np.exp(-2j * np.pi * spacing_ratio * np.arange(kz) * np.cos(theta))
    return np.kron(ax, az)


def _unit(a, b):
    d = b - a
    r = np.linalg.norm(d)
    if r == 0.0:
        raise ValueError("coincident nodes")
    return d / r, r


def _ula_toward(n, here, there, spacing_ratio):
    u, _ = _unit(here, there)
    # ULA along x: the response depends on the angle to the array axis only
    return ula_steering(n, np.arccos(np.clip(u[0], -1.0, 1.0)), spacing_ratio)


def _upa_toward(kx, kz, here, there, spacing_ratio):
    u, _ = _unit(here, there)
    theta = np.arccos(np.clip(u[2], -1.0, 1.0))       # polar angle from z
    phi = np.arctan2(u[1], u[0])                      # azimuth in the x-y plane
    return upa_steering(kx, kz, phi, theta, spacing_ratio)


@dataclass
class Scenario:
    """Node placement plus large-scale propagation parameters.

    A template (positions None) is turned into a concrete drop by
    draw_scenario.  pathloss_exponents keys: pt_ap, pt_pu, pt_ris,
    ris_ap, ris_pu.
    """

    n_pt_antennas: int = 4
    n_ris: int = 2
    elements_per_ris: int = 8
    rician_kappa: float = 3.0
    beta0_db: float = -20.0
    spacing_ratio: float = 0.5  # element spacing / wavelength
    pathloss_exponents: dict | None = None
    pt_pos: np.ndarray | None = None
    ap_pos: np.ndarray | None = None
    ris_pos: np.ndarray | None = None  # (n_ris, 3)
    pu_pos: np.ndarray | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.pathloss_exponents is None:
            self.pathloss_exponents = dict(DEFAULT_EXPONENTS)

    @property
    def upa(self):
        return upa_shape(self.elements_per_ris)


def draw_scenario(template, seed):
    """Sample node positions: surfaces uniform on a disc of radius 10 m around
    (5, 0) at heights U[7, 10]; protected user uniform on the ground disc of
    radius 20 m around the origin.  Deterministic in seed."""
    g = rng(seed, stream=0)
    m = template.n_ris
    rr = RIS_DISC_RADIUS * np.sqrt(g.uniform(size=m))
    ang = 2.0 * np.pi * g.uniform(size=m)
    zz = g.uniform(RIS_HEIGHT_RANGE[0], RIS_HEIGHT_RANGE[1], size=m)
    ris = np.column_stack([
        RIS_DISC_CENTER[0] + rr * np.cos(ang),
        RIS_DISC_CENTER[1] + rr * np.sin(ang),
        zz,
    ])
    ru = PU_DISC_RADIUS * np.sqrt(g.uniform())
    au = 2.0 * np.pi * g.uniform()
    pu = np.array([ru * np.cos(au), ru * np.sin(au), 0.0])
    return replace(
        template,
        pt_pos=PT_POS.copy(),
        ap_pos=AP_POS.copy(),
        ris_pos=ris,
        pu_pos=pu,
        seed=int(seed),
    )


@dataclass
class ChannelSet:
    """One fading realization of every link."""

    h: np.ndarray
    h_p: np.ndarray
    F: list
    g: list
    g_p: list

    @property
    def m(self):
        return len(self.F)

    @property
    def k(self):
        return self.F[0].shape[0]

    @property
    def n(self):
        return self.F[0].shape[1]

    def sliced(self, j):
        """Single-surface view (shared arrays, no copies)."""
        return ChannelSet(self.h, self.h_p, [self.F[j]], [self.g[j]], [self.g_p[j]])


def _cn(g, *shape):
    return (g.standard_normal(shape) + 1j * g.standard_normal(shape)) / np.sqrt(2.0)


def draw_channels(scenario, seed):
    """Rician draws sqrt(k/(k+1)) LoS + sqrt(1/(k+1)) NLoS, scaled by the
    amplitude path loss of each link.  Consumption order is fixed
    (h, h_p, then F_j, g_j, g_pj per surface) so draws are reproducible."""
    if scenario.ris_pos is None or scenario.pu_pos is None:
        raise ValueError("scenario has no sampled positions; call draw_scenario first")
    g = rng(seed, stream=1)
    n = scenario.n_pt_antennas
    k = scenario.elements_per_ris
    kx, kz = scenario.upa
    sr = scenario.spacing_ratio
    kap = scenario.rician_kappa
    lw = np.sqrt(kap / (kap + 1.0))
    nw = np.sqrt(1.0 / (kap + 1.0))
    exps = scenario.pathloss_exponents
    b0 = scenario.beta0_db
    pt, ap, pu = scenario.pt_pos, scenario.ap_pos, scenario.pu_pos

    def amp(a, b, key):
        _, d = _unit(a, b)
        return np.sqrt(path_loss_linear(d, exps[key], b0))

    h = amp(pt, ap, "pt_ap") * (lw * _ula_toward(n, pt, ap, sr) + nw * _cn(g, n))
    h_p = amp(pt, pu, "pt_pu") * (lw * _ula_toward(n, pt, pu, sr) + nw * _cn(g, n))

    F, gg, gp = [], [], []
    for j in range(scenario.n_ris):
        rp = scenario.ris_pos[j]
        a_in = _upa_toward(kx, kz, rp, pt, sr)           # arrival at the surface
        a_pt = _ula_toward(n, pt, rp, sr)                # departure at the transmitter
        los_f = np.outer(a_in, a_pt.conj())
        F.append(amp(pt, rp, "pt_ris") * (lw * los_f + nw * _cn(g, k, n)))
        gg.append(amp(rp, ap, "ris_ap") * (lw * _upa_toward(kx, kz, rp, ap, sr) + nw * _cn(g, k)))
        gp.append(amp(rp, pu, "ris_pu") * (lw * _upa_toward(kx, kz, rp, pu, sr) + nw * _cn(g, k)))
    return ChannelSet(h=h, h_p=h_p, F=F, g=gg, g_p=gp)


@dataclass
class AaChannels:
    """Active-antenna substitute links: terminals at the surface positions,
    each with a small transmit array."""

    st_ap: list  # (n_st,) vectors, terminal -> access point
    st_pu: list  # (n_st,) vectors, terminal -> protected user


def draw_aa_channels(scenario, seed, n_st_antennas=4):
    """Channels for the active-antenna comparison: an n_st-element linear
    array at each surface position, same Rician structure and the surface
    link exponents."""
    if scenario.ris_pos is None or scenario.pu_pos is None:
        raise ValueError("scenario has no sampled positions; call draw_scenario first")
    g = rng(seed, stream=2)
    kap = scenario.rician_kappa
    lw = np.sqrt(kap / (kap + 1.0))
    nw = np.sqrt(1.0 / (kap + 1.0))
    exps = scenario.pathloss_exponents
    b0 = scenario.beta0_db
    sr = scenario.spacing_ratio
    ap, pu = scenario.ap_pos, scenario.pu_pos
    st_ap, st_pu = [], []
    for j in range(scenario.n_ris):
        sp = scenario.ris_pos[j]
        _, d_ap = _unit(sp, ap)
        _, d_pu = _unit(sp, pu)
        a1 = np.sqrt(path_loss_linear(d_ap, exps["ris_ap"], b0))
        a2 = np.sqrt(path_loss_linear(d_pu, exps["ris_pu"], b0))
        st_ap.append(a1 * (lw * _ula_toward(n_st_antennas, sp, ap, sr) + nw * _cn(g, n_st_antennas)))
        st_pu.append(a2 * (lw * _ula_toward(n_st_antennas, sp, pu, sr) + nw * _cn(g, n_st_antennas)))
    return AaChannels(st_ap=st_ap, st_pu=st_pu)
