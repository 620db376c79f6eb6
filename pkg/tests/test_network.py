"""Signal-model checks: gains, SINRs, telescoping, constraint slacks."""

import itertools

import numpy as np
import pytest

from sibris import channel, network


def _toy_channels(m=2, k=4, n=3, seed=0):
    tmpl = channel.Scenario(n_pt_antennas=n, n_ris=m, elements_per_ris=k)
    scen = channel.draw_scenario(tmpl, seed)
    return channel.draw_channels(scen, seed)


def _toy_state(ch, g, delta=0.8):
    w = g.standard_normal(ch.n) + 1j * g.standard_normal(ch.n)
    w *= np.sqrt(1.0 / np.real(np.vdot(w, w)))
    phi = [np.exp(1j * 2 * np.pi * g.uniform(size=ch.k)) for _ in range(ch.m)]
    return network.NetworkState(w, phi, np.full(ch.m, delta))


class _FakeChannels:
    """Hand-buildable single-antenna links for closed-form cases."""

    def __init__(self, h, F, g, g_p=None, h_p=None):
        self.h = np.atleast_1d(np.asarray(h, dtype=complex))
        self.h_p = self.h if h_p is None else np.atleast_1d(np.asarray(h_p, complex))
        self.F = [np.atleast_2d(np.asarray(f, dtype=complex)) for f in F]
        self.g = [np.atleast_1d(np.asarray(x, dtype=complex)) for x in g]
        self.g_p = self.g if g_p is None else [np.atleast_1d(np.asarray(x, complex)) for x in g_p]

    @property
    def m(self):
        return len(self.F)

    @property
    def k(self):
        return self.F[0].shape[0]

    @property
    def n(self):
        return self.F[0].shape[1]


def test_init_beamformer_full_power():
    w = network.init_beamformer(2.5, 4)
    assert w.shape == (4,)
    assert np.real(np.vdot(w, w)) == pytest.approx(2.5, rel=1e-12)
    assert np.allclose(w, w[0])  # constant modulus probe


def test_effective_gain_hand_value():
    # K = N = 1: A = delta * conj(g) * F * w * phi
    ch = _FakeChannels(h=[0.0], F=[[[2.0]]], g=[[1.0 + 1.0j]])
    st = network.NetworkState(
        w=np.array([0.5 + 0.0j]),
        phi=[np.array([np.exp(1j * np.pi / 4)])],
        delta=np.array([0.6]),
    )
    expect = 0.6 * np.conj(1.0 + 1.0j) * 2.0 * 0.5 * np.exp(1j * np.pi / 4)
    assert network.effective_gain(0, st, ch) == pytest.approx(expect, abs=1e-14)


def test_harvested_power_hand_value():
    ch = _FakeChannels(h=[0.0], F=[[[3.0]]], g=[[1.0]])
    st = network.NetworkState(
        w=np.array([2.0 + 0.0j]), phi=[np.ones(1)], delta=np.array([0.6])
    )
    par = network.SystemParams(chi=0.5)
    # 0.5 * (1 - 0.36) * |3*2|^2 = 11.52
    assert network.harvested_power(0, st, ch, par) == pytest.approx(11.52, rel=1e-12)


def _two_user_setup(s1, s2, direct):
    """States whose effective powers are exactly (s1, s2) with |h^H w|^2 = direct."""
    ch = _FakeChannels(
        h=[np.sqrt(direct)],
        F=[[[1.0]], [[1.0]]],
        g=[[np.sqrt(s1)], [np.sqrt(s2)]],
    )
    st = network.NetworkState(
        w=np.array([1.0 + 0.0j]),
        phi=[np.ones(1), np.ones(1)],
        delta=np.array([1.0, 1.0]),
    )
    return ch, st


def test_sinr_hand_example_noma_and_sud():
    ch, st = _two_user_setup(3.0, 1.0, 1.0)
    par = network.SystemParams(sigma2=0.0, weights=np.ones(2))
    order = np.array([0, 1])
    got = network.sinrs(st, ch, par, order, mode="noma")
    # first decoded sees the later one: 3/(1+1); last is interference-free: 1/1
    assert got == pytest.approx([1.5, 1.0], rel=1e-12)
    sud = network.sinrs(st, ch, par, order, mode="sud")
    assert sud == pytest.approx([3.0 / 2.0, 1.0 / 4.0], rel=1e-12)
    td = network.sinrs(st, ch, par, order, mode="tdma")
    assert td == pytest.approx([3.0, 1.0], rel=1e-12)


def test_sinr_order_indexing():
    # order = [1, 0]: surface 1 decoded first, sees surface 0 as interference
    ch, st = _two_user_setup(3.0, 1.0, 1.0)
    par = network.SystemParams(sigma2=0.0, weights=np.ones(2))
    got = network.sinrs(st, ch, par, np.array([1, 0]), mode="noma")
    assert got == pytest.approx([3.0, 0.25], rel=1e-12)


def test_sum_se_telescopes_over_orders():
    # unweighted NOMA sum SE collapses to log2(1 + sum S / D): order-free
    g = np.random.default_rng(29)
    for m in (2, 3, 4):
        ch = _toy_channels(m=m, seed=m)
        st = _toy_state(ch, g)
        par = network.SystemParams(weights=np.ones(m))
        vals = []
        for perm in itertools.permutations(range(m)):
            vals.append(network.wsse(st, ch, par, np.array(perm), mode="noma"))
        vals = np.array(vals)
        assert np.max(vals) - np.min(vals) <= 1e-9 * max(1.0, np.max(np.abs(vals)))
        s = np.abs(network.effective_gains(st, ch)) ** 2
        d = abs(np.vdot(ch.h, st.w)) ** 2 + par.sigma2
        collapsed = np.log2(1.0 + np.sum(s) / d)
        assert vals[0] == pytest.approx(collapsed, rel=1e-12)


def test_wsse_weights_scale_rates():
    ch = _toy_channels(seed=4)
    g = np.random.default_rng(31)
    st = _toy_state(ch, g)
    order = np.array([0, 1])
    par1 = network.SystemParams(weights=np.array([1.0, 1.0]))
    par2 = network.SystemParams(weights=np.array([2.0, 0.5]))
    r = network.rates(st, ch, par1, order)
    assert network.wsse(st, ch, par2, order) == pytest.approx(
        2.0 * r[0] + 0.5 * r[1], rel=1e-12
    )


def test_decoding_order_descending_and_stable():
    ch = _toy_channels(m=4, seed=9)
    par = network.SystemParams(weights=np.ones(4))
    order = network.decoding_order(ch, par)
    w0 = network.init_beamformer(par.p, ch.n)
    gains = np.array([abs(np.vdot(ch.g[j], ch.F[j] @ w0)) for j in range(4)])
    assert np.all(np.diff(gains[order]) <= 1e-15)
    # exact ties keep the lower surface index first
    ch.F[2] = ch.F[1]
    ch.g[2] = ch.g[1]
    order = network.decoding_order(ch, par)
    i1 = int(np.where(order == 1)[0][0])
    i2 = int(np.where(order == 2)[0][0])
    assert i1 < i2


def test_pu_sinr_slotted_uses_worst_single_leak():
    ch = _toy_channels(m=3, seed=12)
    g = np.random.default_rng(33)
    st = _toy_state(ch, g)
    par = network.SystemParams(weights=np.ones(3))
    joint = network.pu_sinr(st, ch, par, slotted=False)
    slot = network.pu_sinr(st, ch, par, slotted=True)
    assert slot >= joint  # max leak <= sum of leaks
    sig = abs(np.vdot(ch.h_p, st.w)) ** 2
    leaks = []
    for j in range(3):
        fw = ch.F[j] @ st.w
        leaks.append(abs(st.delta[j] * np.vdot(ch.g_p[j], fw * st.phi[j])) ** 2)
    assert joint == pytest.approx(sig / (sum(leaks) + par.sigma2), rel=1e-12)
    assert slot == pytest.approx(sig / (max(leaks) + par.sigma2), rel=1e-12)


def test_eh_monotone_in_delta():
    ch = _toy_channels(seed=15)
    g = np.random.default_rng(37)
    st = _toy_state(ch, g)
    par = network.SystemParams()
    vals = []
    for d in (0.2, 0.5, 0.9):
        st.delta[:] = d
        vals.append(network.harvested_power(0, st, ch, par))
    assert vals[0] > vals[1] > vals[2] > 0.0


def test_constraint_report_slacks():
    ch = _toy_channels(seed=21)
    g = np.random.default_rng(41)
    st = _toy_state(ch, g)
    par = network.SystemParams(weights=np.ones(2))
    rep = network.constraint_report(st, ch, par)
    assert rep.power_slack == pytest.approx(
        par.p - np.real(np.vdot(st.w, st.w)), rel=1e-12
    )
    assert rep.eh_slack.shape == (2,)
    assert rep.unit_modulus_error <= 1e-12
    assert rep.delta_bounds_ok
    # scaling the beam beyond budget flips the power slack negative
    st2 = st.copy()
    st2.w *= np.sqrt(2.0 * par.p)
    rep2 = network.constraint_report(st2, ch, par)
    assert rep2.power_slack < 0.0
    assert not rep2.feasible()


def test_feasible_tolerances():
    rep = network.ConstraintReport(
        power_slack=-1e-12,
        eh_slack=np.array([-1e-12]),
        pu_rate_slack=-1e-9,
        unit_modulus_error=0.0,
        delta_bounds_ok=True,
        p=2.5,
        mu_k=8e-6,
        r_th=1.5,
    )
    assert rep.feasible()  # tiny relative violations tolerated
    rep.eh_slack = np.array([-1e-3])
    assert not rep.feasible()


def test_state_copy_is_deep():
    ch = _toy_channels(seed=2)
    g = np.random.default_rng(43)
    st = _toy_state(ch, g)
    cp = st.copy()
    cp.w[0] = 0.0
    cp.phi[0][0] = 0.0
    cp.delta[0] = 0.5
    assert st.w[0] != 0.0 and st.phi[0][0] != 0.0 and st.delta[0] != 0.5
