"""Comparison schemes: dominance relations, quantizer, substitutes."""

import numpy as np
import pytest

from sibris import baselines, channel, network, optimizer


def _drop(m=2, k=8, n=4, seed=0):
    tmpl = channel.Scenario(n_pt_antennas=n, n_ris=m, elements_per_ris=k)
    scen = channel.draw_scenario(tmpl, seed)
    ch = channel.draw_channels(scen, seed)
    par = network.SystemParams(weights=np.ones(m))
    return ch, par


def test_sud_never_beats_cancellation_at_same_state():
    # removing cancellation can only add interference, state held fixed
    for seed in range(6):
        ch, par = _drop(seed=seed)
        g = np.random.default_rng(seed)
        w = network.init_beamformer(par.p, ch.n) * np.exp(1j * g.uniform(size=ch.n))
        phi = [np.exp(2j * np.pi * g.uniform(size=ch.k)) for _ in range(ch.m)]
        st = network.NetworkState(w, phi, np.full(ch.m, 0.8))
        order = network.decoding_order(ch, par)
        noma = network.wsse(st, ch, par, order, mode="noma")
        sud = baselines.sud_wsse(st, ch, par)
        assert sud <= noma + 1e-12


def test_sud_sinrs_formula():
    ch, par = _drop(seed=1)
    st = optimizer.initialize(ch, par)
    got = baselines.sud_sinrs(st, ch, par)
    s = np.abs(network.effective_gains(st, ch)) ** 2
    d0 = abs(np.vdot(ch.h, st.w)) ** 2 + par.sigma2
    assert np.allclose(got, s / (np.sum(s) - s + d0), rtol=1e-12)


def test_quantizer_hand_values():
    got = baselines.quantize_2bit(np.exp(1j * np.array([0.9, 3.0, np.pi / 4])))
    assert got[0] == pytest.approx(np.exp(1j * np.pi / 2))  # 0.9 closer to pi/2
    assert got[1] == pytest.approx(np.exp(1j * np.pi))      # 3.0 closer to pi
    assert got[2] == pytest.approx(1.0 + 0.0j)              # exact tie: smaller level


def test_quantizer_wraparound_and_idempotence():
    phi = np.exp(1j * np.array([-0.1, -2.0, 6.0, 3.9]))
    q = baselines.quantize_2bit(phi)
    assert np.allclose(np.abs(q), 1.0, atol=1e-12)
    assert q[0] == pytest.approx(1.0 + 0.0j)                 # -0.1 wraps to 0
    assert q[1] == pytest.approx(np.exp(1j * 1.5 * np.pi))   # -2.0 ~ 4.28 -> 3pi/2
    assert np.allclose(baselines.quantize_2bit(q), q, atol=1e-12)
    levels = np.angle(q) % (2.0 * np.pi)
    assert all(min(abs(l - t) for t in (0, np.pi / 2, np.pi, 1.5 * np.pi, 2 * np.pi)) < 1e-12
               for l in levels)


def test_two_bit_never_beats_continuous():
    for seed in range(3):
        ch, par = _drop(seed=seed)
        base = optimizer.run(ch, par)
        q = baselines.run_proposed_2bit(ch, par, base=base)
        assert q.wsse <= base.wsse + 1e-9
        assert network.constraint_report(q.state, ch, par).feasible()
        for p in q.state.phi:  # phases really are 2-bit
            lv = np.angle(p) % (2.0 * np.pi)
            snapped = baselines.QUANT_LEVELS[
                np.argmin(np.abs(lv[:, None] - baselines.QUANT_LEVELS[None, :]), axis=1)
            ]
            assert np.allclose(np.exp(1j * lv), np.exp(1j * snapped), atol=1e-9)


def test_two_bit_reuses_base_run():
    ch, par = _drop(seed=3)
    base = optimizer.run(ch, par)
    q = baselines.run_proposed_2bit(ch, par, base=base)
    assert q.continuous is base
    assert q.outer_iters == base.outer_iters


def test_tdma_single_surface_equals_proposed():
    ch, par = _drop(m=1, seed=4)
    par1 = network.SystemParams(weights=np.ones(1))
    td = baselines.run_tdma(ch, par1)
    rep = optimizer.run(ch, par1)
    assert td.wsse == rep.wsse  # one slot spans the frame: same problem
    assert np.array_equal(td.report.final_state.w, rep.final_state.w)


def test_tdma_runs_feasible_and_slotted():
    ch, par = _drop(m=3, seed=5)
    par3 = network.SystemParams(weights=np.ones(3))
    td = baselines.run_tdma(ch, par3)
    assert td.status == optimizer.CONVERGED
    assert td.pu_rate >= par3.r_th - 1e-6
    st = td.report.final_state
    # frame-averaged rate: each slot contributes 1/M of its own-signal rate
    order = network.decoding_order(ch, par3)
    slot_rates = network.rates(st, ch, par3, order, mode="tdma")
    assert td.wsse == pytest.approx(float(np.sum(slot_rates)) / 3.0, rel=1e-9)
    rep = network.constraint_report(st, ch, par3, slotted=True)
    assert rep.feasible()


def test_aa_noma_closed_form_and_protection():
    ch, par = _drop(m=2, seed=6)
    tmpl = channel.Scenario(n_pt_antennas=4, n_ris=2, elements_per_ris=8)
    scen = channel.draw_scenario(tmpl, 6)
    aa = channel.draw_aa_channels(scen, 6)
    p_a = 10 ** ((20.0 - 30.0) / 10.0)  # 20 dBm terminals
    rep = baselines.aa_noma_wsse(ch, aa, par, p_a)
    assert rep.status == "converged"
    assert 0.0 < rep.zeta <= 1.0
    assert rep.pu_rate >= par.r_th - 1e-9  # scaling certificate
    # reproduce the formula end to end
    hp2 = float(np.real(np.vdot(ch.h_p, ch.h_p)))
    w_pt = np.sqrt(par.p) * ch.h_p / np.sqrt(hp2)
    units = [v / np.linalg.norm(v) for v in aa.st_ap]
    leak = np.array([abs(np.vdot(aa.st_pu[j], units[j])) ** 2 for j in range(2)])
    theta = 2.0 ** par.r_th - 1.0
    margin = par.p * hp2 / theta - par.sigma2
    zeta = min(1.0, margin / (p_a * float(np.sum(leak))))
    assert rep.zeta == pytest.approx(zeta, rel=1e-12)
    s = zeta * p_a * np.array([float(np.real(np.vdot(v, v))) for v in aa.st_ap])
    d0 = abs(np.vdot(ch.h, w_pt)) ** 2 + par.sigma2
    order = np.argsort(-s, kind="stable")
    gam = np.empty(2)
    s_pos = s[order]
    tail = np.concatenate([np.cumsum(s_pos[::-1])[::-1][1:], [0.0]])
    gam[order] = s_pos / (tail + d0)
    assert rep.wsse == pytest.approx(float(np.sum(np.log2(1.0 + gam))), rel=1e-12)


def test_aa_noma_zeta_caps_at_one_when_protection_is_free():
    ch, par = _drop(m=2, seed=7)
    tmpl = channel.Scenario(n_pt_antennas=4, n_ris=2, elements_per_ris=8)
    scen = channel.draw_scenario(tmpl, 7)
    aa = channel.draw_aa_channels(scen, 7)
    rep = baselines.aa_noma_wsse(ch, aa, par, p_a=1e-12)  # negligible terminals
    assert rep.zeta == 1.0
