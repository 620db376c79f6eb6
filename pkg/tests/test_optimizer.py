"""Coordinate-ascent driver: initialization, monotonicity, bookkeeping."""

import numpy as np
import pytest

from sibris import channel, network, optimizer
from sibris.exceptions import InitInfeasible


def _drop(m=2, k=8, n=4, seed=0):
    tmpl = channel.Scenario(n_pt_antennas=n, n_ris=m, elements_per_ris=k)
    scen = channel.draw_scenario(tmpl, seed)
    ch = channel.draw_channels(scen, seed)
    par = network.SystemParams(weights=np.ones(m))
    return ch, par


def test_initialize_feasible_and_deterministic():
    ch, par = _drop(seed=1)
    s1 = optimizer.initialize(ch, par)
    s2 = optimizer.initialize(ch, par)
    assert network.constraint_report(s1, ch, par).feasible()
    assert np.array_equal(s1.w, s2.w)
    assert np.array_equal(s1.delta, s2.delta)
    assert all(np.array_equal(a, b) for a, b in zip(s1.phi, s2.phi))


def test_initialize_splits_sit_below_caps():
    ch, par = _drop(seed=2)
    st = optimizer.initialize(ch, par)
    mu_k = par.mu * ch.k
    for j in range(ch.m):
        fw = ch.F[j] @ st.w
        cap = np.sqrt(1.0 - mu_k / (par.chi * float(np.real(np.vdot(fw, fw)))))
        assert st.delta[j] == pytest.approx(0.9 * cap, rel=1e-12)


def test_initialize_impossible_harvest_raises():
    ch, par = _drop(seed=3)
    import dataclasses
    starved = dataclasses.replace(par, mu=1e3)
    with pytest.raises(InitInfeasible):
        optimizer.initialize(ch, starved)


def test_run_monotone_and_converges():
    ch, par = _drop(seed=4)
    rep = optimizer.run(ch, par)
    assert rep.status == optimizer.CONVERGED
    assert len(rep.wsse_trace) >= 2
    assert np.all(np.diff(rep.wsse_trace) >= -1e-6)
    assert rep.wsse > rep.wsse_trace[0]
    assert rep.constraint_report.feasible()
    assert rep.fp_gap_max <= 1e-9
    assert rep.refl_gap_max <= 1e-3 and rep.beam_gap_max <= 1e-3


def test_run_iteration_counters_consistent():
    ch, par = _drop(seed=5)
    rep = optimizer.run(ch, par)
    outer, i2, i3 = rep.iteration_counts
    assert outer == len(i2) == len(i3)
    assert outer == rep.outer_iters
    assert len(rep.wsse_trace) == outer + 1
    assert all(x >= 1 for x in i2) and all(x >= 1 for x in i3)


def test_rerun_from_final_state_stops_immediately():
    ch, par = _drop(seed=6)
    rep = optimizer.run(ch, par)
    again = optimizer.run(ch, par, initial_state=rep.final_state)
    assert again.status == optimizer.CONVERGED
    assert again.outer_iters == 1
    # one confirming pass may still ascend, but only below the stopping band
    assert rep.wsse - 1e-9 <= again.wsse <= rep.wsse * 1.01 + 1e-6


def test_run_deterministic():
    ch, par = _drop(seed=7)
    r1 = optimizer.run(ch, par)
    r2 = optimizer.run(ch, par)
    assert np.array_equal(r1.wsse_trace, r2.wsse_trace)
    assert np.array_equal(r1.final_state.w, r2.final_state.w)


def test_run_reports_init_infeasible():
    ch, par = _drop(seed=8)
    import dataclasses
    starved = dataclasses.replace(par, mu=1e3)
    rep = optimizer.run(ch, starved)
    assert rep.status == optimizer.INIT_INFEASIBLE
    assert rep.final_state is None
    assert rep.wsse == 0.0


def test_final_rates_match_trace_tail():
    ch, par = _drop(seed=9)
    rep = optimizer.run(ch, par)
    assert float(np.sum(par.weights * rep.final_rates)) == pytest.approx(
        rep.wsse, rel=1e-12
    )


def test_tdma_mode_runs_and_respects_slotted_protection():
    ch, par = _drop(m=3, seed=10)
    par = network.SystemParams(weights=np.ones(3))
    import dataclasses
    cfg = dataclasses.replace(optimizer.BcdConfig(), mode="tdma")
    rep = optimizer.run(ch, par, cfg)
    assert rep.status == optimizer.CONVERGED
    assert np.all(np.diff(rep.wsse_trace) >= -1e-6)
    assert rep.pu_rate >= par.r_th - 1e-6
    # slotted protection evaluates the worst single slot
    assert rep.pu_rate == pytest.approx(
        network.pu_rate(rep.final_state, ch, par, slotted=True), rel=1e-12
    )


def test_sud_mode_runs_monotone():
    ch, par = _drop(seed=11)
    import dataclasses
    cfg = dataclasses.replace(optimizer.BcdConfig(), mode="sud")
    rep = optimizer.run(ch, par, cfg)
    assert rep.status in (optimizer.CONVERGED, optimizer.MAX_OUTER)
    assert np.all(np.diff(rep.wsse_trace) >= -1e-6)
    assert rep.constraint_report.feasible()


def test_max_outer_cap_respected():
    ch, par = _drop(seed=12)
    import dataclasses
    cfg = dataclasses.replace(optimizer.BcdConfig(), max_outer=2,
                              outer_rel_tol=0.0, outer_abs_tol=0.0)
    rep = optimizer.run(ch, par, cfg)
    assert rep.outer_iters == 2
    assert rep.status == optimizer.MAX_OUTER
