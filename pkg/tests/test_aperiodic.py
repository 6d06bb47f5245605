import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aperiodic_lti import (
    IllConditionedWindowWarning,
    InadmissibleSequenceError,
    InvalidScheduleError,
    SamplingSchedule,
    TransferFunction,
    a_coeffs,
    convolution_oracle,
    f_coeffs_closed,
    f_coeffs_solve,
    g_coeffs_impulse,
    g_coeffs_zoh,
    g_vectors,
    impulse_response,
    model_coefficients,
    random_admissible_schedule,
    random_stable_system,
    realize,
    simulate,
    spectrum,
    step_coefficients,
    step_realization,
)
from aperiodic_lti.validation import compare

TWO_POLE = TransferFunction([1.0], [1.0, 3.0, 2.0])      # poles -1, -2
OSC = TransferFunction([1.0], [1.0, 0.0, 1.0])           # poles +- j


# --------------------------------------------------------------------------
# schedules


def test_schedule_construction():
    s = SamplingSchedule.from_periods([1.0, 2.0, 0.5], t0=3.0)
    np.testing.assert_array_equal(s.instants, [3.0, 4.0, 6.0, 6.5])
    np.testing.assert_array_equal(s.periods, [1.0, 2.0, 0.5])
    assert s.K == 3 and len(s) == 4
    np.testing.assert_array_equal(s.window(3, 2), [2.0, 0.5])
    c = SamplingSchedule.constant(0.5, 4)
    np.testing.assert_array_equal(c.instants, [0, 0.5, 1.0, 1.5, 2.0])


@pytest.mark.parametrize("instants", [[], [0.0, 1.0, 1.0], [0.0, np.nan]])
def test_schedule_rejects(instants):
    with pytest.raises(InvalidScheduleError):
        SamplingSchedule(instants)


def test_schedule_dict_round_trip():
    s = SamplingSchedule.from_periods([0.3, 0.7, 1.1], t0=0.25)
    np.testing.assert_array_equal(SamplingSchedule.from_dict(s.to_dict()).instants, s.instants)
    p = SamplingSchedule.from_dict({"periods": [1.0, 2.0], "t0": 1.0})
    np.testing.assert_array_equal(p.instants, [1.0, 2.0, 4.0])
    with pytest.raises(InvalidScheduleError):
        SamplingSchedule.from_dict({"instants": [0, 1], "periods": [1]})


# --------------------------------------------------------------------------
# G vectors and f


def test_g_vectors_first_order(first_order):
    G = g_vectors(realize(first_order), [1.0])
    np.testing.assert_allclose(G[0], [1.0])
    np.testing.assert_allclose(G[1], [math.exp(-1.0)], rtol=1e-15)


def test_g_vectors_small_periods():
    r = realize(random_stable_system(3, 4))
    for G in g_vectors(r, [1e-12] * 3):
        np.testing.assert_allclose(G, r.x0, rtol=1e-8, atol=1e-12)


def test_g_vectors_select_impulse_response():
    for seed in range(10):
        tf = random_stable_system(1 + seed % 5, seed)
        r = realize(tf)
        periods = np.random.default_rng(seed).uniform(0.1, 1.5, size=tf.n)
        alphas = np.concatenate([[0.0], np.cumsum(periods)])
        for G, al in zip(g_vectors(r, periods), alphas):
            h = impulse_response(r, al)
            assert r.c @ G == pytest.approx(h, rel=1e-10, abs=1e-14)


def test_f_first_order(first_order):
    f = f_coeffs_solve(realize(first_order), [0.5])
    np.testing.assert_allclose(f, [0.6065306597126334], rtol=1e-14)


def test_f_two_real_poles_constant():
    f = f_coeffs_solve(realize(TWO_POLE), [1.0, 1.0])
    np.testing.assert_allclose(f, [math.exp(-1) + math.exp(-2), -math.exp(-3)], rtol=1e-12)


def test_f_resonant_window_raises():
    with pytest.raises(InadmissibleSequenceError) as info:
        f_coeffs_solve(realize(OSC), [math.pi, 1.0])
    assert info.value.delta_magnitude < 1e-12


def test_f_marginal_window_warns():
    with pytest.warns(IllConditionedWindowWarning):
        f_coeffs_solve(realize(OSC), [math.pi + 1e-10, 1.0])


def test_f_closed_matches_solve_two_pole():
    periods = [1.0, 2.0]
    np.testing.assert_allclose(f_coeffs_closed(spectrum(TWO_POLE), periods),
                               f_coeffs_solve(realize(TWO_POLE), periods), rtol=1e-12)


def test_f_closed_resonant_raises():
    with pytest.raises(InadmissibleSequenceError):
        f_coeffs_closed(spectrum(OSC), [math.pi, 1.0])


@pytest.mark.filterwarnings("ignore::aperiodic_lti.IllConditionedWindowWarning")
def test_f_closed_matches_solve_random():
    for seed in range(100):
        tf = random_stable_system(1 + seed % 5, seed)
        periods = np.random.default_rng(seed).uniform(0.2, 1.5, size=tf.n)
        f1 = f_coeffs_solve(realize(tf), periods)
        f2 = f_coeffs_closed(spectrum(tf), periods)
        assert np.max(np.abs(f1 - f2)) <= 1e-9 * max(1e-12, np.max(np.abs(f2)))


def test_f_constant_equals_symmetric_functions():
    for seed in range(20):
        tf = random_stable_system(1 + seed % 5, seed)
        sp = spectrum(tf)
        np.testing.assert_allclose(f_coeffs_closed(sp, [0.7] * tf.n), a_coeffs(sp, 0.7),
                                   rtol=1e-9, atol=1e-13)


def test_extended_recurrence():
    # h(s + alpha_n) = sum_i f_i h(s + alpha_{n-i}) for the analytically extended h
    for seed in range(10):
        tf = random_stable_system(2 + seed % 4, seed)
        r = realize(tf)
        periods = np.random.default_rng(seed).uniform(0.2, 1.2, size=tf.n)
        f = f_coeffs_solve(r, periods)
        alphas = np.concatenate([[0.0], np.cumsum(periods)])
        n = tf.n
        for s in np.linspace(-2.0, 3.0, 11):
            lhs = impulse_response(r, s + alphas[n], "extended")
            rhs = sum(f[i - 1] * impulse_response(r, s + alphas[n - i], "extended")
                      for i in range(1, n + 1))
            scale = max(1.0, abs(lhs))
            assert abs(lhs - rhs) < 1e-8 * scale


# --------------------------------------------------------------------------
# g coefficients


def test_g_impulse_first_order(first_order):
    sched = SamplingSchedule.from_periods([0.3, 1.7, 0.9])
    r = realize(first_order)
    for k in range(1, 4):
        f = f_coeffs_solve(r, sched.window(k, 1))
        np.testing.assert_allclose(g_coeffs_impulse(r, sched, k, f), [1.0])


def test_g0_is_first_markov_parameter():
    for seed in range(10):
        tf = random_stable_system(1 + seed % 5, seed)
        sched = SamplingSchedule.from_periods(np.random.default_rng(seed).uniform(0.2, 1, 8))
        c = step_coefficients(tf, sched, tf.n + 1, "impulse")
        assert c.g[0] == pytest.approx(realize(tf).x0[0], rel=1e-12, abs=1e-15)
        assert c.f.size == tf.n and c.g.size == tf.n


def test_g_zoh_first_order(first_order):
    sched = SamplingSchedule.constant(1.0, 4)
    sr = step_realization(first_order)
    f = f_coeffs_solve(realize(first_order), [1.0])
    np.testing.assert_allclose(g_coeffs_zoh(sr, sched, 2, f), [0.0, 1.0 - math.exp(-1.0)],
                               atol=1e-15)


def test_g_zoh_lengths_and_zero_lead():
    tf = random_stable_system(3, 11)
    sched = SamplingSchedule.from_periods(np.random.default_rng(3).uniform(0.2, 1, 8))
    c = step_coefficients(tf, sched, 5, "zoh")
    assert c.g.size == 4 and c.g[0] == 0.0


def test_g_step_out_of_range(first_order):
    sched = SamplingSchedule.constant(1.0, 3)
    with pytest.raises(IndexError):
        g_coeffs_impulse(realize(first_order), sched, 0, [0.5])


def test_table1_zoh_coefficients_constant_schedule(table1_system):
    c = step_coefficients(table1_system, SamplingSchedule.constant(2.0, 6), 4, "zoh")
    np.testing.assert_allclose(c.g[1:], [0.0026, 0.0092, 0.0018], atol=5e-4)
    np.testing.assert_allclose(c.f, [2.2549, -1.689, 0.4203], atol=5e-4)


# --------------------------------------------------------------------------
# simulation


def test_zero_input_zero_output():
    tf = random_stable_system(3, 1)
    sched = SamplingSchedule.from_periods(np.full(10, 0.4))
    for hold in ("impulse", "zoh"):
        np.testing.assert_array_equal(simulate(tf, sched, np.zeros(11), hold), 0.0)


def test_two_pole_impulse_train_matches_oracle():
    sched = SamplingSchedule.constant(1.0, 19)
    u = np.random.default_rng(0).normal(size=20)
    res = compare(simulate(TWO_POLE, sched, u, "impulse"),
                  convolution_oracle(TWO_POLE, sched, u, "impulse"), 1e-10)
    assert res.passed, res


@pytest.mark.parametrize("hold", ["impulse", "zoh"])
def test_third_order_random_schedule(hold):
    tf = random_stable_system(3, 5)
    sched, _ = random_admissible_schedule(spectrum(tf), 50, 9)
    u = np.random.default_rng(1).normal(size=len(sched))
    res = compare(simulate(tf, sched, u, hold), convolution_oracle(tf, sched, u, hold), 1e-8)
    assert res.passed, res


def test_simulate_reports_inadmissible_step():
    periods = [0.7, 0.4, math.pi, 0.5, 0.6]
    sched = SamplingSchedule.from_periods(periods)
    with pytest.raises(InadmissibleSequenceError) as info:
        simulate(OSC, sched, np.ones(6))
    # step k uses periods (T_{k-1}, T_k); the resonant period is T_3
    assert info.value.step == 4


def test_model_coefficients_flags_rows():
    sched = SamplingSchedule.from_periods([0.7, 0.4, math.pi, 0.5, 0.6])
    rows = model_coefficients(OSC, sched, "impulse", fail_fast=False)
    status = {c.k: c.status for c in rows}
    assert status[4] == "inadmissible" and status[3] == "ok"
    assert np.all(np.isnan(rows[2].f))


def test_length_mismatch(first_order):
    with pytest.raises(InvalidScheduleError):
        simulate(first_order, SamplingSchedule.constant(1.0, 3), np.ones(3))


def test_bad_hold(first_order):
    with pytest.raises(ValueError):
        simulate(first_order, SamplingSchedule.constant(1.0, 3), np.ones(4), "foh")


def test_translation_invariance():
    tf = random_stable_system(3, 8)
    periods = np.random.default_rng(8).uniform(0.2, 1.2, size=8)
    a = model_coefficients(tf, SamplingSchedule.from_periods(periods, 0.0), "zoh")
    b = model_coefficients(tf, SamplingSchedule.from_periods(periods, 123.0), "zoh")
    for ca, cb in zip(a, b):
        np.testing.assert_allclose(ca.f, cb.f, rtol=1e-9, atol=1e-13)
        np.testing.assert_allclose(ca.g, cb.g, rtol=1e-9, atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.05, 3.0), min_size=3, max_size=15),
       st.sampled_from(["impulse", "zoh"]))
def test_two_pole_any_schedule(periods, hold):
    # all-real spectra give admissible windows for every schedule
    sched = SamplingSchedule.from_periods(periods)
    u = np.cos(np.arange(len(sched)))
    res = compare(simulate(TWO_POLE, sched, u, hold),
                  convolution_oracle(TWO_POLE, sched, u, hold), 1e-8)
    assert res.passed, res
