"""Acceptance criteria 1-10, each at its pinned tolerance.

Every test records one PASS/FAIL line; the lines are repeated in the terminal
summary. All random draws are seeded.
"""

import math
import time
import warnings

import numpy as np
from scipy.optimize import linear_sum_assignment

from aperiodic_lti import (
    IllConditionedWindowWarning,
    SamplingSchedule,
    TransferFunction,
    a_coeffs,
    allowed_arcs_third_order,
    b_coeffs,
    check_periodic_resonance,
    check_second_order,
    compare,
    convolution_oracle,
    dead_time_model,
    f_coeffs_closed,
    f_coeffs_solve,
    model_coefficients,
    periodic_model,
    random_admissible_schedule,
    random_stable_system,
    realize,
    simulate,
    spectrum,
    sweep,
    third_order_delta,
)
from aperiodic_lti._thresholds import hadamard_ratio

TABLE1_T0 = (2.0, 4.0, 6.0, 8.0, 10.0, 12.0)
TABLE1_PRINTED = {
    "b_1": [0.0026, 0.0186, 0.0510, 0.0989, 0.1586, 0.2260],
    "b_2": [0.0092, 0.0486, 0.1086, 0.1718, 0.2257, 0.2643],
    "b_3": [0.0018, 0.0078, 0.0139, 0.0174, 0.0181, 0.0167],
    "a_1": [2.2549, 1.7063, 1.2993, 0.9953, 0.7668, 0.5938],
    "a_2": [-1.689, -0.958, -0.547, -0.314, -0.182, -0.106],
    "a_3": [0.4203, 0.1767, 0.0742, 0.0312, 0.0131, 0.0055],
    "sum_b": [0.0139, 0.0750, 0.1736, 0.2882, 0.4025, 0.5071],
}


def _rel(x, ref):
    x, ref = np.asarray(x, float), np.asarray(ref, float)
    return float(np.max(np.abs(x - ref)) / max(float(np.max(np.abs(ref))), 1e-300))


def test_criterion_01_table1(acceptance, table1_system):
    start = time.perf_counter()
    models = sweep(table1_system, TABLE1_T0, "zoh")
    elapsed = time.perf_counter() - start
    got = {f"b_{j}": [m.b[j] for m in models] for j in (1, 2, 3)}
    got.update({f"a_{i + 1}": [m.a[i] for m in models] for i in range(3)})
    got["sum_b"] = [float(np.sum(m.b)) for m in models]
    worst, where = 0.0, None
    for key, printed in TABLE1_PRINTED.items():
        for T0, g, p in zip(TABLE1_T0, got[key], printed):
            if abs(g - p) > worst:
                worst, where = abs(g - p), f"{key} at T0={T0:g}: {g:.6f} vs {p}"
    ok = worst <= 5e-4 and elapsed < 1.0
    acceptance(1, ok, f"max |computed - printed| = {worst:.2e} ({where}), {elapsed:.3f} s")
    assert ok


def test_criterion_02_gain_identity(acceptance, table1_system):
    # the printed sum row uses the pulse-transfer denominator a' = -a
    res = [float(np.sum(m.b) - (1.0 + np.sum(-m.a))) for m in sweep(table1_system, TABLE1_T0)]
    worst = max(abs(r) for r in res)
    literal = max(abs(float(np.sum(m.b) - (1.0 + np.sum(m.a))))
                  for m in sweep(table1_system, TABLE1_T0))
    ok = worst < 1e-9
    acceptance(2, ok, f"max |sum b - (1 + sum a')| = {worst:.2e} with a' = -a "
                      f"(recursion-sign a gives {literal:.3f})")
    assert ok


def _oracle_protocol(hold):
    worst = 0.0
    start = time.perf_counter()
    for i in range(200):
        tf = random_stable_system(1 + i % 5, i)
        sched, _ = random_admissible_schedule(spectrum(tf), 50, 1000 + i)
        u = np.random.default_rng(2000 + i).normal(size=len(sched))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IllConditionedWindowWarning)
            y = simulate(tf, sched, u, hold)
        worst = max(worst, compare(y, convolution_oracle(tf, sched, u, hold)).max_rel_error)
    return worst, time.perf_counter() - start


def test_criterion_03_oracle_impulse(acceptance):
    worst, elapsed = _oracle_protocol("impulse")
    ok = worst < 1e-8 and elapsed < 30.0
    acceptance(3, ok, f"200 systems, worst relative error {worst:.2e}, {elapsed:.1f} s")
    assert ok


def test_criterion_04_oracle_zoh(acceptance):
    worst, elapsed = _oracle_protocol("zoh")
    ok = worst < 1e-8
    acceptance(4, ok, f"200 systems, worst relative error {worst:.2e}, {elapsed:.1f} s")
    assert ok


def test_criterion_05_dual_path_f(acceptance):
    worst, used, s = 0.0, 0, 0
    while used < 500:
        tf = random_stable_system(1 + s % 5, s)
        sp = spectrum(tf)
        periods = np.random.default_rng(s + 7).uniform(0.1, 1.5, tf.n)
        s += 1
        alphas = np.concatenate([[0.0], np.cumsum(periods)])[:-1]
        if hadamard_ratio(sp.real_basis(alphas)) <= 1e-6:
            continue
        f1 = f_coeffs_solve(realize(tf), periods)
        f2 = f_coeffs_closed(sp, periods)
        worst = max(worst, _rel(f1, f2))
        used += 1
    ok = worst < 1e-9
    acceptance(5, ok, f"{used} pairs ({s - used} skipped), worst relative gap {worst:.2e}")
    assert ok


def test_criterion_06_second_order_sweep(acceptance):
    a, b, eps = -0.2, 1.7, 1e-9
    sp = spectrum(TransferFunction.from_poles([complex(a, b), complex(a, -b)]))
    grid = np.linspace(0.01, 30.0, 10_000)
    multiples = np.arange(1, int(30.0 * b / math.pi) + 1) * math.pi / b
    disagree = 0
    for T in np.concatenate([grid, multiples]):
        r = math.fmod(b * T, math.pi)
        if min(r, math.pi - r) < eps and T in grid:
            continue
        flagged = check_second_order(b, T, eps) is not None
        singular = hadamard_ratio(sp.real_basis(np.array([0.0, T]))) < 1e-10
        disagree += flagged != singular
    ok = disagree == 0
    acceptance(6, ok, f"10000-point sweep plus {multiples.size} exact multiples, "
                      f"{disagree} disagreements")
    assert ok


def _third_order_systems():
    rng = np.random.default_rng(77)
    signs = [(1, 1), (-1, -1), (1, -1), (-1, 1)]
    out = []
    while len(out) < 100:
        sl, sa = signs[len(out) % 4]
        lam = sl * rng.uniform(0.05, 1.5)
        a = sa * rng.uniform(0.05, 1.5)
        b = rng.uniform(0.3, 3.0)
        theta1 = rng.uniform(0.05, 2 * math.pi - 0.05)
        if abs(math.sin(theta1)) < 1e-3:
            continue
        out.append((lam, a, b, theta1 / b))
    return out


def test_criterion_07_arcs(acceptance):
    bad = points = case1 = subset_fail = 0
    for lam, a, b, alpha1 in _third_order_systems():
        arcs = allowed_arcs_third_order(lam, a, b, alpha1)
        # explicit arcs below the horizon, then the periodic arcs on two later rotations
        pieces = list(arcs.arcs)
        base = 2 * math.pi * (math.ceil(arcs.horizon / (2 * math.pi)) + 1)
        for rot in (0, 5):
            pieces += [(base + 2 * math.pi * rot + lo, base + 2 * math.pi * rot + hi)
                       for lo, hi in arcs.periodic]
        for lo, hi in pieces:
            for th in np.linspace(lo, hi, 1002)[1:-1]:
                points += 1
                bad += third_order_delta(lam, a, b, alpha1, th / b) < 1e-12
        theta1 = b * alpha1
        if lam > 0 and theta1 < math.pi:
            case1 += 1
            for th in np.linspace(theta1, math.pi, 1002)[1:-1]:
                if any(blo <= th <= bhi for blo, bhi in arcs.bands):
                    continue
                subset_fail += not arcs.contains_angle(th)
    ok = bad == 0 and subset_fail == 0 and case1 > 0
    acceptance(7, ok, f"{points} arc points, {bad} below threshold; prior interval "
                      f"in {case1} Case-1 instances, {subset_fail} points outside")
    assert ok


def test_criterion_08_periodic_consistency(acceptance):
    worst, redraws = 0.0, 0
    for i in range(100):
        tf = random_stable_system(1 + i % 5, 300 + i)
        rng = np.random.default_rng(i)
        T0 = float(rng.uniform(0.1, 1.5))
        # both paths require an admissible period; clustered poles at short T0 fail
        while not check_periodic_resonance(spectrum(tf), T0).admissible:
            T0 = float(rng.uniform(0.1, 1.5))
            redraws += 1
        sched = SamplingSchedule.constant(T0, tf.n + 4)
        a = a_coeffs(spectrum(tf), T0)
        for hold in ("impulse", "zoh"):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", IllConditionedWindowWarning)
                steps = model_coefficients(tf, sched, hold)
            b = b_coeffs(tf, T0, hold)
            for c in steps:
                worst = max(worst, _rel(c.f, a), _rel(c.g, b))
    ok = worst < 1e-10
    acceptance(8, ok, f"100 systems, both holds, worst relative gap {worst:.2e} "
                      f"({redraws} inadmissible T0 redrawn)")
    assert ok


def test_criterion_09_dead_time(acceptance):
    exact_gap = 0.0
    for i in range(50):
        tf = random_stable_system(1 + i % 5, 500 + i)
        T0 = 0.2 + 0.02 * i
        plain = periodic_model(tf, T0)
        shifted = dead_time_model(tf, T0, (1 + i % 3) * T0)
        exact_gap = max(exact_gap, float(np.max(np.abs(shifted.b - plain.b))),
                        float(np.max(np.abs(shifted.a - plain.a))))
    worst = 0.0
    for i in range(50):
        rng = np.random.default_rng(600 + i)
        tf = random_stable_system(1 + i % 5, 600 + i)
        T0 = float(rng.uniform(0.2, 1.2))
        Td = float(rng.uniform(0.0, 3.0) * T0)
        hold = ("zoh", "impulse")[i % 2]
        u = rng.normal(size=30)
        y = dead_time_model(tf, T0, Td, hold).simulate(u)
        ref = convolution_oracle(tf, SamplingSchedule.constant(T0, 29), u, hold, Td)
        worst = max(worst, compare(y, ref).max_rel_error)
    ok = exact_gap < 1e-14 and worst < 1e-8
    acceptance(9, ok, f"whole-period shift gap {exact_gap:.1e}; 50 fractional cases, "
                      f"worst relative error {worst:.2e}")
    assert ok


def test_criterion_10_root_correspondence(acceptance):
    worst = 0.0
    for i in range(100):
        tf = random_stable_system(1 + i % 5, 700 + i)
        T0 = float(np.random.default_rng(i).uniform(0.1, 1.5))
        sp = spectrum(tf)
        roots = np.roots(np.concatenate([[1.0], -a_coeffs(sp, T0)]))
        expected = np.exp(sp.poles() * T0)
        cost = np.abs(roots[:, None] - expected[None, :])
        r, c = linear_sum_assignment(cost)
        worst = max(worst, float(np.max(cost[r, c])))
    ok = worst < 1e-8
    acceptance(10, ok, f"100 systems, worst root distance {worst:.2e}")
    assert ok
