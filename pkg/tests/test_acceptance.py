"""Acceptance criteria, each at its stated tolerance and runtime.

Every test records one PASS/FAIL line that is printed in the terminal
summary, whatever the outcome.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from pdt.audit import (TinyConfig, announcement_tv, completed, enumerate_joint,
                       high_erasure_tiny, mass_is_one, monte_carlo_stats, privacy_report)
from pdt.rates import ProtocolParams, rate_bounds

pytestmark = pytest.mark.slow


def record(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({detail})")
    print(ACCEPTANCE_LINES[-1])
    assert ok, detail


def test_criterion_1_capacity_consistency():
    start = time.perf_counter()
    grid = [k / 20 for k in range(1, 20)]
    worst = 0.0
    ordered = True
    for e1 in grid:
        for e2 in grid:
            b = rate_bounds(e1, e2, 2)
            worst = max(worst, abs(b.r_lb - b.c2p), abs(b.r_ub - b.c2p))
            for N in range(2, 7):
                nb = rate_bounds(e1, e2, N)
                ordered &= nb.r_lb <= nb.r_ub
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and ordered and elapsed < 1.0
    record(1, "capacity consistency", ok,
           f"max |bound - c2p| = {worst:.1e}, r_lb <= r_ub for N=2..6: {ordered}, "
           f"{elapsed:.2f} s")


def _rate_run(eps, trials=100):
    params = ProtocolParams(100_000, 2, eps, eps, 0.01)
    start = time.perf_counter()
    stats = monte_carlo_stats(params, trials, seed=20_000)
    return stats, time.perf_counter() - start


def test_criterion_2_symmetric_rate():
    stats, elapsed = _rate_run(0.5)
    ok = (stats.abort_rate <= 0.01 and stats.decode_errors == 0 and stats.completed > 0
          and stats.min_achieved_rate >= 0.235 and elapsed < 30)
    record(2, "rate achievability at eps=0.5", ok,
           f"abort {stats.abort_rate}, decode errors {stats.decode_errors}, "
           f"min rate {stats.min_achieved_rate:.5f}, {elapsed:.1f} s")


def test_criterion_3_high_erasure_rate():
    stats, elapsed = _rate_run(0.7)
    ok = (stats.decode_errors == 0 and stats.completed > 0
          and stats.min_achieved_rate >= 0.189 and elapsed < 60)
    record(3, "high-erasure rate at eps=0.7", ok,
           f"completed {stats.completed}/{stats.trials}, decode errors {stats.decode_errors}, "
           f"min rate {stats.min_achieved_rate:.5f}, {elapsed:.1f} s")


def test_criterion_4_exact_privacy():
    start = time.perf_counter()
    details, ok = [], True
    for cfg in (TinyConfig(n=4, N=2, eps1=Fraction(1, 2), eps2=Fraction(1, 2)),
                TinyConfig(n=6, N=3)):
        joint = enumerate_joint(cfg)
        report = privacy_report(cfg, joint)
        worst = max(e.value for e in report.entries)
        good = (len(report.entries) == 8 and worst <= 1e-9 and mass_is_one(joint)
                and abs(report.mass - 1) <= 1e-12 and joint.probability(completed) > 0)
        ok &= good
        details.append(f"N={cfg.N} n={cfg.n}: max {worst:.1e}, mass {report.mass!r}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 300
    record(4, "exact privacy at desk scale", ok, "; ".join(details) + f", {elapsed:.0f} s")


def test_criterion_5_correctness_at_scale():
    start = time.perf_counter()
    grid = (0.3, 0.5, 0.7)
    per_point = 1112  # 9 points x 1112 >= 10^4 runs
    runs = completed_runs = errors = 0
    for i, e1 in enumerate(grid):
        for j, e2 in enumerate(grid):
            stats = monte_carlo_stats(ProtocolParams(10_000, 2, e1, e2, 0.02), per_point,
                                      seed=50_000 + 3 * i + j)
            runs += stats.trials
            completed_runs += stats.completed
            errors += stats.decode_errors
    elapsed = time.perf_counter() - start
    ok = runs >= 10_000 and completed_runs > 0 and errors == 0 and elapsed < 600
    record(5, "correctness at scale", ok,
           f"{runs} runs, {completed_runs} completed, {errors} decode failures, {elapsed:.0f} s")


def test_criterion_6_abort_decay():
    start = time.perf_counter()
    trials = 1000
    sizes = (1_000, 10_000, 100_000)
    rows, ok = [], True
    for schedule in range(5):
        rates = [monte_carlo_stats(ProtocolParams(n, 2, 0.5, 0.5, 0.02), trials,
                                   seed=60_000 + schedule).abort_rate for n in sizes]
        monotone = all(a >= b for a, b in zip(rates, rates[1:]))
        ok &= monotone and rates[-1] < 1e-3
        rows.append("/".join(f"{r:.3f}" for r in rates))
    elapsed = time.perf_counter() - start
    record(6, "abort decay with n", ok,
           f"abort rates at n=1e3/1e4/1e5 per schedule: {', '.join(rows)}, {elapsed:.0f} s")


def test_criterion_7_announcement_independence():
    configs = [TinyConfig(n=4), TinyConfig(n=3), TinyConfig(n=5, size_L=2),
               TinyConfig(n=4, eps1=Fraction(1, 3), eps2=Fraction(3, 4)),
               TinyConfig(n=5, N=3), high_erasure_tiny()]
    worst = 0.0
    for cfg in configs:
        joint = enumerate_joint(cfg)
        worst = max(worst, announcement_tv(joint, "Bob"), announcement_tv(joint, "Cathy"))
    mutated = announcement_tv(enumerate_joint(TinyConfig(n=4, mutation="expose-choice")), "Bob")
    ok = worst <= 1e-12 and mutated >= 0.5
    record(7, "announcement independence", ok,
           f"max faithful TV {worst:.1e} over {len(configs)} configs, mutated TV {mutated}")


def test_finite_n_condition_without_abort_slack():
    # the size checks are part of the protocol; decode never fails once J = 1
    report = privacy_report(high_erasure_tiny())
    value = report.entry("ach_1").value
    assert value == 0.0
    assert np.isfinite(report.p_complete) and report.p_complete > 0
