import math
from fractions import Fraction

import numpy as np
import pytest

from pdt.audit import (BudgetExceeded, ExplicitJoint, TinyConfig, ZeroProbabilityCondition,
                       announcement_tv, completed, enumerate_joint, high_erasure_tiny,
                       mass_is_one, monte_carlo_stats, mutual_information, privacy_report,
                       total_variation)
from pdt.protocol import Database, RunSeeds, execute
from pdt.randomness import derive_rng
from pdt.rates import ProtocolParams, size_plan


@pytest.fixture(scope="module")
def joint_n4():
    return enumerate_joint(TinyConfig(n=4))


@pytest.fixture(scope="module")
def joint_high():
    return enumerate_joint(high_erasure_tiny())


# --- mutual information on explicit joints -----------------------------------

def test_mi_independent_bits_is_zero():
    j = ExplicitJoint([({"A": a, "B": b}, 0.25) for a in (0, 1) for b in (0, 1)])
    assert mutual_information(j, "A", "B") == 0.0


def test_mi_copy_is_one_bit():
    j = ExplicitJoint([({"A": a, "B": a}, 0.5) for a in (0, 1)])
    assert mutual_information(j, "A", "B") == pytest.approx(1.0, abs=1e-15)


def test_mi_conditional_and_zero_event():
    # A xor B = C with A, B uniform: I(A; C) = 0 but I(A; C | B = 0) = 1
    atoms = [({"A": a, "B": b, "C": a ^ b}, 0.25) for a in (0, 1) for b in (0, 1)]
    j = ExplicitJoint(atoms)
    assert mutual_information(j, "A", "C") == 0.0
    assert mutual_information(j, "A", "C", given=lambda c: c["B"] == 0) == pytest.approx(1.0)
    assert mutual_information(j, "A", ["B", "C"]) == pytest.approx(1.0)
    with pytest.raises(ZeroProbabilityCondition):
        mutual_information(j, "A", "C", given=lambda c: c["B"] == 7)


def test_mi_against_closed_form():
    # binary symmetric channel with crossover q: I = 1 - h(q)
    q = 0.11
    atoms = [({"A": a, "B": b}, 0.5 * (q if a != b else 1 - q)) for a in (0, 1) for b in (0, 1)]
    h = -q * math.log2(q) - (1 - q) * math.log2(1 - q)
    assert mutual_information(ExplicitJoint(atoms), "A", "B") == pytest.approx(1 - h, abs=1e-14)


def test_total_variation():
    assert total_variation({"a": 1.0}, {"b": 1.0}) == 1.0
    assert total_variation({"a": 0.5, "b": 0.5}, {"a": 0.5, "b": 0.5}) == 0.0


# --- enumeration -------------------------------------------------------------

def test_two_position_accounting():
    j = enumerate_joint(TinyConfig(n=2))
    # every (U, W, Bob pattern, Cathy pattern) has exactly one outcome: all draws are forced
    assert j.num_outcomes == 2 * 2 * 4 * 4
    assert j.num_atoms == j.num_outcomes * 4 * 4
    assert mass_is_one(j)
    cols = j.unit_columns()
    assert j.probability(lambda c: c["stage"] != 1) == 0.5  # Bob passes on 2 of 4 patterns
    # then Cathy passes with 1/2, and her good position must be L_W: another 1/2
    assert j.probability(completed) == 0.125
    assert set(np.unique(cols["stage"])) == {0, 1, 2, 3}


@pytest.mark.parametrize("cfg", [
    TinyConfig(n=3), TinyConfig(n=4, eps1=Fraction(1, 3), eps2=Fraction(3, 4)),
    TinyConfig(n=5, size_L=2), TinyConfig(n=4, N=3), TinyConfig(n=4, mutation="expose-choice"),
])
def test_mass_sums_to_one(cfg):
    j = enumerate_joint(cfg)
    assert mass_is_one(j)
    assert abs(math.fsum(j.p.tolist()) - 1) <= 1e-12


def test_high_erasure_mass_and_stages(joint_high):
    assert mass_is_one(joint_high)
    # every stage, including both OT checks, is reachable
    assert set(np.unique(joint_high.stage)) == {0, 1, 2, 3, 4}


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        enumerate_joint(TinyConfig(n=12))
    with pytest.raises(BudgetExceeded):
        enumerate_joint(TinyConfig(n=4, budget=10 ** 5))


def test_config_validation():
    with pytest.raises(ValueError):
        TinyConfig(n=4, m_ddot=1)
    with pytest.raises(ValueError):
        TinyConfig(n=4, include_high_erasure=True)
    with pytest.raises(ValueError):
        TinyConfig(n=4, mutation="nope")
    assert TinyConfig(n=4, eps1="1/3").eps1 == Fraction(1, 3)


def test_atom_transcript_is_deterministic(joint_n4):
    s = int(np.flatnonzero(joint_n4.J == 1)[0])
    assert joint_n4.transcript_of(s, 3, 9) == joint_n4.transcript_of(s, 3, 9)


# --- privacy ---------------------------------------------------------------

def test_choice_independent_of_sets(joint_n4):
    assert mutual_information(joint_n4, "U", "L", completed) <= 1e-9
    assert mutual_information(joint_n4, "W", "Lt", completed) <= 1e-9


def test_sanity_bob_learns_his_file(joint_n4):
    # the audit would be vacuous if the chosen file were not recoverable from the view
    assert mutual_information(joint_n4, "K_U", "V_B", completed) == pytest.approx(1.0)
    assert mutual_information(joint_n4, "K_W", "V_C", completed) == pytest.approx(1.0)


def test_faithful_report_passes(joint_n4):
    report = privacy_report(TinyConfig(n=4), joint_n4)
    assert report.all_pass
    assert [e.id for e in report.entries] == ["ach_1", "ach_3", "ach_4", "ach_5", "ach_6",
                                              "ach_7", "ach_8", "ach_uw"]
    assert all(0 <= e.value <= 1e-9 for e in report.entries)


def test_faithful_high_erasure_report_passes(joint_high):
    assert privacy_report(high_erasure_tiny(), joint_high).all_pass


def test_three_files_report_passes():
    report = privacy_report(TinyConfig(n=5, N=3))
    assert report.all_pass
    assert report.entry("ach_uw").value <= 1e-9


def test_mutation_exposes_choice():
    cfg = TinyConfig(n=4, mutation="expose-choice")
    j = enumerate_joint(cfg)
    report = privacy_report(cfg, j)
    assert not report.all_pass
    assert report.entry("ach_4").value == pytest.approx(1.0)
    assert announcement_tv(j, "Bob") == pytest.approx(1.0)
    assert announcement_tv(j, "Cathy") <= 1e-12


@pytest.mark.parametrize("party", ["Bob", "Cathy"])
def test_announcements_do_not_depend_on_choice(joint_n4, joint_high, party):
    for j in (joint_n4, joint_high):
        assert announcement_tv(j, party) <= 1e-12
        assert announcement_tv(j, party, completed) <= 1e-12


# --- oracle and simulator agree ----------------------------------------------

def _locate_run(joint, out, db):
    cfg = joint.cfg
    bmask = sum(1 << i for i in np.flatnonzero(out.y.erased_mask))
    cmask = sum(1 << i for i in np.flatnonzero(out.z.erased_mask))
    msgs = [(m.sender, m.tag, m.payload) for m in out.transcript]
    s = joint.locate(out.u, out.w, bmask, cmask, msgs)
    k = sum(int(db.files[j, b]) << (j * cfg.m + b) for j in range(cfg.N) for b in range(cfg.m))
    x = sum(int(v) << i for i, v in enumerate(out.x))
    return s, k, x, msgs


@pytest.mark.parametrize("cfg", [TinyConfig(n=4), high_erasure_tiny(), TinyConfig(n=4, N=3),
                                 TinyConfig(n=4, mutation="expose-choice")])
def test_simulator_matches_enumeration(cfg):
    joint = enumerate_joint(cfg)
    plan = cfg.plan()
    completed_runs = 0
    trials = 600
    for seed in range(trials):
        rng = derive_rng(seed, "agreement")
        u, w = (int(v) for v in rng.integers(0, cfg.N, 2))
        db = Database(rng.integers(0, 2, (cfg.N, cfg.m), dtype=np.uint8))
        out = execute(plan, float(cfg.eps1), float(cfg.eps2), db, u, w,
                      RunSeeds.from_master(seed), mutation=cfg.mutation)
        s, k, x, msgs = _locate_run(joint, out, db)
        assert joint.p[s] > 0
        assert joint.transcript_of(s, k, x) == msgs
        assert bool(joint.J[s]) == out.completed
        if out.completed:
            completed_runs += 1
            assert joint.decode_ok[s]
    # completion frequency agrees with the exact probability
    p = joint.probability(completed)
    assert abs(completed_runs / trials - p) <= 4 * math.sqrt(p * (1 - p) / trials) + 1e-3


# --- Monte Carlo -------------------------------------------------------------

def test_monte_carlo_small():
    params = ProtocolParams(4000, 2, 0.7, 0.6, 0.05)
    stats = monte_carlo_stats(params, 40, seed=3)
    assert stats.trials == 40 and stats.completed > 0
    assert stats.decode_error_rate == 0.0
    assert stats.mean_achieved_rate == size_plan(params).m_total / params.n
    assert set(stats.transcript_tv) == {"U:0-1", "W:0-1"}
    assert stats.abort_rate == sum(stats.abort_by_stage.values()) / 40


def test_monte_carlo_is_worker_independent():
    params = ProtocolParams(2000, 2, 0.5, 0.5, 0.05)
    a = monte_carlo_stats(params, 12, seed=8)
    b = monte_carlo_stats(params, 12, seed=8, workers=2)
    assert a == b
    with pytest.raises(ValueError):
        monte_carlo_stats(params, 0, seed=8)
