import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pdt.rates import (DomainError, InfeasibleParameters, ProtocolParams,
                       capacity_2p, rate_bounds, size_plan)


@pytest.mark.parametrize("eps1, eps2, expected", [
    (0.0, 0.9, 0.0),
    (0.5, 0.5, 0.25),
    (0.4, 0.6, 0.16),    # min(0.36, 0.16, 0.24)
])
def test_capacity_examples(eps1, eps2, expected):
    assert capacity_2p(eps1, eps2) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("bad", [-0.1, 1.5, float("nan")])
def test_capacity_domain(bad):
    with pytest.raises(DomainError):
        capacity_2p(bad, 0.5)
    with pytest.raises(DomainError):
        rate_bounds(0.5, bad, 3)


def test_capacity_grid_properties():
    grid = np.round(np.arange(0, 101) * 0.01, 2)
    best = max(capacity_2p(a, b) for a in grid for b in grid)
    assert best == pytest.approx(0.25)
    assert capacity_2p(0.5, 0.5) == best
    for a in grid:
        for b in grid:
            assert capacity_2p(a, b) == capacity_2p(b, a)
        for edge in (0.0, 1.0):
            assert capacity_2p(a, edge) == 0.0
            assert capacity_2p(edge, a) == 0.0


def test_rate_bounds_examples():
    b = rate_bounds(0.6, 0.6, 3)
    assert b.r_ub == pytest.approx(0.18, abs=1e-12)    # min(0.24, 0.24, 0.36/2)
    assert b.r_lb == pytest.approx(0.09, abs=1e-12)    # (0.6/2)^2
    assert b.c2p is None
    assert b.r_ex == 0.0

    b = rate_bounds(0.7, 0.7, 2)
    # 0.3^2 + min(0.3*0.4, 0.3*0.4)
    assert b.r_lb == pytest.approx(0.21, abs=1e-12)
    assert b.r_ub == pytest.approx(0.21, abs=1e-12)
    assert b.r_ex == pytest.approx(0.12, abs=1e-12)
    assert b.c2p == pytest.approx(capacity_2p(0.7, 0.7), abs=1e-12)


def test_rate_bounds_grid():
    grid = np.round(np.arange(0, 101) * 0.01, 2)
    for N in range(2, 7):
        for a, b in itertools.product(grid, grid):
            rb = rate_bounds(a, b, N)
            assert 0 <= rb.r_lb <= rb.r_ub + 1e-15
            if N == 2:
                assert abs(rb.r_lb - rb.c2p) <= 1e-12
                assert abs(rb.r_ub - rb.c2p) <= 1e-12


def test_size_plan_low_erasure_example():
    plan = size_plan(ProtocolParams(n=1000, N=2, eps1=0.3, eps2=0.3, delta=0.05))
    assert plan.r1 == pytest.approx(0.25) and plan.r2 == pytest.approx(0.25)
    assert (plan.size_L, plan.size_Lt) == (250, 125)
    assert (plan.size_C, plan.size_Ct, plan.size_S, plan.size_St) == (0, 0, 0, 0)
    assert plan.m_dot == 59      # floor(0.95 * 62.5)
    assert plan.m_ddot == 0
    assert plan.m_total == 59


def test_size_plan_high_erasure_example():
    plan = size_plan(ProtocolParams(n=1000, N=2, eps1=0.7, eps2=0.7, delta=0.05))
    assert plan.r1 == pytest.approx(0.25) and plan.r2 == pytest.approx(0.25)
    assert plan.size_L == 250
    assert plan.size_C == 400
    assert plan.size_Lt == 125
    assert plan.size_Ct == 200
    assert plan.size_S == 400
    assert plan.size_St == 200
    assert plan.m_ddot == 90      # min(200 * 0.45, 400 * 0.25)
    assert plan.m_dot == 59


def test_size_plan_truncation_branches():
    # eps1 < eps2: S~ is cut to n(2 eps1 - 1) r2 / (1/2 - delta) = 1000*.2*.15/.45
    plan = size_plan(ProtocolParams(n=1000, N=2, eps1=0.6, eps2=0.8, delta=0.05))
    assert plan.size_Ct == 420 and plan.size_St == 67
    assert plan.size_S == plan.size_C == 200
    assert plan.m_ddot == min(67 * 45 // 100, 200 * 15 // 100)
    # eps2 < eps1: S is cut to 2|L|(2 eps2 - 1)(1/2 - delta) / r2 = 300*.2*.45/.35
    plan = size_plan(ProtocolParams(n=1000, N=2, eps1=0.8, eps2=0.6, delta=0.05))
    assert plan.size_L == 150 and plan.size_Ct == 60 and plan.size_St == 60
    assert plan.size_C == 600 and plan.size_S == 78


def test_size_plan_regime_boundary_is_strict():
    plan = size_plan(ProtocolParams(n=1000, N=2, eps1=0.5, eps2=0.7, delta=0.05))
    assert plan.size_C == plan.size_Ct == plan.m_ddot == 0
    plan = size_plan(ProtocolParams(n=3000, N=3, eps1=Fraction(2, 3), eps2=0.9, delta=0.05))
    assert plan.size_C == plan.size_Ct == 0


@pytest.mark.parametrize("kwargs, invariant", [
    (dict(n=10, N=2, eps1=0.5, eps2=0.5, delta=0.5), "delta < min(eps1/(N-1), 1-eps1)"),
    (dict(n=1000, N=2, eps1=0.5, eps2=1.0, delta=0.01), "delta < min(eps2/(N-1), 1-eps2)"),
    (dict(n=1000, N=2, eps1=0.0, eps2=0.5, delta=0.01), "delta < min(eps1/(N-1), 1-eps1)"),
    (dict(n=3, N=2, eps1=0.5, eps2=0.5, delta=0.4), "floor(n*r1) >= 1"),
    (dict(n=4, N=2, eps1=0.5, eps2=0.5, delta=0.1), "floor(N*|L|*r2) >= N"),
])
def test_size_plan_infeasible(kwargs, invariant):
    with pytest.raises(InfeasibleParameters) as info:
        size_plan(ProtocolParams(**kwargs))
    assert info.value.invariant == invariant
    assert invariant in str(info.value)


eps_strategy = st.integers(1, 99).map(lambda k: k / 100)


@settings(max_examples=300, deadline=None)
@given(n=st.integers(50, 200_000), N=st.integers(2, 6), eps1=eps_strategy,
       eps2=eps_strategy, delta=st.sampled_from([0.001, 0.01, 0.02, 0.05]))
def test_size_plan_invariants(n, N, eps1, eps2, delta):
    try:
        params = ProtocolParams(n=n, N=N, eps1=eps1, eps2=eps2, delta=delta)
    except InfeasibleParameters:
        assume(False)
    plan = size_plan(params)
    assert plan == size_plan(ProtocolParams(n=n, N=N, eps1=eps1, eps2=eps2, delta=delta))
    assert plan.size_L * N <= n
    assert plan.size_C <= n - N * plan.size_L
    assert plan.size_Lt * N + plan.size_Ct <= N * plan.size_L
    assert plan.size_St <= plan.size_Ct and plan.size_S <= plan.size_C
    assert plan.m_ddot <= plan.size_St * (1 / N - delta) + 1e-9
    assert plan.m_ddot <= plan.size_S * (1 - eps2 - delta) + 1e-9
    assert plan.m_total == plan.m_dot + plan.m_ddot
    bounds = rate_bounds(eps1, eps2, N)
    assert plan.m_dot / n + plan.m_ddot / n <= bounds.r_lb + 2 * delta
