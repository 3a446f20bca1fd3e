import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import balance_residuals
from supplier_alloc.markov import (
    FC_STATES,
    HC_STATES,
    SD_STATES,
    ComponentRates,
    SteadyStateError,
    build_generator,
    build_state_space,
    derive_component_rates,
    solve_steady_state,
    state_index,
    steady_state_for,
    system_availability,
)
from supplier_alloc.scenario import Assignment


def solve(lam, mu):
    return solve_steady_state(build_generator(ComponentRates(tuple(lam), tuple(mu))))


# --- rates -------------------------------------------------------------------

def test_rates_for_reported_solution(paper):
    r = derive_component_rates(paper, Assignment(3, 1, 2, 1))
    assert r.lam == (0.01, 0.05, 0.03, 0.05)
    assert r.mu == (0.1, 0.05, 0.07, 0.05)
    assert r.reliability == (0.99, 0.9, 0.95, 0.9)


def test_rates_all_supplier_three(paper):
    r = derive_component_rates(paper, Assignment(3, 3, 3, 3))
    assert r.lam == (0.01,) * 4
    assert r.mu == (0.1,) * 4


def test_rates_index_out_of_range(paper):
    with pytest.raises(ValueError):
        derive_component_rates(paper, Assignment(1, 1, 1, 4))


def test_rates_reject_zero_repair():
    with pytest.raises(ValueError):
        ComponentRates((0.1,) * 4, (1, 1, 0, 1))


# --- state space ---------------------------------------------------------------

def test_state_space_numbering():
    states = build_state_space()
    assert len(states) == 15
    expected = [
        (True, ""), (True, "B"), (True, "D"), (True, "C"), (True, "BD"), (True, "BC"),
        (True, "CD"), (False, "BD"), (False, "B"), (False, "BC"), (True, "BCD"),
        (False, "D"), (False, ""), (False, "C"), (False, "CD"),
    ]
    for st_, (up, down) in zip(states, expected):
        assert st_.a_up == up
        assert st_.down_set == frozenset(down)
    assert [s.index for s in states] == list(range(1, 16))
    # A down with all three parallel units down is not a state
    assert (False, frozenset("BCD")) not in {(s.a_up, s.down_set) for s in states}


def test_capacity_classes():
    assert set(SD_STATES) == {8, 9, 10, 11, 12, 13, 14, 15}
    assert set(HC_STATES) == {5, 6, 7}
    assert set(FC_STATES) == {1, 2, 3, 4}


# --- generator ---------------------------------------------------------------

RATES = ComponentRates((0.011, 0.052, 0.033, 0.054), (0.105, 0.056, 0.077, 0.058))


def _offdiag(q, row):
    return {k + 1: q[row - 1, k] for k in range(15) if k != row - 1 and q[row - 1, k] != 0}


def test_generator_row_s13():
    q = build_generator(RATES)
    assert _offdiag(q, 13) == {1: RATES.mu[0]}


def test_generator_row_s2():
    q = build_generator(RATES)
    l1, l2, l3, l4 = RATES.lam
    assert _offdiag(q, 2) == {1: RATES.mu[1], 6: l3, 5: l4, 9: l1}


def test_generator_row_s11_has_no_a_failure():
    q = build_generator(RATES)
    _, m2, m3, m4 = RATES.mu
    assert _offdiag(q, 11) == {7: m2, 5: m3, 6: m4}


def test_generator_a_down_rows_only_repair_a():
    q = build_generator(RATES)
    for st_ in build_state_space():
        if not st_.a_up:
            target = state_index(True, st_.down_set)
            assert _offdiag(q, st_.index) == {target: RATES.mu[0]}


def test_generator_rows_sum_to_zero():
    rng = random.Random(3)
    for _ in range(50):
        r = ComponentRates(tuple(rng.uniform(0, 1) for _ in range(4)),
                           tuple(rng.uniform(0.01, 1) for _ in range(4)))
        q = build_generator(r)
        assert np.all(np.abs(q.sum(axis=1)) <= 1e-12)
        assert np.all(q - np.diag(np.diag(q)) >= 0)


# --- steady state ------------------------------------------------------------

def test_reported_column_two():
    ss = solve((0.01, 0.05, 0.03, 0.05), (0.1, 0.05, 0.07, 0.05))
    assert ss.p100 == pytest.approx(0.549, abs=0.005)
    assert ss.p50 == pytest.approx(0.297, abs=0.005)
    assert ss.p0 == pytest.approx(0.153, abs=0.005)


def test_reported_column_four():
    ss = solve((0.01, 0.03, 0.03, 0.03), (0.1, 0.07, 0.07, 0.07))
    assert ss.p100 == pytest.approx(0.714, abs=0.01)
    assert ss.p50 == pytest.approx(0.172, abs=0.01)
    assert ss.p0 == pytest.approx(0.113, abs=0.01)


def test_no_failures_stays_in_state_one():
    ss = solve((0, 0, 0, 0), (0.1, 0.2, 0.3, 0.4))
    assert ss.s == (1.0,) + (0.0,) * 14


@pytest.mark.parametrize("l1, m1", [(0.05, 0.05), (0.01, 0.1), (0.3, 0.02), (1e-4, 2.0)])
def test_two_state_collapse(l1, m1):
    ss = solve((l1, 0, 0, 0), (m1, 0.5, 0.5, 0.5))
    assert ss.p0 == pytest.approx(l1 / (l1 + m1), abs=1e-12)
    assert ss.p50 == pytest.approx(0.0, abs=1e-12)


def test_single_absorbing_state_takes_all_mass():
    q = build_generator(RATES)
    q[12, :] = 0.0  # state 13 can no longer be left
    ss = solve_steady_state(q)
    assert ss.s[12] == pytest.approx(1.0, abs=1e-12)


def test_two_absorbing_states_are_singular():
    q = build_generator(RATES)
    q[12, :] = 0.0
    q[10, :] = 0.0
    with pytest.raises(SteadyStateError):
        solve_steady_state(q)


def test_invalid_generator_rejected():
    q = build_generator(RATES)
    q[0, 1] += 1.0
    with pytest.raises(ValueError):
        solve_steady_state(q)


@pytest.mark.parametrize("p0, expected", [(0.153, 0.847), (0.0, 1.0), (0.113, 0.887)])
def test_system_availability(p0, expected):
    from supplier_alloc.markov import SteadyState
    ss = SteadyState(s=(), p0=p0, p50=0.0, p100=1 - p0)
    assert system_availability(ss) == pytest.approx(expected, abs=1e-12)


rates_st = st.tuples(
    st.tuples(*[st.floats(0, 2, allow_nan=False)] * 4),
    st.tuples(*[st.floats(1e-3, 2, allow_nan=False)] * 4),
)


@settings(max_examples=150, deadline=None)
@given(rates_st)
def test_balance_equations_hold(rates):
    lam, mu = rates
    ss = solve(lam, mu)
    assert max(abs(x) for x in balance_residuals(ss.s, lam, mu)) < 1e-10
    assert sum(ss.s) == pytest.approx(1.0, abs=1e-10)
    assert min(ss.s) >= 0
    assert ss.p0 + ss.p50 + ss.p100 == pytest.approx(1.0, abs=1e-10)
    assert ss.p100 == pytest.approx(sum(ss.s[k - 1] for k in (1, 2, 3, 4)), abs=1e-15)
    assert ss.p50 == pytest.approx(sum(ss.s[k - 1] for k in (5, 6, 7)), abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1), st.floats(1e-3, 1), st.floats(0, 1), st.floats(1e-3, 1))
def test_symmetry_when_parallel_rates_equal(l1, m1, lu, mu_u):
    s = solve((l1, lu, lu, lu), (m1, mu_u, mu_u, mu_u)).s

    def same(*idx):
        vals = [s[k - 1] for k in idx]
        assert max(vals) - min(vals) < 1e-10

    same(2, 3, 4)
    same(5, 6, 7)
    same(9, 12, 14)
    same(8, 10, 15)


@settings(max_examples=80, deadline=None)
@given(rates_st)
def test_memoized_solve_matches_direct(rates):
    lam, mu = rates
    r = ComponentRates(lam, mu)
    direct = solve_steady_state(build_generator(r)).s
    cached = steady_state_for(r).s
    assert np.max(np.abs(np.subtract(direct, cached))) < 1e-12


def test_lower_failure_rate_never_lowers_full_capacity():
    rng = random.Random(11)
    grid = [0.005, 0.01, 0.03, 0.05, 0.1]
    for _ in range(60):
        lam = [rng.choice(grid) for _ in range(4)]
        mu = [rng.choice([0.05, 0.07, 0.1]) for _ in range(4)]
        base = solve(lam, mu).p100
        for i in range(4):
            for smaller in (x for x in grid if x < lam[i]):
                trial = list(lam)
                trial[i] = smaller
                assert solve(trial, mu).p100 >= base - 1e-12
