import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from altruistic_perversity import (
    DomainError,
    GameInstance,
    PopulationState,
    enumerate_equilibria,
    integrate,
    is_nash,
    step_flow,
)
from altruistic_perversity.verification import sample_matrix, trial_generators

from .conftest import CONCAVE_PD, CONVEX_PD, games, unit


def movement(g, state, dt):
    nxt = step_flow(g, state, dt)
    return math.hypot(nxt.x_a - state.x_a, nxt.x_s - state.x_s)


class TestStepFlow:
    def test_interior_equilibrium_is_stationary(self):
        g = GameInstance.from_payoffs(*CONVEX_PD, p_a=0.8)
        s = PopulationState(17 / 36, 0.0)
        nxt = step_flow(g, s, 1e-2)
        assert nxt.x_a == pytest.approx(17 / 36, abs=1e-15)
        assert nxt.x_s == 0.0

    @pytest.mark.parametrize("dt", [0.0, -1e-3, math.inf])
    def test_bad_dt(self, dt):
        g = GameInstance.from_payoffs(*CONVEX_PD, p_a=0.5)
        with pytest.raises(DomainError):
            step_flow(g, PopulationState(0.1, 0.1), dt)

    def test_bad_state(self):
        g = GameInstance.from_payoffs(*CONVEX_PD, p_a=0.5)
        with pytest.raises(DomainError):
            step_flow(g, PopulationState(0.6, 0.1), 1e-2)

    @given(
        st.lists(st.floats(0.0, 10.0), min_size=4, max_size=4, unique=True).map(sorted),
        unit,
        unit,
        unit,
    )
    def test_selfish_mass_decreases_in_pd(self, vals, p_a, fa, fs):
        S, P, R, T = vals
        if min(P - S, R - P, T - R) < 1e-6:
            return
        g = GameInstance.from_payoffs(R, S, T, P, p_a=p_a)
        s = PopulationState(fa * g.p_a, fs * g.p_s)
        if s.x_s > 1e-12:
            assert step_flow(g, s, 1e-2).x_s < s.x_s

    @given(games, unit, unit, st.floats(1e-6, 10.0))
    def test_feasibility_preserved(self, g, fa, fs, dt):
        s = step_flow(g, PopulationState(fa * g.p_a, fs * g.p_s), dt)
        assert 0.0 <= s.x_a <= g.p_a
        assert 0.0 <= s.x_s <= g.p_s

    @settings(max_examples=200)
    @given(games, unit, unit)
    def test_stationary_iff_nash(self, g, fa, fs):
        dt_max = 1e-2
        states = [PopulationState(p.witness_x_a, p.witness_x_s) for p in enumerate_equilibria(g)]
        states.append(PopulationState(fa * g.p_a, fs * g.p_s))
        for s in states:
            stationary = all(movement(g, s, dt) < 1e-12 for dt in (dt_max, dt_max / 10))
            nash = is_nash(g, s.x_a, s.x_s, 1e-9)
            if nash:
                # residual payoff differences are rounding-level at Nash states
                assert movement(g, s, dt_max) < 1e-9
            else:
                assert not stationary


class TestIntegrate:
    def test_concave_pd_converges_to_welfare_max(self):
        g = GameInstance.from_payoffs(*CONCAVE_PD, p_a=0.9)
        traj = integrate(g, PopulationState(0.45, 0.05), dt=1e-2, residual_tol=1e-8)
        assert traj.converged
        assert traj.final_residual < 1e-8
        end = traj.final_state
        assert end.x_a == pytest.approx(0.75, abs=1e-6)
        assert end.x_s == 0.0

    def test_convex_pd_lands_on_enumerated_level(self):
        g = GameInstance.from_payoffs(*CONVEX_PD, p_a=0.8)
        traj = integrate(g, PopulationState(0.79, 0.01))
        assert traj.converged
        assert enumerate_equilibria(g).contains(traj.final_state.utilization, tol=1e-6)

    def test_stationary_start(self):
        g = GameInstance.from_payoffs(*CONVEX_PD, p_a=0.8)
        traj = integrate(g, PopulationState(0.0, 0.0))
        assert traj.converged and traj.steps == 0
        assert traj.samples == [(0.0, 0.0, 0.0)]

    def test_constant_game_stays_put(self):
        g = GameInstance.from_payoffs(2, 2, 2, 2, p_a=0.5)
        traj = integrate(g, PopulationState(0.2, 0.3))
        assert traj.converged and traj.final_state == PopulationState(0.2, 0.3)

    def test_reports_non_convergence(self):
        g = GameInstance.from_payoffs(*CONCAVE_PD, p_a=0.9)
        traj = integrate(g, PopulationState(0.45, 0.05), max_steps=5)
        assert not traj.converged and traj.steps == 5

    def test_samples_are_feasible_and_time_ordered(self):
        g = GameInstance.from_payoffs(*CONCAVE_PD, p_a=0.9)
        traj = integrate(g, PopulationState(0.1, 0.05), record_every=7)
        times = [t for t, _, _ in traj.samples]
        assert all(b > a for a, b in zip(times, times[1:]))
        for _, x_a, x_s in traj.samples:
            assert 0 <= x_a <= g.p_a and 0 <= x_s <= g.p_s

    def test_random_games_converge_to_nash(self):
        for rng in trial_generators(3, 60):
            m = sample_matrix(rng, lambda m: abs(m.delta) > 1e-3)
            g = GameInstance(m, rng.uniform())
            traj = integrate(g, PopulationState(rng.uniform(0, g.p_a), rng.uniform(0, g.p_s)))
            assert traj.converged
            end = traj.final_state
            assert is_nash(g, end.x_a, end.x_s, 1e-6)
