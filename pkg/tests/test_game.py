import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from altruistic_perversity import (
    Curvature,
    DomainError,
    GameInstance,
    InvalidGameError,
    PayoffMatrix,
    PopulationState,
    altruistic_payoff,
    classify_curvature,
    interior_equilibrium,
    selfish_payoff,
    welfare,
)
from altruistic_perversity.game import is_degenerate, payoff_difference, welfare_is_constant

from .conftest import matrices, quadratic_form, unit


class TestPayoffMatrix:
    def test_coefficients(self, convex_pd):
        c = convex_pd.coefficients()
        assert (c.delta, c.beta, c.constant) == (18.0, -17.0, 20.0)

    @pytest.mark.parametrize("field", ["R", "S", "T", "P"])
    def test_negative_payoff_rejected(self, field):
        kwargs = dict(R=1.0, S=1.0, T=1.0, P=1.0)
        kwargs[field] = -0.5
        with pytest.raises(InvalidGameError) as exc:
            PayoffMatrix(**kwargs)
        assert exc.value.field == field

    @pytest.mark.parametrize("bad", [math.inf, math.nan])
    def test_nonfinite_rejected(self, bad):
        with pytest.raises(InvalidGameError):
            PayoffMatrix(bad, 1, 1, 1)

    @given(matrices)
    def test_coefficients_recomputed_from_entries(self, m):
        c = m.coefficients()
        assert c.delta == m.R + m.P - (m.S + m.T)
        assert c.beta == m.S + m.T - 2 * m.P
        assert c.constant == m.P


class TestGameInstance:
    def test_masses_sum_to_one(self):
        g = GameInstance.from_payoffs(1, 2, 3, 4, p_a=0.3)
        assert g.p_a + g.p_s == 1.0

    @pytest.mark.parametrize("p_a", [-0.1, 1.1, math.nan])
    def test_bad_mass(self, p_a):
        with pytest.raises(InvalidGameError):
            GameInstance.from_payoffs(1, 1, 1, 1, p_a=p_a)

    def test_population_state_bounds(self):
        g = GameInstance.from_payoffs(1, 1, 1, 1, p_a=0.3)
        PopulationState(0.3, 0.7).validate(g)
        with pytest.raises(DomainError):
            PopulationState(0.31, 0.0).validate(g)


class TestWelfare:
    def test_endpoints(self, convex_pd):
        assert welfare(0.0, convex_pd) == 20.0
        assert welfare(1.0, convex_pd) == 21.0

    def test_at_altruist_indifference(self, convex_pd):
        u = 17 / 36
        expected = 20 - 289 / 72
        assert welfare(u, convex_pd) == pytest.approx(expected, abs=1e-12)
        # same value from the global-minimum formula and from u^T A u
        m = convex_pd
        closed = m.P - (2 * m.P - (m.S + m.T)) ** 2 / (4 * (m.R + m.P - (m.S + m.T)))
        assert closed == pytest.approx(expected, abs=1e-12)
        assert quadratic_form(u, m) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("u", [-0.01, 1.01])
    def test_domain(self, convex_pd, u):
        with pytest.raises(DomainError):
            welfare(u, convex_pd)

    def test_vectorized(self, convex_pd):
        u = np.linspace(0, 1, 5)
        assert np.allclose(welfare(u, convex_pd), [quadratic_form(x, convex_pd) for x in u])

    @given(matrices, unit)
    def test_matches_quadratic_form(self, m, u):
        assert welfare(u, m) == pytest.approx(quadratic_form(u, m), rel=1e-12, abs=1e-12)

    @given(matrices, unit)
    def test_decomposes_into_selfish_payoffs(self, m, u):
        f_c, f_d = selfish_payoff(u, m)
        assert welfare(u, m) == pytest.approx(u * f_c + (1 - u) * f_d, rel=1e-12, abs=1e-12)


class TestPayoffs:
    def test_selfish_columns(self, convex_pd):
        assert selfish_payoff(0.0, convex_pd) == (1.0, 20.0)
        assert selfish_payoff(1.0, convex_pd) == (21.0, 22.0)

    def test_selfish_midpoint(self, concave_pd):
        assert selfish_payoff(0.5, concave_pd) == (2.0, 4.0)

    def test_altruistic_at_zero(self, convex_pd):
        assert altruistic_payoff(0.0, convex_pd) == (-17.0, 17.0)

    def test_altruistic_indifferent_at_star(self, convex_pd):
        f_c, f_d = altruistic_payoff(17 / 36, convex_pd)
        assert f_c == pytest.approx(0.0, abs=1e-12)
        assert f_d == pytest.approx(0.0, abs=1e-12)

    @given(matrices, unit)
    def test_altruistic_antisymmetric(self, m, u):
        f_c, f_d = altruistic_payoff(u, m)
        assert f_c == -f_d

    @given(matrices, unit)
    def test_altruistic_matches_component_form(self, m, u):
        f_c, f_d = altruistic_payoff(u, m)
        S_T = m.S + m.T
        assert f_c == pytest.approx((2 * m.R - S_T) * u + (S_T - 2 * m.P) * (1 - u), abs=1e-9)
        assert f_d == pytest.approx((S_T - 2 * m.R) * u + (2 * m.P - S_T) * (1 - u), abs=1e-9)

    @given(matrices, st.floats(min_value=1e-5, max_value=1 - 1e-5))
    def test_altruistic_is_welfare_gradient(self, m, u):
        h = 1e-5
        fd = (quadratic_form(u + h, m) - quadratic_form(u - h, m)) / (2 * h)
        assert altruistic_payoff(u, m)[0] == pytest.approx(fd, abs=1e-6)

    @given(matrices, unit)
    def test_payoff_difference(self, m, u):
        f_cs, f_ds = selfish_payoff(u, m)
        f_ca, f_da = altruistic_payoff(u, m)
        assert payoff_difference("selfish", u, m) == pytest.approx(f_cs - f_ds, abs=1e-9)
        assert payoff_difference("altruistic", u, m) == pytest.approx(f_ca - f_da, abs=1e-9)


class TestInteriorEquilibrium:
    def test_convex_altruistic(self, convex_pd):
        star = interior_equilibrium("altruistic", convex_pd)
        assert star.u == pytest.approx(17 / 36, abs=1e-15)
        assert star.feasible

    def test_convex_selfish_infeasible(self, convex_pd):
        star = interior_equilibrium("selfish", convex_pd)
        assert star.u == pytest.approx(19 / 18, abs=1e-15)
        assert not star.feasible

    def test_concave_altruistic(self, concave_pd):
        star = interior_equilibrium("altruistic", concave_pd)
        assert star.u == 0.75 and star.feasible

    def test_affine_has_none(self):
        assert interior_equilibrium("selfish", PayoffMatrix(4, 2, 5, 3)) is None

    @given(matrices)
    def test_indifference_holds(self, m):
        for kind, payoff in (("selfish", selfish_payoff), ("altruistic", altruistic_payoff)):
            star = interior_equilibrium(kind, m)
            if star is None:
                continue
            if star.feasible:
                f_c, f_d = payoff(star.u, m)
                assert f_c == pytest.approx(f_d, abs=1e-12)


class TestCurvature:
    def test_examples(self, convex_pd, concave_pd):
        assert classify_curvature(convex_pd) is Curvature.STRICTLY_CONVEX
        assert classify_curvature(concave_pd) is Curvature.STRICTLY_CONCAVE
        flat = PayoffMatrix(1, 1, 1, 1)
        assert classify_curvature(flat) is Curvature.AFFINE
        assert welfare_is_constant(flat)
        assert is_degenerate("selfish", flat) and is_degenerate("altruistic", flat)

    def test_tolerance_band(self):
        assert classify_curvature(PayoffMatrix(1 + 5e-10, 1, 1, 1)) is Curvature.AFFINE
        assert classify_curvature(PayoffMatrix(1 + 1e-8, 1, 1, 1)) is Curvature.STRICTLY_CONVEX

    @given(matrices, st.lists(unit, min_size=1, max_size=20))
    def test_extremum(self, m, grid):
        star = interior_equilibrium("altruistic", m)
        if star is None or not (0 < star.u < 1):
            return
        w_star = welfare(star.u, m)
        for u in grid:
            if m.delta < 0:
                assert w_star >= welfare(u, m) - 1e-9
            else:
                assert w_star <= welfare(u, m) + 1e-9
