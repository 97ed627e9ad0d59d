import numpy as np
import pytest
from hypothesis import strategies as st

from altruistic_perversity import GameInstance, PayoffMatrix

CONVEX_PD = (21.0, 1.0, 22.0, 20.0)
CONCAVE_PD = (3.0, 1.0, 6.0, 2.0)

payoff = st.floats(min_value=0.0, max_value=10.0, allow_nan=False, allow_infinity=False)
matrices = st.builds(PayoffMatrix, payoff, payoff, payoff, payoff)
masses = st.floats(min_value=0.0, max_value=1.0)
games = st.builds(GameInstance, matrices, masses)
unit = st.floats(min_value=0.0, max_value=1.0)


@pytest.fixture
def convex_pd():
    return PayoffMatrix(*CONVEX_PD)


@pytest.fixture
def concave_pd():
    return PayoffMatrix(*CONCAVE_PD)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def quadratic_form(u, m):
    """u^T A u with the payoff matrix, written out independently of the library."""
    A = np.array([[m.R, m.S], [m.T, m.P]])
    vec = np.array([u, 1.0 - u])
    return float(vec @ A @ vec)
