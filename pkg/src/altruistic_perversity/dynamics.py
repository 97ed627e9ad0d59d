"""Projected payoff-difference flow.

Each type moves its cooperator mass in the direction of its payoff
difference and is clipped back into ``[0, p]``::

    x <- clip(x + dt * (f_C(u) - f_D(u)), 0, p)

A state is stationary exactly when every type is either indifferent or
pressed against the bound its payoff difference points to, which is the
Nash condition including the corner cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .game import GameInstance, PopulationState, payoff_difference

DEFAULT_DT = 1e-2
DEFAULT_RESIDUAL_TOL = 1e-8
DEFAULT_MAX_STEPS = 1_000_000


@dataclass
class Trajectory:
    samples: list[tuple[float, float, float]] = field(default_factory=list)
    converged: bool = False
    final_residual: float = math.inf
    steps: int = 0

    @property
    def final_state(self) -> PopulationState:
        _, x_a, x_s = self.samples[-1]
        return PopulationState(x_a, x_s)


def _check_dt(dt: float) -> None:
    if not (dt > 0 and math.isfinite(dt)):
        raise DomainError(f"dt must be positive and finite, got {dt}")


def step_flow(game: GameInstance, state: PopulationState, dt: float) -> PopulationState:
    _check_dt(dt)
    state.validate(game)
    u = state.utilization
    m = game.matrix
    x_a = min(max(state.x_a + dt * payoff_difference("altruistic", u, m), 0.0), game.p_a)
    x_s = min(max(state.x_s + dt * payoff_difference("selfish", u, m), 0.0), game.p_s)
    return PopulationState(x_a, x_s)


def integrate(
    game: GameInstance,
    init: PopulationState,
    dt: float = DEFAULT_DT,
    max_steps: int = DEFAULT_MAX_STEPS,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
    record_every: int = 100,
) -> Trajectory:
    """Iterate :func:`step_flow` until the per-step movement over ``dt`` drops below ``residual_tol``.

    Only every ``record_every``-th state is kept, plus the first and last.
    Non-convergence within ``max_steps`` is reported through
    ``Trajectory.converged`` rather than raised.
    """
    _check_dt(dt)
    if max_steps < 1 or residual_tol <= 0 or record_every < 1:
        raise DomainError("max_steps, residual_tol and record_every must be positive")
    init.validate(game)

    m = game.matrix
    # payoff differences are affine in u; hoist the coefficients out of the loop
    slope_a, icpt_a = 4.0 * m.delta, 2.0 * m.beta
    slope_s, icpt_s = m.delta, m.S - m.P
    p_a, p_s = game.p_a, game.p_s
    x_a = min(max(init.x_a, 0.0), p_a)
    x_s = min(max(init.x_s, 0.0), p_s)

    traj = Trajectory(samples=[(0.0, x_a, x_s)])
    residual = math.inf
    step = 0
    while step < max_steps:
        u = x_a + x_s
        n_a = x_a + dt * (slope_a * u + icpt_a)
        n_a = 0.0 if n_a < 0.0 else (p_a if n_a > p_a else n_a)
        n_s = x_s + dt * (slope_s * u + icpt_s)
        n_s = 0.0 if n_s < 0.0 else (p_s if n_s > p_s else n_s)
        residual = math.hypot(n_a - x_a, n_s - x_s) / dt
        if residual < residual_tol:
            traj.converged = True
            break
        x_a, x_s = n_a, n_s
        step += 1
        if step % record_every == 0:
            traj.samples.append((step * dt, x_a, x_s))

    if traj.samples[-1][0] != step * dt:
        traj.samples.append((step * dt, x_a, x_s))
    traj.final_residual = residual
    traj.steps = step
    return traj
