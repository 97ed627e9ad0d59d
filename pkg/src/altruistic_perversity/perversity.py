"""Perversity index and its closed form for Prisoner's Dilemma games.

The perversity index compares the worst welfare over heterogeneous
equilibria with the best welfare over all-selfish equilibria; values
below 1 mean the altruists make things worse.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .equilibrium import (
    EquilibriumPoint,
    EquilibriumSet,
    all_selfish_equilibria,
    enumerate_equilibria,
)
from .errors import DivisionByZeroWelfare, NotPrisonersDilemma
from .game import CURVATURE_TOL, GameInstance, PayoffMatrix, interior_equilibrium, welfare


@dataclass(frozen=True)
class PerversityReport:
    pi: float
    worst_hetero: EquilibriumPoint
    best_selfish: EquilibriumPoint
    worst_welfare: float
    best_selfish_welfare: float

    def to_dict(self) -> dict:
        return {
            "pi": self.pi,
            "worst_welfare": self.worst_welfare,
            "best_selfish_welfare": self.best_selfish_welfare,
            "worst_hetero": self.worst_hetero.to_dict(),
            "best_selfish": self.best_selfish.to_dict(),
        }


def _welfare_extreme(eq: EquilibriumSet, m: PayoffMatrix, maximize: bool) -> tuple[float, float]:
    """(u, W(u)) of the welfare minimum or maximum over an equilibrium set."""
    levels = list(eq.utilizations)
    for iv in eq.intervals:
        levels += [iv.lo, iv.hi]
        if m.delta != 0.0:
            vertex = -m.beta / (2.0 * m.delta)
            if iv.lo < vertex < iv.hi:
                levels.append(vertex)
    values = [(float(welfare(u, m)), u) for u in levels]
    w, u = max(values) if maximize else min(values)
    return u, w


def perversity_index(game: GameInstance) -> PerversityReport:
    """Worst heterogeneous welfare over best all-selfish welfare.

    Raises DivisionByZeroWelfare when every all-selfish equilibrium has
    zero welfare.
    """
    m = game.matrix
    hetero = enumerate_equilibria(game)
    selfish = all_selfish_equilibria(game)
    u_worst, w_worst = _welfare_extreme(hetero, m, maximize=False)
    u_best, w_best = _welfare_extreme(selfish, m, maximize=True)
    if w_best == 0.0:
        raise DivisionByZeroWelfare(
            f"best all-selfish equilibrium welfare is zero for R={m.R}, S={m.S}, T={m.T}, P={m.P}"
        )
    return PerversityReport(
        pi=w_worst / w_best,
        worst_hetero=hetero.point_at(u_worst),
        best_selfish=selfish.point_at(u_best),
        worst_welfare=w_worst,
        best_selfish_welfare=w_best,
    )


class PDBranch(enum.Enum):
    CONVEX_BELOW = "ConvexBelow"
    CONVEX_ABOVE = "ConvexAbove"
    # convex welfare whose minimizer sits left of 0: altruists always cooperate
    CONVEX_INCREASING = "ConvexIncreasing"
    CONCAVE_BELOW = "ConcaveBelow"
    CONCAVE_ABOVE = "ConcaveAbove"
    AFFINE_DELTA = "AffineDelta"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class PDClassification:
    is_pd: bool
    branch: PDBranch | None
    threshold: float | None

    def to_dict(self) -> dict:
        return {
            "is_pd": self.is_pd,
            "branch": None if self.branch is None else str(self.branch),
            "threshold": self.threshold,
        }


def classify_pd(game: GameInstance, tol: float = CURVATURE_TOL) -> PDClassification:
    m = game.matrix
    star = interior_equilibrium("altruistic", m, tol)
    threshold = None if star is None else star.u
    if not m.is_prisoners_dilemma():
        return PDClassification(False, None, threshold)
    if star is None:
        return PDClassification(True, PDBranch.AFFINE_DELTA, None)
    below = game.p_a < star.u
    if m.delta > 0:
        if star.u < 0:
            branch = PDBranch.CONVEX_INCREASING
        else:
            branch = PDBranch.CONVEX_BELOW if below else PDBranch.CONVEX_ABOVE
    else:
        branch = PDBranch.CONCAVE_BELOW if below else PDBranch.CONCAVE_ABOVE
    return PDClassification(True, branch, threshold)


def pd_closed_form_pi(game: GameInstance) -> float:
    """Perversity index of a Prisoner's Dilemma from its closed form.

    Selfish agents always defect, so the index is the worst reachable
    altruist welfare over ``P``:

    * all altruists cooperate: ``(delta*p_a**2 + beta*p_a)/P + 1``
    * altruists at the welfare extremum: ``1 - beta**2/(4*P*delta)``
    * altruists defect: ``1``
    """
    cls = classify_pd(game)
    if not cls.is_pd:
        m = game.matrix
        raise NotPrisonersDilemma(f"need S < P < R < T, got R={m.R}, S={m.S}, T={m.T}, P={m.P}")
    m, p_a = game.matrix, game.p_a
    delta, beta, P = m.delta, m.beta, m.P
    all_cooperate = (delta * p_a**2 + beta * p_a) / P + 1.0
    extremum = 1.0 - beta**2 / (4.0 * P * delta) if cls.branch is not PDBranch.AFFINE_DELTA else None
    return {
        PDBranch.CONVEX_BELOW: 1.0,
        PDBranch.CONVEX_ABOVE: extremum,
        PDBranch.CONVEX_INCREASING: all_cooperate,
        PDBranch.CONCAVE_BELOW: all_cooperate,
        PDBranch.CONCAVE_ABOVE: extremum,
        PDBranch.AFFINE_DELTA: all_cooperate,
    }[cls.branch]
