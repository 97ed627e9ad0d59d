"""Game primitives for symmetric two-strategy population games.

Strategy C (cooperate) is the first row/column of the payoff matrix and D
(defect) the second::

        C  D
    C [ R  S ]
    D [ T  P ]

All payoffs depend on the population state only through the utilization
level ``u``, the total mass of cooperators. Welfare is the quadratic

    W(u) = delta*u**2 + beta*u + P,   delta = R+P-(S+T),  beta = S+T-2P.

Selfish agents compare their matrix payoffs; altruists compare the welfare
gradient, so their payoff for cooperating is ``2*delta*u + beta`` and for
defecting its negation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np

from .errors import DomainError, InvalidGameError

ArrayLike = Union[float, np.ndarray]
PopulationType = Literal["selfish", "altruistic"]

#: Absolute tolerance on delta when classifying curvature.
CURVATURE_TOL = 1e-9
#: Slack allowed on u when checking the [0, 1] domain.
DOMAIN_TOL = 1e-12
#: Absolute tolerance on payoff-difference coefficients for degeneracy.
DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class PayoffMatrix:
    R: float
    S: float
    T: float
    P: float

    def __post_init__(self):
        for name in ("R", "S", "T", "P"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise InvalidGameError(f"payoff {name} must be a real number, got {value!r}", field=name)
            if not math.isfinite(value):
                raise InvalidGameError(f"payoff {name} must be finite, got {value}", field=name)
            if value < 0:
                raise InvalidGameError(f"payoff {name} must be nonnegative, got {value}", field=name)
            object.__setattr__(self, name, value)

    @property
    def delta(self) -> float:
        return self.R + self.P - (self.S + self.T)

    @property
    def beta(self) -> float:
        return self.S + self.T - 2.0 * self.P

    def as_array(self) -> np.ndarray:
        return np.array([[self.R, self.S], [self.T, self.P]], dtype=float)

    def coefficients(self) -> "WelfareCoefficients":
        return WelfareCoefficients(delta=self.delta, beta=self.beta, constant=self.P)

    def is_prisoners_dilemma(self) -> bool:
        return self.S < self.P < self.R < self.T


@dataclass(frozen=True)
class WelfareCoefficients:
    """Coefficients of ``W(u) = delta*u**2 + beta*u + constant``."""

    delta: float
    beta: float
    constant: float

    def __call__(self, u: ArrayLike) -> ArrayLike:
        return (self.delta * u + self.beta) * u + self.constant

    def derivative(self, u: ArrayLike) -> ArrayLike:
        return 2.0 * self.delta * u + self.beta


@dataclass(frozen=True)
class GameInstance:
    matrix: PayoffMatrix
    p_a: float
    p_s: float = field(init=False)

    def __post_init__(self):
        try:
            p_a = float(self.p_a)
        except (TypeError, ValueError):
            raise InvalidGameError(f"p_a must be a real number, got {self.p_a!r}", field="p_a")
        if not (0.0 <= p_a <= 1.0):
            raise InvalidGameError(f"p_a must lie in [0, 1], got {p_a}", field="p_a")
        object.__setattr__(self, "p_a", p_a)
        object.__setattr__(self, "p_s", 1.0 - p_a)

    @classmethod
    def from_payoffs(cls, R: float, S: float, T: float, P: float, p_a: float = 0.0) -> "GameInstance":
        return cls(PayoffMatrix(R, S, T, P), p_a)

    def with_altruists(self, p_a: float) -> "GameInstance":
        return GameInstance(self.matrix, p_a)

    def mass(self, kind: PopulationType) -> float:
        return self.p_a if kind == "altruistic" else self.p_s


@dataclass(frozen=True)
class PopulationState:
    """Cooperator masses ``x_a`` and ``x_s`` of each type."""

    x_a: float
    x_s: float

    @property
    def utilization(self) -> float:
        return self.x_a + self.x_s

    def validate(self, game: GameInstance, tol: float = DOMAIN_TOL) -> None:
        for name, x, cap in (("x_a", self.x_a, game.p_a), ("x_s", self.x_s, game.p_s)):
            if not math.isfinite(x) or x < -tol or x > cap + tol:
                raise DomainError(f"{name}={x} outside [0, {cap}]")


class Curvature(enum.Enum):
    STRICTLY_CONVEX = "StrictlyConvex"
    STRICTLY_CONCAVE = "StrictlyConcave"
    AFFINE = "Affine"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class IndifferencePoint:
    """Root of a type's payoff difference; ``u`` may lie outside [0, 1]."""

    kind: PopulationType
    u: float
    feasible: bool


def _check_domain(u: ArrayLike) -> None:
    arr = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < -DOMAIN_TOL) or np.any(arr > 1.0 + DOMAIN_TOL):
        raise DomainError(f"utilization must lie in [0, 1], got {u}")


def welfare(u: ArrayLike, m: PayoffMatrix) -> ArrayLike:
    """Average payoff ``u^T A u`` at utilization ``u``."""
    _check_domain(u)
    return m.coefficients()(u)


def selfish_payoff(u: ArrayLike, m: PayoffMatrix) -> tuple[ArrayLike, ArrayLike]:
    """Matrix payoffs ``(f_C, f_D)`` seen by selfish agents."""
    _check_domain(u)
    return m.R * u + m.S * (1 - u), m.T * u + m.P * (1 - u)


def altruistic_payoff(u: ArrayLike, m: PayoffMatrix) -> tuple[ArrayLike, ArrayLike]:
    """Welfare-gradient payoffs ``(f_C, f_D)`` seen by altruists.

    The cooperate payoff is ``W'(u)`` and the defect payoff is its exact
    negation.
    """
    _check_domain(u)
    f_c = m.coefficients().derivative(u)
    return f_c, -f_c


def payoff_difference(kind: PopulationType, u: ArrayLike, m: PayoffMatrix) -> ArrayLike:
    """``f_C(u) - f_D(u)`` for one type, with no domain check.

    Affine in ``u``: ``delta*u + (S-P)`` for selfish agents and
    ``2*(2*delta*u + beta)`` for altruists.
    """
    if kind == "selfish":
        return (m.R - m.T) * u + (m.S - m.P) * (1 - u)
    return 2.0 * (2.0 * m.delta * u + m.beta)


def is_degenerate(kind: PopulationType, m: PayoffMatrix, tol: float = DEGENERACY_TOL) -> bool:
    """True when the type is indifferent at every utilization level."""
    if kind == "selfish":
        return abs(m.R - m.T) + abs(m.S - m.P) < tol
    return abs(2.0 * m.delta) + abs(m.beta) < tol


def interior_equilibrium(kind: PopulationType, m: PayoffMatrix, tol: float = CURVATURE_TOL) -> IndifferencePoint | None:
    """Indifference point of ``kind``, or None when delta vanishes.

    Selfish: ``(P-S)/delta``. Altruistic: ``(2P-(S+T))/(2*delta)``, the
    welfare extremum. Values outside [0, 1] are returned with
    ``feasible=False`` rather than clamped.
    """
    delta = m.delta
    if abs(delta) <= tol:
        return None
    if kind == "selfish":
        u = (m.P - m.S) / delta
    else:
        u = (2.0 * m.P - (m.S + m.T)) / (2.0 * delta)
    return IndifferencePoint(kind, u, 0.0 <= u <= 1.0)


def classify_curvature(m: PayoffMatrix, tol: float = CURVATURE_TOL) -> Curvature:
    delta = m.delta
    if delta > tol:
        return Curvature.STRICTLY_CONVEX
    if delta < -tol:
        return Curvature.STRICTLY_CONCAVE
    return Curvature.AFFINE


def welfare_is_constant(m: PayoffMatrix, tol: float = CURVATURE_TOL) -> bool:
    return abs(m.delta) <= tol and abs(m.beta) <= tol
