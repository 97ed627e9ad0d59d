"""Exact enumeration of Nash equilibria, plus a brute-force grid oracle.

Both types' payoffs depend on the state only through ``u``. At a given
``u`` each type's set of admissible cooperator masses is ``{0}``,
``{p}``, or ``[0, p]`` according to the sign of its payoff difference, so
``u`` is an equilibrium level exactly when it lies in the Minkowski sum
of the two admissible sets. Away from degenerate games the equilibrium
levels are drawn from the finite candidate set
``{0, p_a, p_s, 1, u*_a, u*_s}``; a type that is indifferent everywhere
contributes whole intervals instead.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import EquilibriumExistenceError
from .game import (
    GameInstance,
    PayoffMatrix,
    PopulationType,
    is_degenerate,
    payoff_difference,
)

#: Absolute tolerance on payoff differences when validating candidates.
INDIFFERENCE_TOL = 1e-9
#: Candidates closer than this in ``u`` are the same equilibrium level.
MERGE_TOL = 1e-12

DEFAULT_GRID_STEP = 1e-3
DEFAULT_ORACLE_TOL = 1e-6

TYPES: tuple[PopulationType, PopulationType] = ("altruistic", "selfish")


class StrategyKind(enum.Enum):
    ALL_DEFECT = "AllDefect"
    INTERIOR = "Interior"
    ALL_COOPERATE = "AllCooperate"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EquilibriumPoint:
    u: float
    witness_x_a: float
    witness_x_s: float
    kind_a: StrategyKind
    kind_s: StrategyKind

    def to_dict(self) -> dict:
        return {
            "u": self.u,
            "x_a": self.witness_x_a,
            "x_s": self.witness_x_s,
            "kind_a": str(self.kind_a),
            "kind_s": str(self.kind_s),
        }


@dataclass(frozen=True)
class EquilibriumInterval:
    lo: float
    hi: float

    def __contains__(self, u: float) -> bool:
        return self.lo - MERGE_TOL <= u <= self.hi + MERGE_TOL

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class EquilibriumSet:
    game: GameInstance
    points: tuple[EquilibriumPoint, ...]
    intervals: tuple[EquilibriumInterval, ...] = ()

    def __iter__(self) -> Iterator[EquilibriumPoint]:
        return iter(self.points)

    @property
    def utilizations(self) -> list[float]:
        return [p.u for p in self.points]

    @property
    def cardinality(self) -> float:
        """Number of distinct equilibrium levels (``inf`` with intervals)."""
        return math.inf if self.intervals else len(self.points)

    def is_empty(self) -> bool:
        return not self.points and not self.intervals

    def contains(self, u: float, tol: float = 1e-9) -> bool:
        return self.distance(u) <= tol

    def distance(self, u):
        """Distance from ``u`` (scalar or array) to the set of levels."""
        u = np.asarray(u, dtype=float)
        best = np.full(u.shape, np.inf)
        for p in self.points:
            best = np.minimum(best, np.abs(u - p.u))
        for iv in self.intervals:
            best = np.minimum(best, np.maximum(np.maximum(iv.lo - u, u - iv.hi), 0.0))
        return best if best.ndim else float(best)

    def point_at(self, u: float) -> EquilibriumPoint:
        """Equilibrium point with witness at level ``u`` (points or intervals)."""
        for p in self.points:
            if abs(p.u - u) <= MERGE_TOL:
                return p
        point = verify_level(self.game, u)
        if point is None:
            raise ValueError(f"u={u} is not an equilibrium level")
        return point

    def to_dict(self) -> dict:
        return {
            "points": [p.to_dict() for p in self.points],
            "intervals": [iv.to_dict() for iv in self.intervals],
        }


def admissible_masses(
    kind: PopulationType, u: float, game: GameInstance, tol: float = INDIFFERENCE_TOL
) -> tuple[float, float]:
    """Closed range of cooperator masses of ``kind`` that are best responses at ``u``."""
    cap = game.mass(kind)
    if is_degenerate(kind, game.matrix):
        return 0.0, cap
    d = payoff_difference(kind, u, game.matrix)
    if d > tol:
        return cap, cap
    if d < -tol:
        return 0.0, 0.0
    return 0.0, cap


def _strategy_kind(x: float, cap: float) -> StrategyKind:
    if x <= MERGE_TOL:
        return StrategyKind.ALL_DEFECT
    if x >= cap - MERGE_TOL:
        return StrategyKind.ALL_COOPERATE
    return StrategyKind.INTERIOR


def verify_level(game: GameInstance, u: float, tol: float = INDIFFERENCE_TOL) -> EquilibriumPoint | None:
    """Return an equilibrium at level ``u`` with a feasible witness, or None."""
    if u < -MERGE_TOL or u > 1.0 + MERGE_TOL:
        return None
    u = min(max(u, 0.0), 1.0)
    lo_a, hi_a = admissible_masses("altruistic", u, game, tol)
    lo_s, hi_s = admissible_masses("selfish", u, game, tol)
    if u < lo_a + lo_s - MERGE_TOL or u > hi_a + hi_s + MERGE_TOL:
        return None
    x_a = min(max(u - lo_s, lo_a), hi_a)
    x_s = min(max(u - x_a, lo_s), hi_s)
    return EquilibriumPoint(
        u=u,
        witness_x_a=x_a,
        witness_x_s=x_s,
        kind_a=_strategy_kind(x_a, game.p_a),
        kind_s=_strategy_kind(x_s, game.p_s),
    )


def is_nash(game: GameInstance, x_a: float, x_s: float, tol: float = INDIFFERENCE_TOL) -> bool:
    """Check the equilibrium condition by direct payoff comparison.

    A strategy used by positive mass must earn at least the other
    strategy's payoff (within ``tol``). Ties at a corner count as
    equilibria.
    """
    u = x_a + x_s
    for kind, x in (("altruistic", x_a), ("selfish", x_s)):
        if is_degenerate(kind, game.matrix):
            continue
        cap = game.mass(kind)
        d = payoff_difference(kind, u, game.matrix)
        if x > MERGE_TOL and d < -tol:
            return False
        if cap - x > MERGE_TOL and d > tol:
            return False
    return True


def _solve_sign_region(a: float, b: float, sign: int, lo: float, hi: float) -> tuple[float, float] | None:
    """Sub-interval of [lo, hi] where ``sign*(a*u + b) >= 0``."""
    a, b = sign * a, sign * b
    if a == 0.0:
        return (lo, hi) if b >= 0.0 else None
    root = -b / a
    if a > 0:
        lo = max(lo, root)
    else:
        hi = min(hi, root)
    return (lo, hi) if lo <= hi + MERGE_TOL else None


def _affine_coefficients(kind: PopulationType, m: PayoffMatrix) -> tuple[float, float]:
    if kind == "selfish":
        return m.delta, m.S - m.P
    return 4.0 * m.delta, 2.0 * m.beta


def _degenerate_regions(game: GameInstance) -> list[tuple[float, float]]:
    m = game.matrix
    flat = [k for k in TYPES if is_degenerate(k, m)]
    if not flat:
        return []
    if len(flat) == 2:
        return [(0.0, 1.0)]
    (free,) = flat
    other: PopulationType = "selfish" if free == "altruistic" else "altruistic"
    a, b = _affine_coefficients(other, m)
    cap_free, cap_other = game.mass(free), game.mass(other)
    regions = []
    # other type all defect, free type fills u
    r = _solve_sign_region(a, b, -1, 0.0, cap_free)
    if r:
        regions.append(r)
    # other type all cooperate
    r = _solve_sign_region(a, b, +1, cap_other, 1.0)
    if r:
        regions.append(r)
    return regions


def _merge_regions(regions: Iterable[tuple[float, float]]) -> list[tuple[float, float]]:
    merged: list[list[float]] = []
    for lo, hi in sorted(regions):
        if merged and lo <= merged[-1][1] + MERGE_TOL:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def candidate_levels(game: GameInstance) -> list[float]:
    m = game.matrix
    cands = [0.0, game.p_a, game.p_s, 1.0]
    for kind in TYPES:
        # exact root of the affine difference; no curvature tolerance, since a
        # nearly flat difference can still change sign on [0, 1]
        slope, intercept = _affine_coefficients(kind, m)
        if slope != 0.0:
            root = -intercept / slope
            if -MERGE_TOL <= root <= 1.0 + MERGE_TOL:
                cands.append(root)
    return cands


def enumerate_equilibria(game: GameInstance, tol: float = INDIFFERENCE_TOL) -> EquilibriumSet:
    """All equilibrium utilization levels of ``game`` with witnesses."""
    regions = _degenerate_regions(game)
    intervals: list[EquilibriumInterval] = []
    extra: list[float] = []
    for lo, hi in _merge_regions(regions):
        if hi - lo > MERGE_TOL:
            intervals.append(EquilibriumInterval(lo, hi))
        else:
            extra.append(lo)

    points: list[EquilibriumPoint] = []
    for u in sorted(candidate_levels(game) + extra):
        if any(u in iv for iv in intervals):
            continue
        if points and abs(points[-1].u - min(max(u, 0.0), 1.0)) <= MERGE_TOL:
            continue
        point = verify_level(game, u, tol)
        if point is None:
            continue
        if not is_nash(game, point.witness_x_a, point.witness_x_s, tol):
            raise EquilibriumExistenceError(f"witness at u={u} failed direct verification")
        points.append(point)

    result = EquilibriumSet(game, tuple(points), tuple(intervals))
    if result.is_empty():
        raise EquilibriumExistenceError(f"no equilibrium found for {game}")
    return result


def all_selfish_equilibria(game: GameInstance) -> EquilibriumSet:
    return enumerate_equilibria(game.with_altruists(0.0))


def all_altruistic_equilibria(game: GameInstance) -> EquilibriumSet:
    return enumerate_equilibria(game.with_altruists(1.0))


def _grid(cap: float, step: float) -> np.ndarray:
    if cap <= 0.0:
        return np.zeros(1)
    n = int(math.ceil(cap / step - 1e-9)) + 1
    return np.linspace(0.0, cap, n)


def oracle_equilibria(
    game: GameInstance, grid_step: float = DEFAULT_GRID_STEP, tol: float = DEFAULT_ORACLE_TOL
) -> np.ndarray:
    """Brute-force scan of the ``(x_a, x_s)`` grid.

    Returns an ``(n, 2)`` array of grid states that satisfy the
    equilibrium condition for both types. Payoffs are evaluated straight
    from the matrix entries. Each grid state stands for its cell: the
    payoff differences are sampled at ``u`` and ``u +/- grid_step/2``,
    and a strategy used by positive mass passes if it is within ``tol``
    of a best response somewhere on that cell. A pointwise check would
    miss interior equilibria that fall between grid nodes.
    """
    if not (0.0 < grid_step <= 1e-2):
        raise ValueError(f"grid_step must lie in (0, 1e-2], got {grid_step}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    R, S, T, P = (game.matrix.R, game.matrix.S, game.matrix.T, game.matrix.P)
    xa, xs = _grid(game.p_a, grid_step), _grid(game.p_s, grid_step)
    XA, XS = np.meshgrid(xa, xs, indexing="ij")
    U = XA + XS

    def selfish_diff(u):
        return (R * u + S * (1 - u)) - (T * u + P * (1 - u))

    def altruist_diff(u):
        f_c = (2 * R - (S + T)) * u + (S + T - 2 * P) * (1 - u)
        f_d = (S + T - 2 * R) * u + (2 * P - (S + T)) * (1 - u)
        return f_c - f_d

    ok = np.ones(U.shape, dtype=bool)
    half = grid_step / 2
    for diff, X, cap in ((altruist_diff, XA, game.p_a), (selfish_diff, XS, game.p_s)):
        samples = np.stack([diff(U - half), diff(U), diff(U + half)])
        hi, lo = samples.max(axis=0), samples.min(axis=0)
        coop_ok = (X <= 0.0) | (hi >= -tol)
        defect_ok = (X >= cap) | (lo <= tol)
        ok &= coop_ok & defect_ok
    return np.column_stack([XA[ok], XS[ok]])
