"""Seeded randomized campaigns that check the structural claims.

Each campaign draws games from a full-support distribution (payoffs i.i.d.
uniform on [0, 10], conditioned by rejection), evaluates a property on
every draw and reduces the outcome into a :class:`VerificationSummary`.
Trial ``i`` uses its own generator spawned from the campaign seed, so the
result does not depend on evaluation order.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .equilibrium import (
    DEFAULT_GRID_STEP,
    DEFAULT_ORACLE_TOL,
    EquilibriumSet,
    admissible_masses,
    all_selfish_equilibria,
    enumerate_equilibria,
    oracle_equilibria,
)
from .errors import DivisionByZeroWelfare, DomainError, VerificationFailure
from .game import GameInstance, PayoffMatrix, interior_equilibrium, welfare
from .perversity import perversity_index, pd_closed_form_pi

log = logging.getLogger(__name__)

PAYOFF_HIGH = 10.0
CONCAVITY_MARGIN = 1e-6
PI_TOL = 1e-9
CASE_TOL = 1e-9


@dataclass
class VerificationSummary:
    suite: str
    seed: int
    trials: int
    failures: int = 0
    rejected: int = 0
    min_pi: float = math.inf
    max_pi: float = -math.inf
    case_counts: dict[str, int] = field(default_factory=dict)
    metrics: dict[str, Any] = field(default_factory=dict)
    counterexample: dict[str, Any] | None = None

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def observe_pi(self, pi: float) -> None:
        self.min_pi = min(self.min_pi, pi)
        self.max_pi = max(self.max_pi, pi)

    def fail(self, detail: dict[str, Any]) -> None:
        self.failures += 1
        if self.counterexample is None:
            self.counterexample = detail
        log.warning("%s: property violated: %s", self.suite, detail)

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "failures": self.failures,
            "rejected": self.rejected,
            "min_pi": None if math.isinf(self.min_pi) else self.min_pi,
            "max_pi": None if math.isinf(self.max_pi) else self.max_pi,
            "case_counts": dict(sorted(self.case_counts.items())),
            "metrics": dict(sorted(self.metrics.items())),
            "counterexample": self.counterexample,
            "ok": self.ok,
        }


def trial_generators(seed: int, trials: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


def _check_trials(trials: int) -> None:
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")


def _describe(game: GameInstance, **extra: Any) -> dict[str, Any]:
    m = game.matrix
    return {"R": m.R, "S": m.S, "T": m.T, "P": m.P, "p_a": game.p_a, **extra}


def _finish(summary: VerificationSummary, raise_on_failure: bool) -> VerificationSummary:
    if raise_on_failure and not summary.ok:
        raise VerificationFailure(
            f"{summary.suite}: {summary.failures} of {summary.trials} trials failed",
            counterexample=summary.counterexample,
            summary=summary,
        )
    return summary


def sample_matrix(rng: np.random.Generator, accept: Callable[[PayoffMatrix], bool] | None = None) -> PayoffMatrix:
    while True:
        R, S, T, P = rng.uniform(0.0, PAYOFF_HIGH, size=4)
        m = PayoffMatrix(R, S, T, P)
        if accept is None or accept(m):
            return m


def sample_concave(rng: np.random.Generator, margin: float = CONCAVITY_MARGIN) -> PayoffMatrix:
    return sample_matrix(rng, lambda m: m.delta < -margin)


def sample_pd(rng: np.random.Generator) -> PayoffMatrix:
    # sorting four i.i.d. draws is the uniform law conditioned on S < P < R < T
    while True:
        S, P, R, T = np.sort(rng.uniform(0.0, PAYOFF_HIGH, size=4))
        if S < P < R < T:
            return PayoffMatrix(R, S, T, P)


def sample_affine(rng: np.random.Generator) -> PayoffMatrix:
    """Integer payoffs with delta == 0, so ties such as S == P occur."""
    while True:
        R, S, T = (int(v) for v in rng.integers(0, 11, size=3))
        P = S + T - R
        if P >= 0:
            return PayoffMatrix(R, S, T, P)


def verify_theorem1(trials: int, seed: int, raise_on_failure: bool = True) -> VerificationSummary:
    """Concave welfare never admits perversity: PI >= 1 on every draw.

    Affine games (delta == 0) are also sampled, one per ten trials, and any
    PI < 1 among them is reported in the metrics without failing.
    """
    _check_trials(trials)
    summary = VerificationSummary("theorem1", seed, trials)
    for rng in trial_generators(seed, trials):
        while True:
            game = GameInstance(sample_concave(rng), rng.uniform())
            try:
                report = perversity_index(game)
                break
            except DivisionByZeroWelfare:
                summary.rejected += 1
        summary.observe_pi(report.pi)
        if report.pi < 1.0 - PI_TOL:
            summary.fail(_describe(game, pi=report.pi))

    affine_below = 0
    affine_example = None
    for rng in trial_generators(seed + 1, max(1, trials // 10)):
        game = GameInstance(sample_affine(rng), float(rng.integers(0, 11)) / 10.0)
        try:
            pi = perversity_index(game).pi
        except DivisionByZeroWelfare:
            continue
        if pi < 1.0 - PI_TOL:
            affine_below += 1
            if affine_example is None:
                affine_example = _describe(game, pi=pi)
    summary.metrics["affine_pi_below_one"] = affine_below
    summary.metrics["affine_example"] = affine_example
    return _finish(summary, raise_on_failure)


def altruist_mass_range(game: GameInstance, u: float) -> tuple[float, float]:
    """Range of altruist cooperator mass over every equilibrium state at ``u``."""
    lo_a, hi_a = admissible_masses("altruistic", u, game)
    lo_s, hi_s = admissible_masses("selfish", u, game)
    return max(lo_a, u - hi_s), min(hi_a, u - lo_s)


def proof_case(game: GameInstance, selfish: EquilibriumSet) -> int:
    """Which of the five concave-welfare cases ``game`` falls into."""
    star = interior_equilibrium("altruistic", game.matrix)
    if star.u <= 0.0:
        return 1
    if star.u >= 1.0:
        return 2
    if star.u <= game.p_a:
        return 3
    if selfish.intervals or len(selfish.points) != 1:
        raise ValueError("all-selfish equilibrium set is not a singleton")
    u_s = selfish.points[0].u
    return 4 if (u_s <= CASE_TOL or u_s >= 1.0 - CASE_TOL) else 5


def _case_holds(case: int, game: GameInstance, hetero: EquilibriumSet, selfish: EquilibriumSet) -> bool:
    m = game.matrix
    u_star = interior_equilibrium("altruistic", m).u
    for u in hetero.utilizations:
        xa_min, xa_max = altruist_mass_range(game, u)
        if case == 1 and xa_max > CASE_TOL:
            return False
        if case == 2 and xa_min < game.p_a - CASE_TOL:
            return False
        if case == 3:
            xs_min = u - xa_max
            if xs_min <= u_star + CASE_TOL and abs(u - u_star) > CASE_TOL:
                return False
        if case in (4, 5):
            w = welfare(u, m)
            if any(welfare(us, m) > w + CASE_TOL for us in selfish.utilizations):
                return False
    return True


def verify_proof_cases(trials: int, seed: int, raise_on_failure: bool = True) -> VerificationSummary:
    """Dispatch random concave games to their proof case and check its claim.

    Case 1 (u*_a <= 0): altruists defect in every equilibrium.
    Case 2 (u*_a >= 1): altruists all cooperate.
    Case 3 (u*_a <= p_a): any equilibrium with x_s <= u*_a sits at u*_a.
    Cases 4-5 (u*_a > p_a, selfish optimum at a corner or interior): the
    all-selfish welfare never beats a heterogeneous one.
    Every draw also checks PI >= 1 and the single-equilibrium property of
    both homogeneous populations.
    """
    _check_trials(trials)
    summary = VerificationSummary("cases", seed, trials)
    summary.case_counts = {f"case{k}": 0 for k in range(1, 6)}
    for rng in trial_generators(seed, trials):
        game = GameInstance(sample_concave(rng), rng.uniform())
        hetero = enumerate_equilibria(game)
        selfish = all_selfish_equilibria(game)
        altruistic = enumerate_equilibria(game.with_altruists(1.0))
        if selfish.cardinality != 1 or altruistic.cardinality != 1:
            summary.fail(_describe(game, claim="lemma1", selfish=selfish.cardinality, altruistic=altruistic.cardinality))
            continue
        case = proof_case(game, selfish)
        summary.case_counts[f"case{case}"] += 1
        if not _case_holds(case, game, hetero, selfish):
            summary.fail(_describe(game, claim=f"case{case}", equilibria=hetero.utilizations))
            continue
        try:
            pi = perversity_index(game).pi
        except DivisionByZeroWelfare:
            summary.rejected += 1
            continue
        summary.observe_pi(pi)
        if pi < 1.0 - PI_TOL:
            summary.fail(_describe(game, claim=f"case{case} PI", pi=pi))
    return _finish(summary, raise_on_failure)


def verify_proposition1(
    trials: int, seed: int, pa_values: int = 50, raise_on_failure: bool = True
) -> VerificationSummary:
    """Closed-form Prisoner's Dilemma PI agrees with enumeration."""
    _check_trials(trials)
    summary = VerificationSummary("proposition1", seed, trials)
    max_gap = 0.0
    for rng in trial_generators(seed, trials):
        m = sample_pd(rng)
        for p_a in np.sort(rng.uniform(0.0, 1.0, size=pa_values)):
            game = GameInstance(m, p_a)
            enumerated = perversity_index(game).pi
            closed = pd_closed_form_pi(game)
            gap = abs(closed - enumerated) / abs(enumerated)
            max_gap = max(max_gap, gap)
            summary.observe_pi(enumerated)
            if gap > PI_TOL:
                summary.fail(_describe(game, closed_form=closed, enumerated=enumerated))
    summary.metrics["max_relative_gap"] = max_gap
    summary.metrics["pa_values"] = pa_values
    return _finish(summary, raise_on_failure)


def oracle_mismatch(
    game: GameInstance, grid_step: float = DEFAULT_GRID_STEP, tol: float = DEFAULT_ORACLE_TOL
) -> tuple[float, float]:
    """Hausdorff-style gaps between analytic and oracle equilibrium levels.

    Returns ``(analytic_to_oracle, oracle_to_analytic)``: the farthest any
    analytic level is from an oracle level, and vice versa.
    """
    analytic = enumerate_equilibria(game)
    states = oracle_equilibria(game, grid_step, tol)
    if len(states) == 0:
        return math.inf, 0.0
    oracle_u = np.unique(states.sum(axis=1))
    levels = list(analytic.utilizations)
    for iv in analytic.intervals:
        levels += [iv.lo, 0.5 * (iv.lo + iv.hi), iv.hi]
    forward = max(float(np.min(np.abs(oracle_u - u))) for u in levels)
    backward = float(np.max(analytic.distance(oracle_u)))
    return forward, backward


def verify_oracle(
    trials: int,
    seed: int,
    grid_step: float = DEFAULT_GRID_STEP,
    tol: float = DEFAULT_ORACLE_TOL,
    raise_on_failure: bool = True,
) -> VerificationSummary:
    """Analytic enumeration agrees with the brute-force grid scan."""
    _check_trials(trials)
    summary = VerificationSummary("oracle", seed, trials)
    worst = 0.0
    for rng in trial_generators(seed, trials):
        game = GameInstance(sample_matrix(rng), rng.uniform())
        forward, backward = oracle_mismatch(game, grid_step, tol)
        gap = max(forward, backward)
        worst = max(worst, gap)
        if gap > grid_step:
            summary.fail(_describe(game, analytic_to_oracle=forward, oracle_to_analytic=backward))
    summary.metrics["max_u_mismatch"] = worst
    summary.metrics["grid_step"] = grid_step
    summary.metrics["tol"] = tol
    return _finish(summary, raise_on_failure)


SUITES: dict[str, Callable[..., VerificationSummary]] = {
    "theorem1": verify_theorem1,
    "cases": verify_proof_cases,
    "proposition1": verify_proposition1,
    "oracle": verify_oracle,
}
