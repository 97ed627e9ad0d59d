"""Report builders behind the CLI commands.

These return plain Python data (dicts and dataclasses) so they can be
tested without going through argument parsing or files.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .dynamics import Trajectory
from .equilibrium import EquilibriumSet, all_altruistic_equilibria, all_selfish_equilibria, enumerate_equilibria
from .errors import DivisionByZeroWelfare
from .game import (
    GameInstance,
    altruistic_payoff,
    classify_curvature,
    interior_equilibrium,
    is_degenerate,
    selfish_payoff,
    welfare,
)
from .perversity import classify_pd, pd_closed_form_pi, perversity_index
from .specfile import GameSpec, read_csv, write_csv


@dataclass(frozen=True)
class SweepResultRow:
    p_a: float
    pi: float
    worst_u: float
    worst_welfare: float
    best_selfish_welfare: float
    equilibrium_count: int

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def _star(kind, m) -> dict | None:
    star = interior_equilibrium(kind, m)
    return None if star is None else {"u": star.u, "feasible": star.feasible}


def _equilibria_doc(eq: EquilibriumSet) -> dict:
    m = eq.game.matrix
    doc = eq.to_dict()
    for point in doc["points"]:
        point["welfare"] = float(welfare(point["u"], m))
    return doc


def analyze(spec: GameSpec) -> dict:
    """Everything known about one game instance, as a JSON-ready dict.

    A zero all-selfish welfare is reported under ``perversity.error``
    instead of raising, so the rest of the analysis is still returned.
    """
    game = spec.game
    m = game.matrix
    doc: dict = {
        "game": {"R": m.R, "S": m.S, "T": m.T, "P": m.P, "p_a": game.p_a, "p_s": game.p_s},
        "metadata": dict(sorted(spec.metadata.items())),
        "curvature": str(classify_curvature(m)),
        "delta": m.delta,
        "beta": m.beta,
        "u_star_s": _star("selfish", m),
        "u_star_a": _star("altruistic", m),
        "degenerate": {"selfish": is_degenerate("selfish", m), "altruistic": is_degenerate("altruistic", m)},
        "equilibria": _equilibria_doc(enumerate_equilibria(game)),
        "all_selfish_equilibria": _equilibria_doc(all_selfish_equilibria(game)),
        "all_altruistic_equilibria": _equilibria_doc(all_altruistic_equilibria(game)),
    }
    try:
        doc["perversity"] = perversity_index(game).to_dict()
    except DivisionByZeroWelfare as exc:
        doc["perversity"] = {"error": f"DivisionByZeroWelfare: {exc}"}
    pd = classify_pd(game)
    doc["prisoners_dilemma"] = pd.to_dict()
    if pd.is_pd:
        doc["prisoners_dilemma"]["closed_form_pi"] = pd_closed_form_pi(game)
    return doc


def sweep_levels(game: GameInstance, grid: int) -> list[float]:
    """``grid`` evenly spaced altruist masses, plus u*_a when it is feasible."""
    if grid < 2:
        raise ValueError(f"grid must be >= 2, got {grid}")
    levels = {float(v) for v in np.linspace(0.0, 1.0, grid)}
    star = interior_equilibrium("altruistic", game.matrix)
    if star is not None and star.feasible:
        levels.add(star.u)
    return sorted(levels)


def pi_sweep(spec: GameSpec, grid: int) -> list[SweepResultRow]:
    rows = []
    for p_a in sweep_levels(spec.game, grid):
        game = spec.game.with_altruists(p_a)
        report = perversity_index(game)
        eq = enumerate_equilibria(game)
        rows.append(
            SweepResultRow(
                p_a=p_a,
                pi=report.pi,
                worst_u=report.worst_hetero.u,
                worst_welfare=report.worst_welfare,
                best_selfish_welfare=report.best_selfish_welfare,
                equilibrium_count=len(eq.points) + len(eq.intervals),
            )
        )
    return rows


def sweep_to_csv(rows: list[SweepResultRow]) -> str:
    return write_csv(SweepResultRow.columns(), (asdict(r) for r in rows))


def sweep_from_csv(text: str) -> list[SweepResultRow]:
    out = []
    for raw in read_csv(text):
        out.append(
            SweepResultRow(
                p_a=float(raw["p_a"]),
                pi=float(raw["pi"]),
                worst_u=float(raw["worst_u"]),
                worst_welfare=float(raw["worst_welfare"]),
                best_selfish_welfare=float(raw["best_selfish_welfare"]),
                equilibrium_count=int(raw["equilibrium_count"]),
            )
        )
    return out


LANDSCAPE_COLUMNS = ["kind", "u", "W", "f_C_s", "f_D_s", "f_C_a", "f_D_a"]


def _landscape_row(kind: str, u: float, game: GameInstance) -> dict:
    m = game.matrix
    f_cs, f_ds = selfish_payoff(u, m)
    f_ca, f_da = altruistic_payoff(u, m)
    return {
        "kind": kind,
        "u": u,
        "W": float(welfare(u, m)),
        "f_C_s": float(f_cs),
        "f_D_s": float(f_ds),
        "f_C_a": float(f_ca),
        "f_D_a": float(f_da),
    }


def landscape(spec: GameSpec, grid: int) -> list[dict]:
    """Welfare and payoff curves on a ``u`` grid, followed by marker rows.

    Marker kinds: ``u_star_a`` and ``u_star_s`` for feasible indifference
    points, ``altruist_ne`` for each equilibrium of the all-altruistic
    population.
    """
    if grid < 2:
        raise ValueError(f"grid must be >= 2, got {grid}")
    game = spec.game
    rows = [_landscape_row("grid", float(u), game) for u in np.linspace(0.0, 1.0, grid)]
    for kind in ("altruistic", "selfish"):
        star = interior_equilibrium(kind, game.matrix)
        if star is not None and star.feasible:
            rows.append(_landscape_row("u_star_a" if kind == "altruistic" else "u_star_s", star.u, game))
    for u in all_altruistic_equilibria(game).utilizations:
        rows.append(_landscape_row("altruist_ne", u, game))
    return rows


def landscape_to_csv(rows: list[dict]) -> str:
    return write_csv(LANDSCAPE_COLUMNS, rows)


TRAJECTORY_COLUMNS = ["t", "x_a", "x_s", "u"]


def trajectory_rows(traj: Trajectory) -> list[dict]:
    return [{"t": t, "x_a": x_a, "x_s": x_s, "u": x_a + x_s} for t, x_a, x_s in traj.samples]
