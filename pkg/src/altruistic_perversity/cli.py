"""Command-line front end.

Exit codes: 0 success, 1 a verified property was violated, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict
from pathlib import Path

from . import analysis
from .dynamics import DEFAULT_DT, DEFAULT_MAX_STEPS, DEFAULT_RESIDUAL_TOL, integrate
from .equilibrium import DEFAULT_GRID_STEP, DEFAULT_ORACLE_TOL, is_nash
from .errors import DivisionByZeroWelfare, PerversityError, SpecFileError
from .game import PopulationState
from .specfile import load_spec, write_csv
from .verification import SUITES

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2

DEFAULT_TRIALS = {"theorem1": 10_000, "cases": 2_000, "proposition1": 1_000, "oracle": 200}

log = logging.getLogger("altruistic_perversity")


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("PERVERSITY_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise SpecFileError(f"PERVERSITY_SEED must be an integer, got {env!r}") from None


def cmd_analyze(args) -> int:
    doc = analysis.analyze(load_spec(args.spec))
    if args.format == "csv":
        rows = [dict(p, scope="heterogeneous") for p in doc["equilibria"]["points"]]
        columns = ["scope", "u", "x_a", "x_s", "kind_a", "kind_s", "welfare"]
        _emit(write_csv(columns, rows), args.out)
    else:
        _emit(_dump_json(doc), args.out)
    if "error" in doc["perversity"]:
        print(doc["perversity"]["error"], file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_pi_sweep(args) -> int:
    rows = analysis.pi_sweep(load_spec(args.spec), args.grid)
    if args.format == "json":
        _emit(_dump_json([asdict(r) for r in rows]), args.out)
    else:
        _emit(analysis.sweep_to_csv(rows), args.out)
    return EXIT_OK


def cmd_landscape(args) -> int:
    rows = analysis.landscape(load_spec(args.spec), args.grid)
    if args.format == "json":
        _emit(_dump_json(rows), args.out)
    else:
        _emit(analysis.landscape_to_csv(rows), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    suite = SUITES[args.suite]
    trials = args.trials if args.trials is not None else DEFAULT_TRIALS[args.suite]
    kwargs = {"raise_on_failure": False}
    if args.suite == "oracle":
        kwargs.update(grid_step=args.grid_step, tol=args.tol)
    summary = suite(trials, _seed(args), **kwargs)
    _emit(_dump_json(summary.to_dict()), args.out)
    return EXIT_OK if summary.ok else EXIT_VIOLATION


def cmd_dynamics_run(args) -> int:
    spec = load_spec(args.spec)
    game = spec.game
    x_a = game.p_a / 2 if args.x_a is None else args.x_a
    x_s = game.p_s / 2 if args.x_s is None else args.x_s
    traj = integrate(game, PopulationState(x_a, x_s), args.dt, args.max_steps, args.residual_tol, args.record_every)
    if args.format == "json":
        final = traj.final_state
        doc = {
            "converged": traj.converged,
            "steps": traj.steps,
            "final_residual": traj.final_residual,
            "final_state": {"x_a": final.x_a, "x_s": final.x_s, "u": final.utilization},
            "final_is_nash": is_nash(game, final.x_a, final.x_s, 1e-6),
            "samples": analysis.trajectory_rows(traj),
        }
        _emit(_dump_json(doc), args.out)
    else:
        _emit(write_csv(analysis.TRAJECTORY_COLUMNS, analysis.trajectory_rows(traj)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="altruistic-perversity",
        description="Equilibria, welfare and perversity index of two-strategy population games "
        "with altruistic and selfish agents.",
    )
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, default_format):
        p.add_argument("--format", choices=["csv", "json"], default=default_format)
        p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("analyze", help="full analysis of one game")
    p.add_argument("--spec", required=True)
    common(p, "json")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("pi-sweep", help="perversity index as a function of p_a")
    p.add_argument("--spec", required=True)
    p.add_argument("--grid", type=int, default=201)
    common(p, "csv")
    p.set_defaults(func=cmd_pi_sweep)

    p = sub.add_parser("landscape", help="welfare and payoff curves over u")
    p.add_argument("--spec", required=True)
    p.add_argument("--grid", type=int, default=201)
    common(p, "csv")
    p.set_defaults(func=cmd_landscape)

    p = sub.add_parser("verify", help="run a randomized verification campaign")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, help="defaults to $PERVERSITY_SEED, then 0")
    p.add_argument("--grid-step", type=float, default=DEFAULT_GRID_STEP)
    p.add_argument("--tol", type=float, default=DEFAULT_ORACLE_TOL)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dynamics-run", help="integrate the projected payoff-difference flow")
    p.add_argument("--spec", required=True)
    p.add_argument("--x-a", type=float)
    p.add_argument("--x-s", type=float)
    p.add_argument("--dt", type=float, default=DEFAULT_DT)
    p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    p.add_argument("--residual-tol", type=float, default=DEFAULT_RESIDUAL_TOL)
    p.add_argument("--record-every", type=int, default=100)
    common(p, "csv")
    p.set_defaults(func=cmd_dynamics_run)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "grid", None) is not None and args.grid < 2:
        print("error: --grid must be >= 2", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "trials", None) is not None and args.trials < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (PerversityError, ValueError) as exc:
        if isinstance(exc, DivisionByZeroWelfare):
            print(f"DivisionByZeroWelfare: {exc}", file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
