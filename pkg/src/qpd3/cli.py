"""Command-line front end.

Subcommands: payoff, sweep, surface, best-response, nash-check, verify.
Single evaluations and search results are printed as JSON on stdout; sweeps
and surfaces are written as CSV (stdout by default, or --out FILE).  Exit
codes: 0 success, 1 failed verification, 2 bad arguments or unreadable
inputs, 3 numerical invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

from . import analysis, presets, verify
from .channel import ChannelParams
from .game import (
    GameConfig,
    PayoffTable,
    StrategyParams,
    closed_form_payoffs,
    outcome_probabilities,
)
from .linalg import InvariantViolation

_ANGLE_RE = re.compile(r"^([+-]?)(\d+(?:\.\d+)?)?\s*pi(?:\s*/\s*(\d+(?:\.\d+)?))?$")


def parse_angle(text: str) -> float:
    """Parse an angle in radians, accepting shorthands like 'pi', '-pi/2', '2pi/3'."""
    s = str(text).strip().lower()
    try:
        return float(s)
    except ValueError:
        pass
    m = _ANGLE_RE.match(s)
    if not m:
        raise argparse.ArgumentTypeError(
            f"cannot parse angle {text!r}; use radians or forms like pi, pi/2, -2pi/3"
        )
    sign = -1.0 if m.group(1) == "-" else 1.0
    coef = float(m.group(2)) if m.group(2) else 1.0
    den = float(m.group(3)) if m.group(3) else 1.0
    return sign * coef * math.pi / den


def parse_unit(text: str) -> float:
    try:
        val = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a number in [0, 1], got {text!r}") from exc
    if not 0.0 <= val <= 1.0:
        raise argparse.ArgumentTypeError(f"value {val} outside [0, 1]")
    return val


def parse_grid(text: str) -> tuple:
    """Parse 'start:stop:count' into an inclusive evenly spaced grid."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"grid must be start:stop:count, got {text!r}"
        )
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from exc
    if count < 1:
        raise argparse.ArgumentTypeError("grid count must be >= 1")
    return analysis.grid_points(start, stop, count)


def parse_triple(text: str) -> StrategyParams:
    """Parse 'theta,alpha,beta' with angle shorthands."""
    parts = str(text).split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"strategy must be theta,alpha,beta, got {text!r}"
        )
    theta, alpha, beta = (parse_angle(p) for p in parts)
    try:
        return StrategyParams(theta, alpha, beta)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def parse_player_strategy(text: str) -> tuple[str, StrategyParams]:
    """Parse 'A:theta,alpha,beta' (player key A, B or C)."""
    key, sep, rest = str(text).partition(":")
    if not sep or key.upper() not in ("A", "B", "C"):
        raise argparse.ArgumentTypeError(
            f"strategy must look like A:theta,alpha,beta, got {text!r}"
        )
    return key.upper(), parse_triple(rest)


_PRESETS = {
    # sweep presets: (strategy profile, swept variable, fixed p, fixed mu)
    "fig2": ("sweep", "p", None, 0.0),
    "fig3": ("sweep", "mu", 0.3, None),
    # surface presets: (p, mu)
    "fig4": ("surface", 0.3, 0.3),
    "fig5": ("surface", 0.7, 0.7),
}


def _add_game_flags(parser: argparse.ArgumentParser, with_strategies: bool = True):
    g = parser.add_argument_group("game parameters")
    g.add_argument("--gamma", type=parse_angle, default=math.pi / 2,
                   help="initial-state entanglement in [0, pi/2] (default: pi/2)")
    g.add_argument("--delta", type=parse_angle, default=math.pi / 2,
                   help="measurement-basis entanglement in [0, pi/2] (default: pi/2)")
    g.add_argument("--p", type=parse_unit, default=None,
                   help="decoherence parameter for both passages (default: 0)")
    g.add_argument("--mu", type=parse_unit, default=None,
                   help="memory parameter for both passages (default: 0)")
    g.add_argument("--p2", type=parse_unit, default=None,
                   help="decoherence of the second passage (default: same as --p)")
    g.add_argument("--mu2", type=parse_unit, default=None,
                   help="memory of the second passage (default: same as --mu)")
    g.add_argument("--table", default=None, metavar="FILE",
                   help="JSON payoff table mapping outcome labels to 3 numbers "
                        "(default: built-in table)")
    if with_strategies:
        g.add_argument("--strategy", action="append", type=parse_player_strategy,
                       default=None, metavar="P:THETA,ALPHA,BETA",
                       help="strategy for player A, B or C, repeatable "
                            "(default: all cooperate, i.e. 0,0,0)")


def _load_table(args) -> PayoffTable:
    if args.table is None:
        return PayoffTable()
    try:
        return PayoffTable.from_json(args.table)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise SystemExit2(f"cannot load payoff table {args.table!r}: {exc}")


class SystemExit2(Exception):
    """Argument-level error discovered after parsing; exits with code 2."""


def _strategies_from(args, default=None):
    strategies = {"A": StrategyParams(0, 0, 0), "B": StrategyParams(0, 0, 0),
                  "C": StrategyParams(0, 0, 0)}
    if default is not None:
        strategies = dict(zip("ABC", default))
    for key, strat in args.strategy or []:
        strategies[key] = strat
    return (strategies["A"], strategies["B"], strategies["C"])


def _config_from(args, default_strategies=None) -> GameConfig:
    p = args.p if args.p is not None else 0.0
    mu = args.mu if args.mu is not None else 0.0
    p2 = p if args.p2 is None else args.p2
    mu2 = mu if args.mu2 is None else args.mu2
    try:
        return GameConfig(
            gamma=args.gamma,
            delta=args.delta,
            passage1=ChannelParams(p, mu),
            passage2=ChannelParams(p2, mu2),
            strategies=_strategies_from(args, default_strategies),
            payoffs=_load_table(args),
        )
    except ValueError as exc:
        raise SystemExit2(str(exc))


def _write_csv(path: str, header: str, rows) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(f"{v:.12g}" for v in row))
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_payoff(args) -> int:
    cfg = _config_from(args)
    probs = outcome_probabilities(cfg)
    pay = probs @ cfg.payoffs.as_array()
    cf = closed_form_payoffs(cfg)
    out = {
        "payoff_A": pay[0],
        "payoff_B": pay[1],
        "payoff_C": pay[2],
        "outcome_probabilities": list(probs),
        "closed_form": {
            "values": list(cf.payoffs),
            "max_abs_discrepancy": cf.max_abs_discrepancy,
        },
    }
    print(json.dumps(out, indent=2))
    return 0


def cmd_sweep(args) -> int:
    default_strategies = None
    if args.preset:
        _, var, fixed_p, fixed_mu = _PRESETS[args.preset]
        default_strategies = presets.sweep_profile()
        if args.var is None:
            args.var = var
        if args.p is None and fixed_p is not None:
            args.p = fixed_p
        if args.mu is None and fixed_mu is not None:
            args.mu = fixed_mu
    if args.var is None:
        raise SystemExit2("--var is required (p or mu) unless a sweep preset is given")
    cfg = _config_from(args, default_strategies)
    spec = analysis.SweepSpec(args.var, args.grid, cfg)
    rows = analysis.sweep(spec)
    _write_csv(args.out, "x,payoff_A,payoff_B,payoff_C", rows)
    return 0


def cmd_surface(args) -> int:
    default_strategies = presets.surface_profile()
    if args.preset:
        _, p, mu = _PRESETS[args.preset]
        if args.p is None:
            args.p = p
        if args.mu is None:
            args.mu = mu
    cfg = _config_from(args, default_strategies)
    alphas = analysis.grid_points(-math.pi, math.pi, args.res)
    thetas = analysis.grid_points(0.0, math.pi, args.res)
    spec = analysis.SweepSpec("alpha1_theta1_surface", (alphas, thetas), cfg)
    rows = analysis.strategy_surface(spec)
    _write_csv(args.out, "alpha1,theta1,payoff_A", rows)
    return 0


def cmd_best_response(args) -> int:
    cfg = _config_from(args)
    try:
        result = analysis.best_response(cfg, args.player, args.claimed, args.res)
    except ValueError as exc:
        raise SystemExit2(str(exc))
    out = {
        "player": result.player,
        "grid_resolution": result.grid_resolution,
        "best": [result.best.theta, result.best.alpha, result.best.beta],
        "best_payoff": result.best_payoff,
        "payoff_at_claimed": result.payoff_at_claimed,
        "gain_over_claimed": result.gain_over_claimed,
    }
    print(json.dumps(out, indent=2))
    return 0


def cmd_nash_check(args) -> int:
    cfg = _config_from(args)
    try:
        result = analysis.nash_check(cfg, cfg.strategies, args.res)
    except ValueError as exc:
        raise SystemExit2(str(exc))
    out = {
        "is_equilibrium": result.is_equilibrium,
        "gains": list(result.gains),
        "gain_tolerance": result.gain_tolerance,
        "best_responses": [[s.theta, s.alpha, s.beta] for s in result.best_responses],
    }
    print(json.dumps(out, indent=2))
    return 0


def cmd_verify(args) -> int:
    results = verify.run_all(seed=args.seed, report_path=args.report)
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"\n{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        print("failed: " + ", ".join(r.name for r in failed))
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpd3",
        description="Three-player quantum Prisoner's Dilemma under correlated "
                    "dephasing noise: payoffs, sweeps, strategy surfaces and "
                    "equilibrium checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_pay = sub.add_parser("payoff", help="evaluate one game and print payoffs as JSON")
    _add_game_flags(p_pay)
    p_pay.set_defaults(func=cmd_payoff)

    p_sweep = sub.add_parser("sweep", help="sweep p or mu and write a CSV table")
    _add_game_flags(p_sweep)
    p_sweep.add_argument("--var", choices=("p", "mu"), default=None,
                         help="variable to sweep (default: from preset)")
    p_sweep.add_argument("--grid", type=parse_grid, default=analysis.grid_points(0, 1, 21),
                         help="sweep grid start:stop:count (default: 0:1:21)")
    p_sweep.add_argument("--preset", choices=("fig2", "fig3"), default=None,
                         help="canned sweep profile (default: none)")
    p_sweep.add_argument("--out", default="-", metavar="FILE",
                         help="output CSV path, '-' for stdout (default: -)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_surf = sub.add_parser("surface", help="scan Alice's (alpha1, theta1) payoff surface")
    _add_game_flags(p_surf)
    p_surf.add_argument("--res", type=int, default=41,
                        help="grid resolution per axis (default: 41)")
    p_surf.add_argument("--preset", choices=("fig4", "fig5"), default=None,
                        help="canned surface settings (default: none)")
    p_surf.add_argument("--out", default="-", metavar="FILE",
                        help="output CSV path, '-' for stdout (default: -)")
    p_surf.set_defaults(func=cmd_surface)

    p_br = sub.add_parser("best-response",
                          help="exhaustive one-player grid search against a claimed strategy")
    _add_game_flags(p_br)
    p_br.add_argument("--player", choices=("alice", "bob", "charlie"), required=True,
                      help="which player deviates")
    p_br.add_argument("--claimed", type=parse_triple, required=True,
                      metavar="THETA,ALPHA,BETA", help="claimed best strategy to compare against")
    p_br.add_argument("--res", type=int, default=25,
                      help="grid resolution per axis (default: 25)")
    p_br.set_defaults(func=cmd_best_response)

    p_nash = sub.add_parser("nash-check",
                            help="check the configured profile for unilateral deviations")
    _add_game_flags(p_nash)
    p_nash.add_argument("--res", type=int, default=25,
                        help="grid resolution per axis (default: 25)")
    p_nash.set_defaults(func=cmd_nash_check)

    p_ver = sub.add_parser("verify", help="run the built-in verification suite")
    p_ver.add_argument("--seed", type=int, default=0,
                       help="seed for the randomized property checks (default: 0)")
    p_ver.add_argument("--report", default="closed_form_discrepancy.json", metavar="FILE",
                       help="where to persist the closed-form discrepancy report "
                            "(default: closed_form_discrepancy.json)")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"numerical invariant violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
