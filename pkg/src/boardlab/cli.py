"""Command line entry points.

Subcommands: `complexity`, `train`, `tournament run`, `analyze`, and
`experiment preset|run`. The global flags `--seed`, `--workers`, and
`--out` are accepted both before and after the subcommand. When a flag
is absent, `BOARDLAB_WORKERS` supplies the worker count and
`BOARDLAB_OUT` the output root; built-in defaults apply last.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import boardlab

from . import analysis, complexity, experiment, games, learning, tournament
from .games import textio
from .seeds import derive_rng, derive_seed


def _add_globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=int, default=default, help="master seed (default 0)")
    parser.add_argument(
        "--workers", type=int, default=default,
        help="worker processes (default: $BOARDLAB_WORKERS or 1)",
    )
    parser.add_argument(
        "--out", default=default, help="output path (default: under $BOARDLAB_OUT or the cwd)"
    )


def _seed(args) -> int:
    return 0 if args.seed is None else args.seed


def _workers(args) -> int:
    if args.workers is not None:
        return args.workers
    return int(os.environ.get("BOARDLAB_WORKERS", "1"))


def _out(args, default_name: str) -> Path:
    if args.out is not None:
        return Path(args.out)
    return Path(os.environ.get("BOARDLAB_OUT", ".")) / default_name


def _parse_config(game: str, text: str) -> games.GameConfig:
    prefix = {"connect4": "c4", "rlgame": "rl"}[game]
    if ":" in text:
        config = textio.config_from_text(text)
        if not text.startswith(prefix):
            raise SystemExit(f"--config {text!r} does not match --game {game}")
        return config
    return textio.config_from_text(f"{prefix}:{text}")


def _cmd_complexity(args) -> int:
    seed = _seed(args)
    samples = args.samples
    if args.table3:
        rows = complexity.sweep_table(samples_per_profile=samples, seed=seed)
        out = _out(args, "complexity-table.csv")
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", newline="") as fh:
            fh.write("n,alpha,bound_b1,ratio_b1,bound_b10,ratio_b10\n")
            for row in rows:
                ratio1 = "" if row.ratio_small is None else f"{row.ratio_small:.3f}"
                ratio10 = "" if row.ratio_large is None else f"{row.ratio_large:.3f}"
                fh.write(f"{row.n},{row.base},{row.formula_small},{ratio1},"
                         f"{row.formula_large},{ratio10}\n")
        print(f"{'n':>3} {'alpha':>5} {'bound(b=1)':>12} {'ratio':>6} {'bound(b=10)':>12} {'ratio':>6}")
        for row in rows:
            ratio1 = "" if row.ratio_small is None else f"{row.ratio_small:.3f}"
            ratio10 = "" if row.ratio_large is None else f"{row.ratio_large:.3f}"
            print(f"{row.n:>3} {row.base:>5} {complexity.sci3(row.formula_small):>12} {ratio1:>6} "
                  f"{complexity.sci3(row.formula_large):>12} {ratio10:>6}")
        print(f"wrote {out}")
        return 0
    if args.n is None or args.alpha is None or args.beta is None:
        raise SystemExit("complexity: --n, --alpha and --beta are required (or use --table3)")
    config = games.RLGameConfig(args.n, args.alpha, args.beta)
    bound = complexity.upper_bound(args.n, args.alpha, args.beta)
    if samples == 0:
        print(f"{config.text()}: upper bound {complexity.sci3(bound)} ({bound})")
        return 0
    est = complexity.estimate(config, samples_per_profile=samples, seed=seed)
    print(f"{config.text()}: upper bound {complexity.sci3(bound)} ratio {est.ratio:.3f} "
          f"(~{complexity.sci3(round(bound * est.ratio))} states)")
    out = _out(args, f"complexity-{args.n}x{args.alpha}x{args.beta}.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        fh.write("i,j,samples,legit,weight,contribution\n")
        for p in est.profiles:
            fh.write(f"{p.i},{p.j},{p.samples},{p.legit},{p.weight},{float(p.contribution)!r}\n")
    print(f"wrote {out}")
    return 0


def _cmd_train(args) -> int:
    seed = _seed(args)
    config = _parse_config(args.game, args.config)
    profile = learning.AgentProfile("trainee", args.epsilon, args.gamma, args.lam)
    net = learning.ValueNetwork.initialize(games.encode_len(config), derive_rng(seed, "net"))
    wins = {games.Player.WHITE: 0, games.Player.BLACK: 0, None: 0}
    plies = 0
    for game_no in range(args.games):
        rng = derive_rng(seed, "selfplay", game_no)
        result = learning.play_game(
            (profile, net), (profile, net), config, rng, label=f"train game {game_no + 1}"
        )
        wins[result.winner] += 1
        plies += result.ply_count
    total = max(args.games, 1)
    print(f"{config.text()}: {args.games} self-play games, "
          f"white {wins[games.Player.WHITE]} black {wins[games.Player.BLACK]} "
          f"draw {wins[None]}, mean plies {plies / total:.1f}")
    if args.save:
        learning.save_checkpoint(args.save, net, config)
        print(f"saved checkpoint to {args.save}")
    return 0


def _cmd_tournament_run(args) -> int:
    spec = tournament.load_spec(args.spec)
    if args.seed is not None:
        spec = tournament.TournamentSpec(
            game=spec.game, games_per_match=spec.games_per_match, seed=args.seed,
            rating=spec.rating, epsilon_values=spec.epsilon_values,
            gamma_values=spec.gamma_values, lambda_values=spec.lambda_values, name=spec.name,
        )
    out = _out(args, spec.name)
    result = tournament.run_session(spec, out_dir=out, workers=_workers(args))
    print(f"{spec.name}: {result.total_games} games in {result.wall_time_s:.1f}s")
    top = sorted(result.ranking, key=result.ranking.get)[:5]
    for agent in top:
        print(f"  {result.ranking[agent]:>2}. {agent}  rating {result.final_ratings[agent]:.1f}")
    print(f"wrote {out}")
    return 0


def _cmd_analyze(args) -> int:
    if len(args.rankings) < 2:
        raise SystemExit("analyze: need at least two ranking.csv files")
    tables = [analysis.SessionRanking.from_csv(path) for path in args.rankings]
    out = _out(args, f"analysis-{args.game_label}")
    result = analysis.analyze_game(
        tables, k=args.k, reruns=args.reruns, max_iter=args.max_iter,
        seed=_seed(args), out_dir=out,
    )
    analysis.write_correlation_csv(analysis.correlation_table(tables), out / "correlations.csv")
    heatmap = analysis.render_heatmap(tables)
    (out / "heatmap.txt").write_text(heatmap)
    print(heatmap, end="")
    sizes = ", ".join(f"C{c + 1}={s}" for c, s in enumerate(result.report.sizes))
    print(f"clusters over {len(result.agents)} agents: {sizes}")
    print(f"wrote {out}")
    return 0


def _plan_for(args) -> experiment.ExperimentPlan:
    if getattr(args, "plan", None):
        plan = experiment.load_plan(args.plan)
        if args.seed is not None and args.seed != plan.seed:
            raise SystemExit("experiment run: --seed conflicts with the plan file; edit the plan")
        return plan
    return experiment.preset(args.scale, seed=_seed(args))


def _describe_plan(plan: experiment.ExperimentPlan) -> None:
    agents = (len(plan.epsilon_values) * len(plan.gamma_values) * len(plan.lambda_values))
    games_per_session = agents * (agents - 1) // 2 * plan.games_per_match
    print(f"{plan.scale} preset: {len(plan.sessions)} sessions, {agents} agents, "
          f"{games_per_session} games per session")
    for session in plan.sessions:
        print(f"  {session.name:<12} {session.game.text():<12} ~{session.complexity:.3g} states")


def _cmd_experiment_preset(args) -> int:
    plan = experiment.preset(args.scale, seed=_seed(args))
    out = _out(args, f"experiment-{args.scale}.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    experiment.save_plan(plan, out)
    _describe_plan(plan)
    print(f"wrote {out}")
    return 0


def _cmd_experiment_run(args) -> int:
    plan = _plan_for(args)
    _describe_plan(plan)
    out = _out(args, f"experiment-{plan.scale}")
    result = experiment.run_experiment(plan, out, workers=_workers(args), dry_run=args.dry_run)
    if args.dry_run:
        print("dry run, nothing written")
        return 0
    played = sum(1 for v in result.session_status.values() if v == "played")
    resumed = len(result.session_status) - played
    print(f"{played} sessions played, {resumed} resumed; results in {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boardlab",
        description="Board-game complexity and learning-agent experiments.",
    )
    parser.add_argument("--version", action="version", version=f"boardlab {boardlab.__version__}")
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)

    p = sub.add_parser(
        "complexity", parents=[common],
        help="state-space upper bound and sampled legality ratio",
    )
    p.add_argument("--n", type=int, help="board side")
    p.add_argument("--alpha", type=int, help="base side")
    p.add_argument("--beta", type=int, help="pawns per side")
    p.add_argument("--samples", type=int, default=1000,
                   help="samples per profile; 0 for the exact bound only")
    p.add_argument("--table3", action="store_true",
                   help="sweep all (n, alpha) pairs at beta in {1, 10}")
    p.set_defaults(func=_cmd_complexity)

    p = sub.add_parser("train", parents=[common], help="standalone self-play training run")
    p.add_argument("--game", choices=("connect4", "rlgame"), required=True)
    p.add_argument("--config", required=True,
                   help="board dimensions, e.g. 6x7 (connect4) or 5x2x10 (rlgame)")
    p.add_argument("--games", type=int, default=100)
    p.add_argument("--epsilon", type=float, default=0.7)
    p.add_argument("--gamma", type=float, default=0.7)
    p.add_argument("--lambda", dest="lam", type=float, default=0.7)
    p.add_argument("--save", help="write a network checkpoint here when done")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("tournament", parents=[common], help="round-robin tournaments")
    tsub = p.add_subparsers(dest="tournament_command", required=True)
    p = tsub.add_parser("run", parents=[common], help="play one session from a spec file")
    p.add_argument("--spec", required=True, help="tournament spec file (ini)")
    p.set_defaults(func=_cmd_tournament_run)

    p = sub.add_parser("analyze", parents=[common], help="correlate and cluster session rankings")
    p.add_argument("--rankings", nargs="+", required=True,
                   help="ranking.csv files, ordered by rising state-space size")
    p.add_argument("--game-label", default="game", help="label for the output directory")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--reruns", type=int, default=100)
    p.add_argument("--max-iter", type=int, default=300)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("experiment", parents=[common], help="multi-session experiment pipelines")
    esub = p.add_subparsers(dest="experiment_command", required=True)
    p = esub.add_parser("preset", parents=[common], help="write a stock experiment plan")
    p.add_argument("--scale", choices=experiment.PRESET_SCALES, default="desk")
    p.set_defaults(func=_cmd_experiment_preset)
    p = esub.add_parser("run", parents=[common], help="run a plan end to end")
    p.add_argument("--scale", choices=experiment.PRESET_SCALES, default="desk")
    p.add_argument("--plan", help="plan file from `experiment preset` (overrides --scale)")
    p.add_argument("--dry-run", action="store_true", help="describe the plan without playing")
    p.set_defaults(func=_cmd_experiment_run)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (games.GameError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
