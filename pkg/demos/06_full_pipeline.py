"""The experiment pipeline end to end, on a purpose-built tiny plan.

A plan bundles sessions over boards of rising state-space size with one
agent grid and seed.  Running it plays every session, ranks the agents,
correlates and clusters the rankings per game family, and writes one
self-describing output tree.  Re-running resumes: completed sessions
are recognized by their spec hash and skipped, and the tree comes out
byte-identical either way.

The shipped presets do the same at larger scale:

    boardlab experiment preset --scale desk --dry-run
    boardlab experiment preset --scale full --dry-run

Run from the repository root:

    python3 demos/06_full_pipeline.py
"""

import json
from pathlib import Path

from boardlab import complexity, experiment
from boardlab.games import Connect4Config

OUT = Path("demo-out/experiment")


def build_plan() -> experiment.ExperimentPlan:
    boards = (Connect4Config(4, 4), Connect4Config(5, 4), Connect4Config(5, 5))
    sessions = tuple(
        experiment.SessionPlan(
            name=f"C4-R({config.height}x{config.width})",
            game=config,
            complexity=float(3 ** config.cells),  # crude size proxy, ordering only
        )
        for config in boards
    )
    return experiment.ExperimentPlan(
        scale="demo",
        seed=31,
        games_per_match=2,
        epsilon_values=(0.6, 0.9),
        gamma_values=(0.7,),
        lambda_values=(0.8, 0.9),
        sessions=sessions,
    )


def main() -> None:
    plan = build_plan()
    agents = (
        len(plan.epsilon_values) * len(plan.gamma_values) * len(plan.lambda_values)
    )
    print(f"plan '{plan.scale}': {len(plan.sessions)} sessions, {agents} agents each")
    for session in plan.sessions:
        print(f"  {session.name:>10} ~{complexity.sci3(int(session.complexity))} states")

    print("\nfirst run plays everything:")
    result = experiment.run_experiment(plan, OUT)
    for name, status in result.session_status.items():
        print(f"  {name}: {status}")
    first_prints = experiment.tree_fingerprint(OUT)

    print("\nsecond run resumes from the manifests:")
    again = experiment.run_experiment(plan, OUT)
    for name, status in again.session_status.items():
        print(f"  {name}: {status}")
    second_prints = experiment.tree_fingerprint(OUT)

    stable = "unchanged" if first_prints == second_prints else "CHANGED"
    print(f"\noutput tree: {len(first_prints)} files, {stable} after the resume")

    manifest = json.loads((OUT / "experiment.json").read_text())
    print(f"experiment.json pins plan hash {manifest['plan_hash'][:12]}...")

    kind = "connect4"
    shifts = result.analyses[kind].shifts
    top = [row for row in shifts if row.cluster == 1]
    print(f"\ntop-tier drift, smallest to largest board ({kind} family):")
    for row in top:
        print(f"  {row.characteristic:>8}: {row.low_mean:.3f} -> {row.high_mean:.3f} "
              f"({row.shift_pct:+.1f}%)")
    print("\nevery dataset under demo-out/experiment/ is documented in SCHEMAS.md")


if __name__ == "__main__":
    main()
