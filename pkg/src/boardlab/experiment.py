"""End-to-end experiment runs: sessions, then the derived analysis.

An experiment is a fixed list of named tournament sessions, three per
game, ordered within each game by rising state-space size. Running one
produces a deterministic output tree:

    out/
      experiment.json            overall manifest
      complexity.csv             the ordering evidence per session
      sessions/<name>/           one tournament tree each
      analysis/<game>/           clusters, tier summaries, shifts, linkage
      analysis/correlations.csv  rho/tau for all session pairs
      analysis/heatmap.txt       the same, as a text matrix

Sessions are resumable: a session whose manifest shows the same spec
hash and a complete status is not replayed. Everything except wall
times and timestamps is byte-identical across runs and worker counts.
"""

from __future__ import annotations

import hashlib
import json
import logging
import platform
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

import boardlab

from . import analysis, complexity, games, tournament
from .games import textio
from .seeds import derive_seed

log = logging.getLogger(__name__)

PRESET_SCALES = ("desk", "full")
FULL_GRID = (0.6, 0.7, 0.8, 0.9)
DESK_GRID = (0.6, 0.9)

# Volatile manifest keys, excluded when comparing output trees.
VOLATILE_KEYS = frozenset({"wall_time_s", "started_at", "finished_at"})


@dataclass(frozen=True)
class SessionPlan:
    name: str
    game: games.GameConfig
    complexity: float

    @property
    def dirname(self) -> str:
        return self.name.lower().replace("(", "-").replace(")", "")


@dataclass(frozen=True)
class ExperimentPlan:
    scale: str
    seed: int
    games_per_match: int
    epsilon_values: tuple[float, ...]
    gamma_values: tuple[float, ...]
    lambda_values: tuple[float, ...]
    sessions: tuple[SessionPlan, ...]

    def spec_for(self, session: SessionPlan) -> tournament.TournamentSpec:
        return tournament.TournamentSpec(
            game=session.game,
            games_per_match=self.games_per_match,
            seed=derive_seed(self.seed, "session", session.name),
            epsilon_values=self.epsilon_values,
            gamma_values=self.gamma_values,
            lambda_values=self.lambda_values,
            name=session.name,
        )

    def families(self) -> dict[str, list[SessionPlan]]:
        """Sessions per game kind, ordered by rising state-space size."""
        out: dict[str, list[SessionPlan]] = {}
        for session in self.sessions:
            kind = "connect4" if isinstance(session.game, games.Connect4Config) else "rlgame"
            out.setdefault(kind, []).append(session)
        for kind in out:
            out[kind].sort(key=lambda s: s.complexity)
        return out


def _session_plans() -> tuple[SessionPlan, ...]:
    plans = []
    for height, width in ((8, 3), (7, 4), (6, 7)):
        config = games.Connect4Config(height, width)
        plans.append(
            SessionPlan(
                f"C4-R({height}x{width})", config, complexity.CONNECT4_STATE_SPACE[(height, width)]
            )
        )
    for n in (5, 7, 10):
        config = games.RLGameConfig(n, 2, 10)
        plans.append(SessionPlan(f"RL-R({n}x2)", config, float(complexity.upper_bound(n, 2, 10))))
    return tuple(plans)


def preset(scale: str, seed: int = 0) -> ExperimentPlan:
    """The two stock experiments.

    `full` is the production shape: 64 agents, 10 games per pairing.
    `desk` keeps the same six boards but shrinks the grid to the two
    extreme values per characteristic and 4 games per pairing, small
    enough to run in well under a minute.
    """
    if scale == "full":
        grid, games_per_match = FULL_GRID, 10
    elif scale == "desk":
        grid, games_per_match = DESK_GRID, 4
    else:
        raise ValueError(f"unknown scale {scale!r}, expected one of {PRESET_SCALES}")
    return ExperimentPlan(
        scale=scale,
        seed=seed,
        games_per_match=games_per_match,
        epsilon_values=grid,
        gamma_values=grid,
        lambda_values=grid,
        sessions=_session_plans(),
    )


def plan_to_dict(plan: ExperimentPlan) -> dict:
    return {
        "scale": plan.scale,
        "seed": plan.seed,
        "games_per_match": plan.games_per_match,
        "grid": {
            "epsilon": list(plan.epsilon_values),
            "gamma": list(plan.gamma_values),
            "lambda": list(plan.lambda_values),
        },
        "sessions": [
            {"name": s.name, "game": s.game.text(), "complexity": s.complexity}
            for s in plan.sessions
        ],
    }


def plan_from_dict(data: dict) -> ExperimentPlan:
    sessions = tuple(
        SessionPlan(s["name"], textio.config_from_text(s["game"]), float(s["complexity"]))
        for s in data["sessions"]
    )
    grid = data["grid"]
    return ExperimentPlan(
        scale=data["scale"],
        seed=int(data["seed"]),
        games_per_match=int(data["games_per_match"]),
        epsilon_values=tuple(grid["epsilon"]),
        gamma_values=tuple(grid["gamma"]),
        lambda_values=tuple(grid["lambda"]),
        sessions=sessions,
    )


def plan_hash(plan: ExperimentPlan) -> str:
    text = json.dumps(plan_to_dict(plan), sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()


def load_plan(path) -> ExperimentPlan:
    return plan_from_dict(json.loads(Path(path).read_text()))


def save_plan(plan: ExperimentPlan, path) -> None:
    Path(path).write_text(json.dumps(plan_to_dict(plan), indent=2, sort_keys=True) + "\n")


@dataclass
class ExperimentResult:
    plan: ExperimentPlan
    out_dir: Path
    session_status: dict[str, str]  # name -> played | resumed | planned
    analyses: dict[str, analysis.GameAnalysis]
    correlations: list[analysis.CorrelationRow]


def _session_is_complete(session_dir: Path, spec: tournament.TournamentSpec) -> bool:
    manifest_path = session_dir / "manifest.json"
    if not manifest_path.exists():
        return False
    try:
        manifest = json.loads(manifest_path.read_text())
    except json.JSONDecodeError:
        return False
    return (
        manifest.get("spec_hash") == tournament.spec_hash(spec)
        and manifest.get("status") == "complete"
    )


def run_experiment(
    plan: ExperimentPlan, out_dir, workers: int = 1, dry_run: bool = False
) -> ExperimentResult:
    out_dir = Path(out_dir)
    started_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    status: dict[str, str] = {}
    if dry_run:
        for session in plan.sessions:
            status[session.name] = "planned"
            log.info("would play %s (%s, %.3g states)", session.name, session.game.text(),
                     session.complexity)
        return ExperimentResult(plan, out_dir, status, {}, [])

    out_dir.mkdir(parents=True, exist_ok=True)
    for session in plan.sessions:
        spec = plan.spec_for(session)
        session_dir = out_dir / "sessions" / session.dirname
        if _session_is_complete(session_dir, spec):
            status[session.name] = "resumed"
            log.info("skipping %s: already complete", session.name)
            continue
        log.info("playing %s (%s)", session.name, session.game.text())
        tournament.run_session(spec, out_dir=session_dir, workers=workers)
        status[session.name] = "played"

    with open(out_dir / "complexity.csv", "w", newline="") as fh:
        fh.write("session,game,states\n")
        for session in sorted(plan.sessions, key=lambda s: s.complexity):
            fh.write(f"{session.name},{session.game.text()},{session.complexity!r}\n")

    tables = {
        session.name: analysis.SessionRanking.from_csv(
            out_dir / "sessions" / session.dirname / "ranking.csv", label=session.name
        )
        for session in plan.sessions
    }
    analyses: dict[str, analysis.GameAnalysis] = {}
    for kind, sessions in plan.families().items():
        if len(sessions) < 2:
            continue
        log.info("analyzing %s sessions", kind)
        analyses[kind] = analysis.analyze_game(
            [tables[s.name] for s in sessions],
            seed=derive_seed(plan.seed, "analysis", kind),
            out_dir=out_dir / "analysis" / kind,
        )
    all_tables = [tables[s.name] for s in plan.sessions]
    correlations = analysis.correlation_table(all_tables)
    analysis.write_correlation_csv(correlations, out_dir / "analysis" / "correlations.csv")
    (out_dir / "analysis" / "heatmap.txt").write_text(analysis.render_heatmap(all_tables))

    manifest = {
        "scale": plan.scale,
        "seed": plan.seed,
        "plan_hash": plan_hash(plan),
        "plan": plan_to_dict(plan),
        "sessions": [
            # status here is the session outcome; whether this run played
            # or resumed it only lives in the returned result
            {
                "name": s.name,
                "dir": f"sessions/{s.dirname}",
                "spec_hash": tournament.spec_hash(plan.spec_for(s)),
                "status": "complete",
            }
            for s in plan.sessions
        ],
        "status": "complete",
        "started_at": started_at,
        "finished_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "versions": {
            "boardlab": boardlab.__version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
    }
    (out_dir / "experiment.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    log.info("experiment written to %s", out_dir)
    return ExperimentResult(plan, out_dir, status, analyses, correlations)


def _scrub(value):
    if isinstance(value, dict):
        return {k: _scrub(v) for k, v in sorted(value.items()) if k not in VOLATILE_KEYS}
    if isinstance(value, list):
        return [_scrub(v) for v in value]
    return value


def tree_fingerprint(root) -> dict[str, str]:
    """Relative path -> content hash for every file under root.

    JSON manifests are canonicalized with volatile keys (wall times,
    timestamps) removed, so two equivalent runs fingerprint equal.
    """
    root = Path(root)
    out: dict[str, str] = {}
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        if path.suffix == ".json":
            data = json.dumps(_scrub(json.loads(path.read_text())), sort_keys=True).encode()
        else:
            data = path.read_bytes()
        out[str(path.relative_to(root))] = hashlib.sha256(data).hexdigest()
    return out
