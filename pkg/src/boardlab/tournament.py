"""Round-robin tournaments over a grid of agent characteristics.

A session builds one network per agent, pairs everyone against everyone
with a circle schedule (each agent plays at most once per round), and
plays a fixed number of games per match with colours alternating
strictly: the first-listed agent takes White in games 1, 3, 5, ...
Networks persist and keep learning across the whole session. Ratings
are recomputed per game in schedule order, so results are identical no
matter how many workers play the matches of a round concurrently.
"""

from __future__ import annotations

import configparser
import csv
import hashlib
import io
import json
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

import boardlab

from . import games, learning
from .seeds import derive_rng, derive_seed

GRID_VALUES = (0.6, 0.7, 0.8, 0.9)


def _value_token(value: float) -> str:
    text = f"{value:g}"
    return text[1:].replace(".", "0", 1) if text.startswith("0.") else text.replace(".", "")


def agent_id(epsilon: float, gamma: float, lam: float) -> str:
    return f"e{_value_token(epsilon)}-g{_value_token(gamma)}-l{_value_token(lam)}"


def build_agent_grid(
    epsilon_values=GRID_VALUES, gamma_values=GRID_VALUES, lambda_values=GRID_VALUES
) -> list[learning.AgentProfile]:
    """Full cross product, ordered by epsilon, then gamma, then lambda."""
    grid = []
    for eps in epsilon_values:
        for gam in gamma_values:
            for lam in lambda_values:
                grid.append(learning.AgentProfile(agent_id(eps, gam, lam), eps, gam, lam))
    if len({p.id for p in grid}) != len(grid):
        raise ValueError("grid values collide after id formatting")
    return grid


def schedule(agent_ids: list[str]) -> list[list[tuple[str, str]]]:
    """Circle-method round robin: n-1 rounds of disjoint pairings.

    With an odd field one agent sits out each round. Every unordered
    pair appears exactly once across the rounds.
    """
    items: list[str | None] = list(agent_ids)
    if len(items) < 2:
        raise ValueError("need at least two agents")
    if len(set(agent_ids)) != len(agent_ids):
        raise ValueError("agent ids must be unique")
    if len(items) % 2:
        items.append(None)
    n = len(items)
    rounds = []
    current = items[:]
    for _ in range(n - 1):
        pairs = []
        for k in range(n // 2):
            a, b = current[k], current[n - 1 - k]
            if a is not None and b is not None:
                pairs.append((a, b))
        rounds.append(pairs)
        current = [current[0], current[-1]] + current[1:-1]
    return rounds


@dataclass(frozen=True)
class GameRecord:
    white: str
    black: str
    winner: str | None  # agent id, or None for a draw
    plies: int
    seed: int


@dataclass(frozen=True)
class MatchRecord:
    index: int
    round: int
    agent_a: str
    agent_b: str
    games: tuple[GameRecord, ...]

    def wins(self, agent: str) -> int:
        return sum(1 for g in self.games if g.winner == agent)


def run_match(
    config: games.GameConfig,
    profile_a: learning.AgentProfile,
    profile_b: learning.AgentProfile,
    net_a: learning.ValueNetwork,
    net_b: learning.ValueNetwork,
    games_per_match: int,
    match_seed: int,
    index: int = 0,
    round_no: int = 0,
) -> MatchRecord:
    """Play the match with learning on; mutates both networks."""
    records = []
    for g in range(games_per_match):
        game_seed = derive_seed(match_seed, "game", g)
        rng = np.random.default_rng(game_seed)
        if g % 2 == 0:
            white, black = (profile_a, net_a), (profile_b, net_b)
        else:
            white, black = (profile_b, net_b), (profile_a, net_a)
        label = f"{profile_a.id} vs {profile_b.id} game {g + 1}"
        result = learning.play_game(white, black, config, rng, learn=True, label=label)
        winner = None
        if result.winner is games.Player.WHITE:
            winner = white[0].id
        elif result.winner is games.Player.BLACK:
            winner = black[0].id
        records.append(GameRecord(white[0].id, black[0].id, winner, result.ply_count, game_seed))
    return MatchRecord(index, round_no, profile_a.id, profile_b.id, tuple(records))


class RatingMethod:
    """Per-game rating updates; subclasses define the arithmetic."""

    id = "abstract"

    def initial(self, agent_ids: list[str]) -> dict[str, float]:
        raise NotImplementedError

    def update(self, ratings: dict[str, float], white: str, black: str, white_score: float) -> None:
        raise NotImplementedError


class EloLike(RatingMethod):
    id = "elo-like"
    k_factor = 16.0
    initial_rating = 1500.0

    def initial(self, agent_ids):
        return {a: self.initial_rating for a in agent_ids}

    def update(self, ratings, white, black, white_score):
        expected = 1.0 / (1.0 + 10.0 ** ((ratings[black] - ratings[white]) / 400.0))
        ratings[white] += self.k_factor * (white_score - expected)
        ratings[black] += self.k_factor * ((1.0 - white_score) - (1.0 - expected))


class WinRate(RatingMethod):
    """Cumulative score fraction; a draw counts half for each side."""

    id = "winrate"

    def __init__(self):
        self._points: dict[str, float] = {}
        self._games: dict[str, int] = {}

    def initial(self, agent_ids):
        self._points = {a: 0.0 for a in agent_ids}
        self._games = {a: 0 for a in agent_ids}
        return {a: 0.0 for a in agent_ids}

    def update(self, ratings, white, black, white_score):
        self._points[white] += white_score
        self._points[black] += 1.0 - white_score
        self._games[white] += 1
        self._games[black] += 1
        for agent in (white, black):
            ratings[agent] = self._points[agent] / self._games[agent]


RATING_METHODS = {"elo-like": EloLike, "winrate": WinRate}


def rank(ratings: dict[str, float], tiebreak=None) -> dict[str, int]:
    """Dense ranks 1..N by descending rating; always a strict order.

    `tiebreak` receives the ids of one equal-rating group and returns
    them in final order; the default is ascending id.
    """
    if tiebreak is None:
        tiebreak = sorted
    by_rating: dict[float, list[str]] = {}
    for agent, rating in ratings.items():
        by_rating.setdefault(rating, []).append(agent)
    ordered: list[str] = []
    for rating in sorted(by_rating, reverse=True):
        group = by_rating[rating]
        ordered.extend(tiebreak(group) if len(group) > 1 else group)
    return {agent: position + 1 for position, agent in enumerate(ordered)}


def head_to_head_tiebreak(records: list[MatchRecord]):
    """Order tied agents by wins against the tied group, then by id."""
    wins: dict[tuple[str, str], int] = {}
    for record in records:
        wins[(record.agent_a, record.agent_b)] = record.wins(record.agent_a)
        wins[(record.agent_b, record.agent_a)] = record.wins(record.agent_b)

    def breaker(group: list[str]) -> list[str]:
        def score(agent: str) -> int:
            return sum(wins.get((agent, other), 0) for other in group if other != agent)

        return sorted(group, key=lambda a: (-score(a), a))

    return breaker


@dataclass(frozen=True)
class TournamentSpec:
    game: games.GameConfig
    games_per_match: int = 10
    seed: int = 0
    rating: str = "elo-like"
    epsilon_values: tuple[float, ...] = GRID_VALUES
    gamma_values: tuple[float, ...] = GRID_VALUES
    lambda_values: tuple[float, ...] = GRID_VALUES
    name: str = ""

    def __post_init__(self) -> None:
        if self.games_per_match < 1:
            raise ValueError("games_per_match must be positive")
        if self.rating not in RATING_METHODS:
            raise ValueError(f"unknown rating method {self.rating!r}")
        if not self.name:
            object.__setattr__(self, "name", f"session-{self.game.text().replace(':', '-')}")

    @property
    def agents(self) -> list[learning.AgentProfile]:
        return build_agent_grid(self.epsilon_values, self.gamma_values, self.lambda_values)


def spec_to_text(spec: TournamentSpec) -> str:
    parser = configparser.ConfigParser()
    game = spec.game
    if isinstance(game, games.Connect4Config):
        parser["game"] = {"kind": "connect4", "height": str(game.height), "width": str(game.width)}
    else:
        parser["game"] = {
            "kind": "rlgame",
            "n": str(game.n),
            "base": str(game.base),
            "pawns": str(game.pawns),
        }
    parser["grid"] = {
        "epsilon": " ".join(f"{v:g}" for v in spec.epsilon_values),
        "gamma": " ".join(f"{v:g}" for v in spec.gamma_values),
        "lambda": " ".join(f"{v:g}" for v in spec.lambda_values),
    }
    parser["match"] = {"games": str(spec.games_per_match)}
    parser["rating"] = {"method": spec.rating}
    parser["seed"] = {"master": str(spec.seed)}
    if spec.name:
        parser["session"] = {"name": spec.name}
    out = io.StringIO()
    parser.write(out)
    return out.getvalue()


def spec_from_text(text: str) -> TournamentSpec:
    parser = configparser.ConfigParser()
    parser.read_string(text)
    kind = parser.get("game", "kind")
    if kind == "connect4":
        game = games.Connect4Config(parser.getint("game", "height"), parser.getint("game", "width"))
    elif kind == "rlgame":
        game = games.RLGameConfig(
            parser.getint("game", "n"), parser.getint("game", "base"), parser.getint("game", "pawns")
        )
    else:
        raise ValueError(f"unknown game kind {kind!r}")

    def values(option: str) -> tuple[float, ...]:
        return tuple(float(v) for v in parser.get("grid", option).split())

    return TournamentSpec(
        game=game,
        games_per_match=parser.getint("match", "games", fallback=10),
        seed=parser.getint("seed", "master", fallback=0),
        rating=parser.get("rating", "method", fallback="elo-like"),
        epsilon_values=values("epsilon"),
        gamma_values=values("gamma"),
        lambda_values=values("lambda"),
        name=parser.get("session", "name", fallback=""),
    )


def load_spec(path) -> TournamentSpec:
    return spec_from_text(Path(path).read_text())


def spec_hash(spec: TournamentSpec) -> str:
    return hashlib.sha256(spec_to_text(spec).encode()).hexdigest()


@dataclass
class SessionResult:
    spec: TournamentSpec
    matches: list[MatchRecord]
    rating_trace: list[dict[str, float]]  # snapshot after each round
    final_ratings: dict[str, float]
    ranking: dict[str, int]
    complete: bool = True
    wall_time_s: float = 0.0

    @property
    def total_games(self) -> int:
        return sum(len(m.games) for m in self.matches)


def _match_task(args):
    (index, round_no, config, profile_a, profile_b, weights_a, weights_b, games_n, seed) = args
    net_a = learning.ValueNetwork.initialize(games.encode_len(config), np.random.default_rng(0))
    net_b = learning.ValueNetwork.initialize(games.encode_len(config), np.random.default_rng(0))
    net_a.set_weights(weights_a)
    net_b.set_weights(weights_b)
    record = run_match(config, profile_a, profile_b, net_a, net_b, games_n, seed, index, round_no)
    return index, record, net_a.weights(), net_b.weights()


def run_session(spec: TournamentSpec, out_dir=None, workers: int = 1) -> SessionResult:
    """Play all rounds; optionally persist the result tree under out_dir.

    Per-match seeds come from (session seed, match index), and rating
    updates are applied in match-index order after each round, so the
    output is byte-identical for any worker count. A match failure
    still persists the rounds finished so far, marked incomplete.
    """
    started = time.time()
    profiles = {p.id: p for p in spec.agents}
    ids = list(profiles)
    nets = {
        a: learning.ValueNetwork.initialize(
            games.encode_len(spec.game), derive_rng(spec.seed, "net", a)
        )
        for a in ids
    }
    method = RATING_METHODS[spec.rating]()
    ratings = method.initial(ids)
    rounds = schedule(ids)
    matches: list[MatchRecord] = []
    trace: list[dict[str, float]] = []
    busy: set[str] = set()  # ownership tokens: an agent's net is in one match at a time
    failure: Exception | None = None
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        match_index = 0
        for round_no, pairs in enumerate(rounds, start=1):
            tasks = []
            for a, b in pairs:
                assert not {a, b} & busy, "network handed to two concurrent matches"
                busy |= {a, b}
                tasks.append(
                    (
                        match_index,
                        round_no,
                        spec.game,
                        profiles[a],
                        profiles[b],
                        nets[a].weights(),
                        nets[b].weights(),
                        spec.games_per_match,
                        derive_seed(spec.seed, "match", match_index),
                    )
                )
                match_index += 1
            try:
                if pool is None:
                    outcomes = [_match_task(t) for t in tasks]
                else:
                    outcomes = list(pool.map(_match_task, tasks))
            except learning.TrainingDivergenceError as exc:
                failure = exc
                break
            finally:
                busy.clear()
            for _, record, weights_a, weights_b in sorted(outcomes):
                nets[record.agent_a].set_weights(weights_a)
                nets[record.agent_b].set_weights(weights_b)
                matches.append(record)
                for game_rec in record.games:
                    score = 0.5
                    if game_rec.winner == game_rec.white:
                        score = 1.0
                    elif game_rec.winner == game_rec.black:
                        score = 0.0
                    method.update(ratings, game_rec.white, game_rec.black, score)
            trace.append(dict(ratings))
    finally:
        if pool is not None:
            pool.shutdown()
    ranking = rank(ratings, head_to_head_tiebreak(matches))
    result = SessionResult(
        spec=spec,
        matches=matches,
        rating_trace=trace,
        final_ratings=dict(ratings),
        ranking=ranking,
        complete=failure is None,
        wall_time_s=time.time() - started,
    )
    if out_dir is not None:
        write_session(result, Path(out_dir))
    if failure is not None:
        raise learning.TrainingDivergenceError(
            f"session {spec.name} aborted: {failure}"
        ) from failure
    return result


def write_session(result: SessionResult, out_dir: Path) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = result.spec
    (out_dir / "tournament.ini").write_text(spec_to_text(spec))
    with open(out_dir / "matches.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["match", "round", "agent_a", "agent_b", "game", "white", "black", "winner", "plies", "seed"]
        )
        for m in result.matches:
            for g, rec in enumerate(m.games, start=1):
                writer.writerow(
                    [m.index, m.round, m.agent_a, m.agent_b, g, rec.white, rec.black,
                     rec.winner or "draw", rec.plies, rec.seed]
                )
    agents = sorted(result.final_ratings)
    with open(out_dir / "ratings.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["round", "agent", "rating"])
        for round_no, snapshot in enumerate(result.rating_trace, start=1):
            for agent in agents:
                writer.writerow([round_no, agent, repr(snapshot[agent])])
    profiles = {p.id: p for p in spec.agents}
    with open(out_dir / "ranking.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["agent", "epsilon", "gamma", "lambda", "rank"])
        for agent in sorted(result.ranking, key=result.ranking.get):
            p = profiles[agent]
            writer.writerow([agent, f"{p.epsilon:g}", f"{p.gamma:g}", f"{p.lam:g}", result.ranking[agent]])
    manifest = {
        "name": spec.name,
        "game": spec.game.text(),
        "spec_hash": spec_hash(spec),
        "seed": spec.seed,
        "agents": len(result.final_ratings),
        "rounds_played": len(result.rating_trace),
        "games_played": result.total_games,
        "rating_method": spec.rating,
        "status": "complete" if result.complete else "incomplete",
        "versions": {
            "boardlab": boardlab.__version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "wall_time_s": round(result.wall_time_s, 3),
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
