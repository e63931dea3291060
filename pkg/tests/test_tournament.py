import json

import numpy as np
import pytest

from boardlab import games, learning, tournament
from boardlab.games import Connect4Config, RLGameConfig
from boardlab.seeds import derive_rng, derive_seed


def tiny_spec(**overrides):
    fields = dict(
        game=Connect4Config(4, 4),
        games_per_match=2,
        seed=3,
        epsilon_values=(0.6, 0.9),
        gamma_values=(0.7,),
        lambda_values=(0.8, 0.9),
    )
    fields.update(overrides)
    return tournament.TournamentSpec(**fields)


def test_agent_id_formatting():
    assert tournament.agent_id(0.6, 0.7, 0.9) == "e06-g07-l09"
    assert tournament.agent_id(1.0, 0.25, 0.5) == "e1-g025-l05"


def test_default_grid_is_the_full_cross_product():
    grid = tournament.build_agent_grid()
    assert len(grid) == 64
    assert grid[0].id == "e06-g06-l06" and grid[-1].id == "e09-g09-l09"
    assert grid[1].id == "e06-g06-l07"  # lambda varies fastest
    assert grid[16].id == "e07-g06-l06"  # epsilon varies slowest
    with pytest.raises(ValueError):
        tournament.build_agent_grid((0.6, 0.6), (0.7,), (0.8,))


def test_schedule_covers_every_pair_once():
    ids = [f"a{k}" for k in range(8)]
    rounds = tournament.schedule(ids)
    assert len(rounds) == 7 and all(len(r) == 4 for r in rounds)
    seen = set()
    for pairs in rounds:
        names = [x for pair in pairs for x in pair]
        assert len(set(names)) == len(names)  # disjoint within a round
        seen |= {frozenset(p) for p in pairs}
    assert len(seen) == 28


def test_schedule_handles_odd_fields_with_byes():
    rounds = tournament.schedule(["a", "b", "c", "d", "e"])
    assert len(rounds) == 5 and all(len(r) == 2 for r in rounds)
    pairs = {frozenset(p) for r in rounds for p in r}
    assert len(pairs) == 10
    with pytest.raises(ValueError):
        tournament.schedule(["solo"])
    with pytest.raises(ValueError):
        tournament.schedule(["a", "a", "b"])


def fresh_nets(config, seed_a, seed_b):
    width = games.encode_len(config)
    return (
        learning.ValueNetwork.initialize(width, np.random.default_rng(seed_a)),
        learning.ValueNetwork.initialize(width, np.random.default_rng(seed_b)),
    )


def test_run_match_alternates_colours_and_derives_seeds():
    config = Connect4Config(4, 4)
    pa = learning.AgentProfile("A", 0.6, 0.9, 0.5)
    pb = learning.AgentProfile("B", 0.8, 0.9, 0.5)
    net_a, net_b = fresh_nets(config, 1, 2)
    snapshot = net_a.weights()
    record = tournament.run_match(config, pa, pb, net_a, net_b, 4, match_seed=123)
    assert [g.white for g in record.games] == ["A", "B", "A", "B"]
    assert [g.seed for g in record.games] == [derive_seed(123, "game", g) for g in range(4)]
    assert record.wins("A") + record.wins("B") + sum(
        g.winner is None for g in record.games
    ) == 4
    assert any(not np.array_equal(snapshot[k], net_a.weights()[k]) for k in snapshot)


def test_run_match_is_reproducible():
    config = Connect4Config(4, 4)
    pa = learning.AgentProfile("A", 0.6, 0.9, 0.5)
    pb = learning.AgentProfile("B", 0.8, 0.9, 0.5)
    first = tournament.run_match(config, pa, pb, *fresh_nets(config, 1, 2), 3, 77)
    second = tournament.run_match(config, pa, pb, *fresh_nets(config, 1, 2), 3, 77)
    assert first == second


def test_elo_like_hand_values():
    elo = tournament.EloLike()
    ratings = elo.initial(["a", "b"])
    assert ratings == {"a": 1500.0, "b": 1500.0}
    elo.update(ratings, "a", "b", 1.0)
    assert ratings == {"a": 1508.0, "b": 1492.0}
    elo.update(ratings, "a", "b", 0.5)
    assert abs(ratings["a"] - 1507.6318466) < 1e-6
    assert abs(ratings["b"] - 1492.3681534) < 1e-6
    assert abs(sum(ratings.values()) - 3000.0) < 1e-9  # zero sum


def test_winrate_tracks_score_fraction():
    method = tournament.WinRate()
    ratings = method.initial(["a", "b"])
    method.update(ratings, "a", "b", 1.0)
    assert ratings == {"a": 1.0, "b": 0.0}
    method.update(ratings, "b", "a", 0.5)
    assert ratings == {"a": 0.75, "b": 0.25}


def test_rank_is_dense_and_deterministic():
    ranking = tournament.rank({"a": 3.0, "b": 5.0, "c": 3.0, "d": 1.0})
    assert ranking == {"b": 1, "a": 2, "c": 3, "d": 4}


def test_head_to_head_breaks_rating_ties():
    record = tournament.MatchRecord(
        0, 1, "a", "c",
        (
            tournament.GameRecord("a", "c", "c", 5, 0),
            tournament.GameRecord("c", "a", "c", 6, 1),
        ),
    )
    breaker = tournament.head_to_head_tiebreak([record])
    assert breaker(["a", "c"]) == ["c", "a"]
    ranking = tournament.rank({"a": 2.0, "c": 2.0, "z": 9.0}, breaker)
    assert ranking == {"z": 1, "c": 2, "a": 3}


def test_spec_validation_and_naming():
    spec = tiny_spec()
    assert spec.name == "session-c4-4x4"
    assert len(spec.agents) == 4
    with pytest.raises(ValueError):
        tiny_spec(games_per_match=0)
    with pytest.raises(ValueError):
        tiny_spec(rating="glicko")


def test_spec_text_round_trip(tmp_path):
    for spec in (tiny_spec(), tiny_spec(game=RLGameConfig(5, 2, 2), rating="winrate")):
        text = tournament.spec_to_text(spec)
        assert tournament.spec_from_text(text) == spec
        path = tmp_path / "spec.ini"
        path.write_text(text)
        assert tournament.load_spec(path) == spec
    assert tournament.spec_hash(tiny_spec()) == tournament.spec_hash(tiny_spec())
    assert tournament.spec_hash(tiny_spec()) != tournament.spec_hash(
        tiny_spec(games_per_match=3)
    )


def test_run_session_plays_the_full_schedule():
    result = tournament.run_session(tiny_spec())
    assert result.complete and result.total_games == 12
    assert len(result.matches) == 6
    assert [m.index for m in result.matches] == list(range(6))
    assert len(result.rating_trace) == 3
    assert result.final_ratings == result.rating_trace[-1]
    assert sorted(result.ranking.values()) == [1, 2, 3, 4]


def session_bytes(out_dir):
    files = {}
    for path in sorted(out_dir.rglob("*")):
        if path.is_file():
            data = path.read_bytes()
            if path.name == "manifest.json":
                manifest = json.loads(data)
                manifest.pop("wall_time_s")
                data = json.dumps(manifest, sort_keys=True).encode()
            files[path.name] = data
    return files


def test_run_session_output_is_worker_count_invariant(tmp_path):
    spec = tiny_spec()
    tournament.run_session(spec, out_dir=tmp_path / "solo", workers=1)
    tournament.run_session(spec, out_dir=tmp_path / "pool", workers=2)
    assert session_bytes(tmp_path / "solo") == session_bytes(tmp_path / "pool")


def test_write_session_layout(tmp_path):
    result = tournament.run_session(tiny_spec(), out_dir=tmp_path)
    names = {p.name for p in tmp_path.iterdir()}
    assert names == {"tournament.ini", "matches.csv", "ratings.csv", "ranking.csv", "manifest.json"}
    lines = (tmp_path / "matches.csv").read_text().splitlines()
    assert lines[0] == "match,round,agent_a,agent_b,game,white,black,winner,plies,seed"
    assert len(lines) == 1 + result.total_games
    rank_lines = (tmp_path / "ranking.csv").read_text().splitlines()
    assert rank_lines[0] == "agent,epsilon,gamma,lambda,rank"
    assert [int(line.rsplit(",", 1)[1]) for line in rank_lines[1:]] == [1, 2, 3, 4]
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["status"] == "complete"
    assert manifest["games_played"] == 12 and manifest["rounds_played"] == 3
    assert manifest["spec_hash"] == tournament.spec_hash(result.spec)


def test_session_abort_persists_partial_results(tmp_path, monkeypatch):
    calls = {"n": 0}
    real = learning.play_game

    def flaky(white, black, config, rng, learn=True, label=""):
        calls["n"] += 1
        if calls["n"] > 4:  # round 1 holds 2 matches of 2 games
            raise learning.TrainingDivergenceError("forced failure")
        return real(white, black, config, rng, learn=learn, label=label)

    monkeypatch.setattr(learning, "play_game", flaky)
    with pytest.raises(learning.TrainingDivergenceError, match="aborted"):
        tournament.run_session(tiny_spec(), out_dir=tmp_path, workers=1)
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["status"] == "incomplete"
    assert manifest["rounds_played"] == 1 and manifest["games_played"] == 4
