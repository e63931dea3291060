"""Temporal-difference learning agents with small sigmoid value networks.

An agent is a characteristic triple: epsilon is the probability of
picking the best-looking move rather than exploring uniformly, gamma
discounts the next afterstate's value when forming the training target,
and lam is the plain gradient step size. The network maps an encoded
position (from the mover's own perspective) to a win expectation in
(0, 1): one hidden sigmoid layer of half the input width, one sigmoid
output. After each of its own moves an agent pulls the value of its
previous afterstate toward gamma * V(new afterstate); at the end of the
game the last afterstate is pulled toward the undiscounted reward
(1 win, 0 loss, 0.5 draw).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import games


class LearningError(Exception):
    pass


class TrainingDivergenceError(LearningError):
    """Weights stopped being finite after an update."""


class CheckpointError(LearningError):
    """A checkpoint file does not fit the expected layout or network."""


def _sigmoid(z):
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass(frozen=True)
class AgentProfile:
    id: str
    epsilon: float
    gamma: float
    lam: float

    def __post_init__(self) -> None:
        for name in ("epsilon", "gamma", "lam"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


class ValueNetwork:
    """Two-layer sigmoid net with one output; plain delta-rule updates."""

    def __init__(self, w1: np.ndarray, b1: np.ndarray, w2: np.ndarray, b2: float):
        self.w1 = np.asarray(w1, dtype=np.float64)
        self.b1 = np.asarray(b1, dtype=np.float64)
        self.w2 = np.asarray(w2, dtype=np.float64)
        self.b2 = float(b2)
        hidden, inputs = self.w1.shape
        if self.b1.shape != (hidden,) or self.w2.shape != (hidden,):
            raise ValueError("layer shapes are inconsistent")
        self.input_width = inputs
        self.hidden_width = hidden
        self._owner: object | None = None  # single-writer token, see play_game

    @classmethod
    def initialize(cls, input_width: int, rng: np.random.Generator) -> "ValueNetwork":
        if input_width < 1:
            raise ValueError("input_width must be positive")
        hidden = (input_width + 1) // 2
        w1 = rng.uniform(-0.5, 0.5, size=(hidden, input_width))
        b1 = rng.uniform(-0.5, 0.5, size=hidden)
        w2 = rng.uniform(-0.5, 0.5, size=hidden)
        b2 = rng.uniform(-0.5, 0.5)
        return cls(w1, b1, w2, b2)

    def _check_input(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != self.input_width:
            raise ValueError(
                f"feature length {x.shape[-1]} does not match network input {self.input_width}"
            )
        return x

    def evaluate(self, x: np.ndarray) -> float:
        x = self._check_input(x)
        h = _sigmoid(self.w1 @ x + self.b1)
        return float(_sigmoid(np.atleast_1d(self.w2 @ h + self.b2))[0])

    def evaluate_batch(self, xs: np.ndarray) -> np.ndarray:
        xs = self._check_input(np.atleast_2d(xs))
        h = _sigmoid(xs @ self.w1.T + self.b1)
        return _sigmoid(h @ self.w2 + self.b2)

    def value_and_grads(self, x: np.ndarray):
        """Output and its gradient with respect to every weight."""
        x = self._check_input(x)
        h = _sigmoid(self.w1 @ x + self.b1)
        y = float(_sigmoid(np.atleast_1d(self.w2 @ h + self.b2))[0])
        dy = y * (1.0 - y)
        g_w2 = dy * h
        g_b2 = dy
        d_hidden = dy * self.w2 * h * (1.0 - h)
        g_w1 = np.outer(d_hidden, x)
        g_b1 = d_hidden
        return y, {"w1": g_w1, "b1": g_b1, "w2": g_w2, "b2": g_b2}

    def td_step(self, x: np.ndarray, target: float, lam: float) -> float:
        """One delta-rule step pulling V(x) toward the target; returns V(x)."""
        if lam == 0.0:
            return self.evaluate(x)
        x = self._check_input(x)
        h = _sigmoid(self.w1 @ x + self.b1)
        y = float(_sigmoid(np.atleast_1d(self.w2 @ h + self.b2))[0])
        step = lam * (target - y)
        dy = y * (1.0 - y)
        d_hidden = step * dy * self.w2 * h * (1.0 - h)  # uses pre-update w2
        self.w2 += step * dy * h
        self.b2 += step * dy
        self.w1 += np.outer(d_hidden, x)
        self.b1 += d_hidden
        if not (
            np.isfinite(self.w1).all()
            and np.isfinite(self.b1).all()
            and np.isfinite(self.w2).all()
            and np.isfinite(self.b2)
        ):
            raise TrainingDivergenceError("non-finite weights after an update")
        return y

    def copy(self) -> "ValueNetwork":
        return ValueNetwork(self.w1.copy(), self.b1.copy(), self.w2.copy(), self.b2)

    def weights(self) -> dict[str, np.ndarray]:
        return {
            "w1": self.w1.copy(),
            "b1": self.b1.copy(),
            "w2": self.w2.copy(),
            "b2": np.float64(self.b2),
        }

    def set_weights(self, weights: dict[str, np.ndarray]) -> None:
        self.w1[...] = weights["w1"]
        self.b1[...] = weights["b1"]
        self.w2[...] = weights["w2"]
        self.b2 = float(weights["b2"])


_CHECKPOINT_VERSION = 1


def config_fingerprint(config: games.GameConfig) -> str:
    return hashlib.sha256(config.text().encode()).hexdigest()


def save_checkpoint(path, net: ValueNetwork, config: games.GameConfig) -> None:
    np.savez(
        path,
        version=np.int64(_CHECKPOINT_VERSION),
        config_hash=np.bytes_(config_fingerprint(config).encode()),
        w1=net.w1,
        b1=net.b1,
        w2=net.w2,
        b2=np.float64(net.b2),
    )


def load_checkpoint(path, config: games.GameConfig) -> ValueNetwork:
    try:
        data = np.load(path)
    except Exception as exc:
        raise CheckpointError(f"unreadable checkpoint: {exc}") from exc
    with data:
        keys = {"version", "config_hash", "w1", "b1", "w2", "b2"}
        if not keys.issubset(data.files):
            raise CheckpointError("checkpoint is missing required arrays")
        if int(data["version"]) != _CHECKPOINT_VERSION:
            raise CheckpointError(f"unsupported checkpoint version {int(data['version'])}")
        stored = bytes(data["config_hash"]).decode()
        if stored != config_fingerprint(config):
            raise CheckpointError("checkpoint was trained for a different game config")
        expected_inputs = games.encode_len(config)
        w1 = data["w1"]
        if w1.ndim != 2 or w1.shape[1] != expected_inputs or w1.shape[0] != (expected_inputs + 1) // 2:
            raise CheckpointError(f"layer shape {w1.shape} does not fit this config")
        return ValueNetwork(w1, data["b1"], data["w2"], float(data["b2"]))


@dataclass
class Episode:
    """One side's afterstates: (features, value when selected) per own move."""

    steps: list[tuple[np.ndarray, float]]
    reward: float | None = None


def td_update(net: ValueNetwork, episode: Episode, gamma: float, lam: float) -> None:
    """Pull the previous afterstate toward gamma times the newest value."""
    if len(episode.steps) < 2:
        raise ValueError("td_update needs at least two recorded afterstates")
    prev_x, _ = episode.steps[-2]
    _, new_value = episode.steps[-1]
    net.td_step(prev_x, gamma * new_value, lam)


def td_finalize(net: ValueNetwork, episode: Episode, reward: float, lam: float) -> None:
    """Pull the final afterstate toward the undiscounted game reward."""
    if not episode.steps:
        raise ValueError("cannot finalize an empty episode")
    episode.reward = reward
    net.td_step(episode.steps[-1][0], reward, lam)


def _select(profile: AgentProfile, net: ValueNetwork, state, moves, rng: np.random.Generator):
    """Move choice plus its afterstate and that afterstate's value."""
    if rng.random() < profile.epsilon:
        successors = [games.apply_move(state, m, validate=False) for m in moves]
        feats = np.stack([games.encode(s) for s in successors])
        values = net.evaluate_batch(feats)
        best = int(np.argmax(values))  # ties go to the lowest canonical move
        return moves[best], successors[best], float(values[best]), feats[best]
    pick = int(rng.integers(len(moves)))
    successor = games.apply_move(state, moves[pick], validate=False)
    feats = games.encode(successor)
    return moves[pick], successor, net.evaluate(feats), feats


def select_move(profile: AgentProfile, net: ValueNetwork, state, rng: np.random.Generator):
    """Epsilon-greedy choice over the successors of all legal moves."""
    moves = games.legal_moves(state)
    move, _, _, _ = _select(profile, net, state, moves, rng)
    return move


@dataclass
class GameResult:
    winner: games.Player | None
    moves: list
    ply_count: int


_REWARDS = {True: 1.0, False: 0.0, None: 0.5}


def play_game(
    white: tuple[AgentProfile, ValueNetwork],
    black: tuple[AgentProfile, ValueNetwork],
    config: games.GameConfig,
    rng: np.random.Generator,
    learn: bool = True,
    label: str = "",
) -> GameResult:
    """One full game; each side trains only on its own move stream."""
    sides = {games.Player.WHITE: white, games.Player.BLACK: black}
    episodes = {p: Episode(steps=[]) for p in sides}
    nets = {id(net): net for _, net in sides.values()}  # self-play may share one net
    for net in nets.values():
        if net._owner is not None:
            raise LearningError("network is already in use by another game")
        net._owner = episodes
    try:
        state = games.initial_state(config)
        move_log = []
        while state.status is games.Status.ONGOING:
            player = state.to_move
            profile, net = sides[player]
            moves = games.legal_moves(state)
            try:
                move, state, value, feats = _select(profile, net, state, moves, rng)
                episode = episodes[player]
                episode.steps.append((feats, value))
                if learn and len(episode.steps) >= 2:
                    td_update(net, episode, profile.gamma, profile.lam)
            except TrainingDivergenceError as exc:
                raise TrainingDivergenceError(
                    f"{exc} (game {label or config.text()}, move {len(move_log)})"
                ) from None
            move_log.append(move)
        if learn:
            for player, (profile, net) in sides.items():
                episode = episodes[player]
                if not episode.steps:
                    continue
                won = None if state.winner is None else state.winner is player
                try:
                    td_finalize(net, episode, _REWARDS[won], profile.lam)
                except TrainingDivergenceError as exc:
                    raise TrainingDivergenceError(
                        f"{exc} (game {label or config.text()}, final update)"
                    ) from None
        return GameResult(state.winner, move_log, state.ply_count)
    finally:
        for net in nets.values():
            net._owner = None
