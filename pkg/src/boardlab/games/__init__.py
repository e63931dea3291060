"""Game engines with a shared functional surface.

Both games expose pure functions over immutable states; the dispatchers
here pick the engine from the config or state type.
"""

from __future__ import annotations

import numpy as np

from . import connect4, rlgame, textio
from .base import (
    GameError,
    IllegalMoveError,
    InvalidConfigError,
    Player,
    Status,
    TerminalStateError,
)
from .connect4 import Connect4Config, Connect4State
from .rlgame import BoardGeometry, RLGameConfig, RLGameState, RLMove, geometry

GameConfig = Connect4Config | RLGameConfig
GameState = Connect4State | RLGameState


def _module_for(obj):
    if isinstance(obj, (Connect4Config, Connect4State)):
        return connect4
    if isinstance(obj, (RLGameConfig, RLGameState)):
        return rlgame
    raise TypeError(f"not a game config or state: {obj!r}")


def initial_state(config: GameConfig) -> GameState:
    return _module_for(config).initial_state(config)


def legal_moves(state: GameState) -> list:
    return _module_for(state).legal_moves(state)


def apply_move(state: GameState, move, validate: bool = True) -> GameState:
    return _module_for(state).apply_move(state, move, validate)


def is_terminal(state: GameState) -> bool:
    return state.status is not Status.ONGOING


def winner(state: GameState) -> Player | None:
    return state.winner


def encode(state: GameState) -> np.ndarray:
    return _module_for(state).encode(state)


def encode_len(config: GameConfig) -> int:
    return _module_for(config).encode_len(config)


__all__ = [
    "BoardGeometry",
    "Connect4Config",
    "Connect4State",
    "GameConfig",
    "GameError",
    "GameState",
    "IllegalMoveError",
    "InvalidConfigError",
    "Player",
    "RLGameConfig",
    "RLGameState",
    "RLMove",
    "Status",
    "TerminalStateError",
    "apply_move",
    "connect4",
    "encode",
    "encode_len",
    "geometry",
    "initial_state",
    "is_terminal",
    "legal_moves",
    "rlgame",
    "textio",
    "winner",
]
