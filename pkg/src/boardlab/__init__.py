"""Parametric board games, learning agents, and complexity experiments."""

__version__ = "0.1.0"

from . import analysis, complexity, experiment, games, learning, tournament
from .games import (
    Connect4Config,
    Connect4State,
    Player,
    RLGameConfig,
    RLGameState,
    RLMove,
    Status,
    apply_move,
    encode,
    encode_len,
    initial_state,
    is_terminal,
    legal_moves,
    winner,
)
from .seeds import derive_rng, derive_seed

__all__ = [
    "__version__",
    "analysis",
    "complexity",
    "experiment",
    "games",
    "learning",
    "tournament",
    "Connect4Config",
    "Connect4State",
    "Player",
    "RLGameConfig",
    "RLGameState",
    "RLMove",
    "Status",
    "apply_move",
    "encode",
    "encode_len",
    "initial_state",
    "is_terminal",
    "legal_moves",
    "winner",
    "derive_rng",
    "derive_seed",
]
