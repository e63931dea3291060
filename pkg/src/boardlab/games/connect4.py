"""Connect-4 on a configurable grid.

Cells are stored row major as bytes (0 empty, 1 white, 2 black) with row 0
at the bottom, so index = row * width + col. A move is a column index and
the coin settles on the lowest empty cell of that column. White moves
first. The winning line length is fixed at four.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import (
    IllegalMoveError,
    InvalidConfigError,
    Player,
    Status,
    TerminalStateError,
)

_LINE_DIRECTIONS = ((0, 1), (1, 0), (1, 1), (1, -1))


@dataclass(frozen=True, slots=True)
class Connect4Config:
    height: int
    width: int
    connect_target: int = 4

    def __post_init__(self) -> None:
        if not isinstance(self.height, int) or self.height < 1:
            raise InvalidConfigError("height must be a positive integer")
        if not isinstance(self.width, int) or self.width < 1:
            raise InvalidConfigError("width must be a positive integer")
        if self.connect_target != 4:
            raise InvalidConfigError("connect_target is fixed to 4")
        if self.height < 4 and self.width < 4:
            # no four-in-a-row fits on such a grid in any direction
            raise InvalidConfigError("height or width must be at least 4")

    @property
    def cells(self) -> int:
        return self.height * self.width

    def text(self) -> str:
        return f"c4:{self.height}x{self.width}"


@dataclass(frozen=True, slots=True)
class Connect4State:
    config: Connect4Config
    cells: bytes
    heights: tuple[int, ...]
    to_move: Player
    status: Status
    winner: Player | None
    ply_count: int

    def cell(self, row: int, col: int) -> int:
        return self.cells[row * self.config.width + col]


def initial_state(config: Connect4Config) -> Connect4State:
    return Connect4State(
        config=config,
        cells=bytes(config.cells),
        heights=(0,) * config.width,
        to_move=Player.WHITE,
        status=Status.ONGOING,
        winner=None,
        ply_count=0,
    )


def legal_moves(state: Connect4State) -> list[int]:
    """Columns with at least one empty cell, ascending."""
    if state.status is not Status.ONGOING:
        raise TerminalStateError("game is over; no legal moves")
    h = state.config.height
    return [c for c, used in enumerate(state.heights) if used < h]


def _wins_at(cells: bytes, width: int, height: int, row: int, col: int, mover: int) -> bool:
    # count contiguous coins of the mover through the placed cell, four directions
    for dr, dc in _LINE_DIRECTIONS:
        run = 1
        for sign in (1, -1):
            r, c = row + sign * dr, col + sign * dc
            while 0 <= r < height and 0 <= c < width and cells[r * width + c] == mover:
                run += 1
                r += sign * dr
                c += sign * dc
        if run >= 4:
            return True
    return False


def apply_move(state: Connect4State, move: int, validate: bool = True) -> Connect4State:
    """Drop a coin for the side to move; returns the successor state."""
    if validate:
        if state.status is not Status.ONGOING:
            raise TerminalStateError("game is over; cannot move")
        if not isinstance(move, int) or not 0 <= move < state.config.width:
            raise IllegalMoveError(f"column {move!r} does not exist")
        if state.heights[move] >= state.config.height:
            raise IllegalMoveError(f"column {move} is full")
    cfg = state.config
    row = state.heights[move]
    mover = state.to_move
    cells = bytearray(state.cells)
    cells[row * cfg.width + move] = mover.value
    new_cells = bytes(cells)
    heights = state.heights[:move] + (row + 1,) + state.heights[move + 1 :]
    ply = state.ply_count + 1
    if _wins_at(new_cells, cfg.width, cfg.height, row, move, mover.value):
        status, winner = Status.WON, mover
    elif ply == cfg.cells:
        status, winner = Status.DRAWN, None
    else:
        status, winner = Status.ONGOING, None
    return Connect4State(
        config=cfg,
        cells=new_cells,
        heights=heights,
        to_move=mover.opponent,
        status=status,
        winner=winner,
        ply_count=ply,
    )


def is_terminal(state: Connect4State) -> bool:
    return state.status is not Status.ONGOING


def winner(state: Connect4State) -> Player | None:
    return state.winner


def encode_len(config: Connect4Config) -> int:
    # one entry per cell plus the four coverage flags
    return config.cells + 4


def encode(state: Connect4State) -> np.ndarray:
    """Feature vector from the perspective of the player who moved last.

    Cell entries are +1 for that player's coins, -1 for the opponent's and
    0 for empty cells. The tail holds two coverage flags per player: the
    fraction of all board cells that player occupies, and the count of its
    coins divided by the per-player coin budget.
    """
    me = state.to_move.opponent
    arr = np.frombuffer(state.cells, dtype=np.uint8)
    mine = arr == me.value
    theirs = arr == me.opponent.value
    out = np.zeros(encode_len(state.config), dtype=np.float64)
    out[: arr.size][mine] = 1.0
    out[: arr.size][theirs] = -1.0
    cells = state.config.cells
    budget = (cells + 1) // 2
    own = int(mine.sum())
    enemy = int(theirs.sum())
    out[-4] = own / cells
    out[-3] = own / budget
    out[-2] = enemy / cells
    out[-1] = enemy / budget
    return out
