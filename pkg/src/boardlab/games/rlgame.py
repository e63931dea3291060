"""RLGame: a pawn race on an n x n board with two corner bases.

White owns an alpha x alpha base in the lower-left corner, Black the
mirror block in the upper-right. Each side starts with `pawns` pawns
pooled inside its base; the base acts as a single square, so a pawn
leaves it onto any orthogonally adjacent free square. On the field a
pawn steps to an orthogonally adjacent free square, but its distance
from its own base region must never decrease. Distance is the larger
of the two axis offsets from the base block (the king-move metric;
with the base treated as one square, sideways steps that keep the
dominant offset are legal while true backward steps are not; this is
the reading under which random dense positions reproduce the published
trapped-pawn rates, where the shortest-path metric does not). Stepping onto
any cell of the enemy base wins immediately. After every move, any
pawn of either colour that has no legal step left is removed from the
board; losing the last pawn loses the game. A side whose turn it is
with no legal move loses immediately. Games are drawn after 20 * n^2
plies, or when both sides run out of pawns at once.

Cells are indexed row major with row 0 at the bottom: index = row * n
+ col. Byte values: 0 empty, 1 white pawn, 2 black pawn. Base cells
stay 0 except for a winning pawn that just entered the enemy base.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .base import (
    IllegalMoveError,
    InvalidConfigError,
    Player,
    Status,
    TerminalStateError,
)


@dataclass(frozen=True, slots=True)
class RLGameConfig:
    n: int
    base: int
    pawns: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or not 5 <= self.n <= 10:
            raise InvalidConfigError("n must be an integer in 5..10")
        if not isinstance(self.base, int) or not 2 <= self.base <= 4:
            raise InvalidConfigError("base must be an integer in 2..4")
        if not isinstance(self.pawns, int) or not 1 <= self.pawns <= 10:
            raise InvalidConfigError("pawns must be an integer in 1..10")
        if self.n < 2 * self.base + 1:
            raise InvalidConfigError("n must be at least 2*base+1 to separate the bases")

    @property
    def cells(self) -> int:
        return self.n * self.n

    @property
    def field_size(self) -> int:
        return self.n * self.n - 2 * self.base * self.base

    @property
    def ply_cap(self) -> int:
        return 20 * self.n * self.n

    def text(self) -> str:
        return f"rl:{self.n}x{self.base}x{self.pawns}"


class RLMove(NamedTuple):
    """src is a cell index, or None for a step out of the mover's base."""

    src: int | None
    dst: int


class _Target(NamedTuple):
    dst: int
    is_win: bool
    dist: int


@dataclass(frozen=True)
class BoardGeometry:
    """Static per-config lookup tables shared by the engine and the sampler."""

    n: int
    white_base: frozenset[int]
    black_base: frozenset[int]
    field_cells: tuple[int, ...]
    dist_white: tuple[int, ...]
    dist_black: tuple[int, ...]
    neighbors: tuple[tuple[int, ...], ...]
    exit_cells_white: tuple[int, ...]
    exit_cells_black: tuple[int, ...]
    targets_white: tuple[tuple[_Target, ...], ...]
    targets_black: tuple[tuple[_Target, ...], ...]

    def dist(self, player: Player) -> tuple[int, ...]:
        return self.dist_white if player is Player.WHITE else self.dist_black

    def exit_cells(self, player: Player) -> tuple[int, ...]:
        return self.exit_cells_white if player is Player.WHITE else self.exit_cells_black

    def targets(self, player: Player) -> tuple[tuple[_Target, ...], ...]:
        return self.targets_white if player is Player.WHITE else self.targets_black

    def enemy_base(self, player: Player) -> frozenset[int]:
        return self.black_base if player is Player.WHITE else self.white_base


@lru_cache(maxsize=None)
def geometry(config: RLGameConfig) -> BoardGeometry:
    n, a = config.n, config.base
    white_base = frozenset(r * n + c for r in range(a) for c in range(a))
    black_base = frozenset(r * n + c for r in range(n - a, n) for c in range(n - a, n))
    field_cells = tuple(i for i in range(n * n) if i not in white_base and i not in black_base)

    def dist_to_corner(row: int, col: int, low: bool) -> int:
        # king-move distance to an a x a corner block: the larger axis offset
        if low:
            return max(0, row - (a - 1), col - (a - 1))
        return max(0, (n - a) - row, (n - a) - col)

    dist_white = tuple(dist_to_corner(i // n, i % n, True) for i in range(n * n))
    dist_black = tuple(dist_to_corner(i // n, i % n, False) for i in range(n * n))

    neighbors = []
    for i in range(n * n):
        r, c = divmod(i, n)
        nbs = []
        for dr, dc in ((-1, 0), (0, -1), (0, 1), (1, 0)):
            rr, cc = r + dr, c + dc
            if 0 <= rr < n and 0 <= cc < n:
                nbs.append(rr * n + cc)
        neighbors.append(tuple(sorted(nbs)))
    neighbors = tuple(neighbors)

    def exits(base: frozenset[int]) -> tuple[int, ...]:
        out = set()
        for cell in base:
            for nb in neighbors[cell]:
                if nb not in base:
                    out.add(nb)
        return tuple(sorted(out))

    def targets(own_base: frozenset[int], enemy: frozenset[int], dist: tuple[int, ...]):
        per_cell = []
        for i in range(n * n):
            if i in own_base or i in enemy:
                per_cell.append(())
                continue
            entries = []
            for nb in neighbors[i]:
                if nb in own_base:
                    continue
                entries.append(_Target(nb, nb in enemy, dist[nb]))
            per_cell.append(tuple(entries))
        return tuple(per_cell)

    return BoardGeometry(
        n=n,
        white_base=white_base,
        black_base=black_base,
        field_cells=field_cells,
        dist_white=dist_white,
        dist_black=dist_black,
        neighbors=neighbors,
        exit_cells_white=exits(white_base),
        exit_cells_black=exits(black_base),
        targets_white=targets(white_base, black_base, dist_white),
        targets_black=targets(black_base, white_base, dist_black),
    )


@dataclass(frozen=True, slots=True)
class RLGameState:
    config: RLGameConfig
    cells: bytes
    in_base: tuple[int, int]
    to_move: Player
    status: Status
    winner: Player | None
    ply_count: int

    def in_base_of(self, player: Player) -> int:
        return self.in_base[0] if player is Player.WHITE else self.in_base[1]

    def field_count(self, player: Player) -> int:
        return self.cells.count(player.value)


def initial_state(config: RLGameConfig) -> RLGameState:
    return RLGameState(
        config=config,
        cells=bytes(config.cells),
        in_base=(config.pawns, config.pawns),
        to_move=Player.WHITE,
        status=Status.ONGOING,
        winner=None,
        ply_count=0,
    )


def legal_moves(state: RLGameState) -> list[RLMove]:
    """Base exits first (ascending target), then pawn steps ascending by
    source cell and target cell."""
    if state.status is not Status.ONGOING:
        raise TerminalStateError("game is over; no legal moves")
    geo = geometry(state.config)
    me = state.to_move
    mv = me.value
    cells = state.cells
    moves: list[RLMove] = []
    if state.in_base_of(me) > 0:
        for dst in geo.exit_cells(me):
            if cells[dst] == 0:
                moves.append(RLMove(None, dst))
    dist = geo.dist(me)
    targets = geo.targets(me)
    for src in range(len(cells)):
        if cells[src] != mv:
            continue
        d0 = dist[src]
        for dst, is_win, dd in targets[src]:
            if is_win or (cells[dst] == 0 and dd >= d0):
                moves.append(RLMove(src, dst))
    return moves


def _pawn_alive(cells, cell: int, geo: BoardGeometry, owner: Player) -> bool:
    d0 = geo.dist(owner)[cell]
    for dst, is_win, dd in geo.targets(owner)[cell]:
        if is_win or (cells[dst] == 0 and dd >= d0):
            return True
    return False


def _validate(state: RLGameState, move: RLMove, geo: BoardGeometry) -> None:
    me = state.to_move
    src, dst = move
    if not 0 <= dst < state.config.cells:
        raise IllegalMoveError(f"target cell {dst} does not exist")
    if src is None:
        if state.in_base_of(me) == 0:
            raise IllegalMoveError("no pawns left in the base")
        if dst not in geo.exit_cells(me):
            raise IllegalMoveError(f"cell {dst} is not adjacent to the base")
        if state.cells[dst] != 0:
            raise IllegalMoveError(f"cell {dst} is occupied")
        return
    if not 0 <= src < state.config.cells or state.cells[src] != me.value:
        raise IllegalMoveError(f"no own pawn on cell {src}")
    if dst not in geo.neighbors[src]:
        raise IllegalMoveError(f"cells {src} and {dst} are not orthogonally adjacent")
    if dst in geo.enemy_base(me):
        return
    if dst in (geo.white_base if me is Player.WHITE else geo.black_base):
        raise IllegalMoveError("cannot re-enter the own base")
    if state.cells[dst] != 0:
        raise IllegalMoveError(f"cell {dst} is occupied")
    dist = geo.dist(me)
    if dist[dst] < dist[src]:
        raise IllegalMoveError("step would decrease the distance from the own base")


def apply_move(state: RLGameState, move: RLMove, validate: bool = True) -> RLGameState:
    """Apply a move and settle its consequences.

    Order of effects: the pawn moves (a win by entering the enemy base
    ends the game at once); trapped pawns of either colour are removed
    simultaneously; a side with no pawns left loses (a draw if both
    empty at once); a side to move with no legal move loses; the ply
    cap draws the game. Relies on the engine invariant that the given
    state has no trapped pawn, so only the moved pawn and the occupied
    neighbours of its target can become trapped here.
    """
    if state.status is not Status.ONGOING:
        raise TerminalStateError("game is over; cannot move")
    geo = geometry(state.config)
    if validate:
        _validate(state, move, geo)
    me = state.to_move
    opp = me.opponent
    src, dst = move
    board = bytearray(state.cells)
    wb, bb = state.in_base
    if src is None:
        if me is Player.WHITE:
            wb -= 1
        else:
            bb -= 1
    else:
        board[src] = 0
    board[dst] = me.value
    ply = state.ply_count + 1

    if dst in geo.enemy_base(me):
        return RLGameState(state.config, bytes(board), (wb, bb), opp, Status.WON, me, ply)

    # Trapped-pawn sweep. Removals only free cells, so no second pass can
    # find a new casualty; candidates are the moved pawn and the pawns
    # next to the newly occupied cell.
    candidates = [dst] + [c for c in geo.neighbors[dst] if board[c] != 0]
    owner = {1: Player.WHITE, 2: Player.BLACK}
    dead = [c for c in candidates if not _pawn_alive(board, c, geo, owner[board[c]])]
    for c in dead:
        board[c] = 0

    white_total = board.count(1) + wb
    black_total = board.count(2) + bb
    new_cells = bytes(board)
    if white_total == 0 and black_total == 0:
        return RLGameState(state.config, new_cells, (wb, bb), opp, Status.DRAWN, None, ply)
    if white_total == 0:
        return RLGameState(state.config, new_cells, (wb, bb), opp, Status.WON, Player.BLACK, ply)
    if black_total == 0:
        return RLGameState(state.config, new_cells, (wb, bb), opp, Status.WON, Player.WHITE, ply)

    # After the sweep every on-field pawn has a move, so the opponent is
    # stuck only with all pawns pooled in the base and every exit blocked.
    opp_field = new_cells.count(opp.value)
    if opp_field == 0 and not any(new_cells[e] == 0 for e in geo.exit_cells(opp)):
        return RLGameState(state.config, new_cells, (wb, bb), opp, Status.WON, me, ply)

    if ply >= state.config.ply_cap:
        return RLGameState(state.config, new_cells, (wb, bb), opp, Status.DRAWN, None, ply)
    return RLGameState(state.config, new_cells, (wb, bb), opp, Status.ONGOING, None, ply)


def is_terminal(state: RLGameState) -> bool:
    return state.status is not Status.ONGOING


def winner(state: RLGameState) -> Player | None:
    return state.winner


def encode_len(config: RLGameConfig) -> int:
    # cells, the two scaled base counts, the four coverage flags
    return config.cells + 2 + 4


def encode(state: RLGameState) -> np.ndarray:
    """Feature vector from the perspective of the player who moved last.

    Cell entries are +1 for that player's pawns, -1 for the opponent's
    and 0 elsewhere (base cells included, so a winning entry is visible).
    Then the two in-base counts scaled by 1/pawns, own side first, and
    two coverage flags per player: on-board pawns over total cells and
    on-board pawns over the per-player pawn budget.
    """
    me = state.to_move.opponent
    arr = np.frombuffer(state.cells, dtype=np.uint8)
    mine = arr == me.value
    theirs = arr == me.opponent.value
    out = np.zeros(encode_len(state.config), dtype=np.float64)
    out[: arr.size][mine] = 1.0
    out[: arr.size][theirs] = -1.0
    pawns = state.config.pawns
    out[-6] = state.in_base_of(me) / pawns
    out[-5] = state.in_base_of(me.opponent) / pawns
    cells = state.config.cells
    own = int(mine.sum())
    enemy = int(theirs.sum())
    out[-4] = own / cells
    out[-3] = own / pawns
    out[-2] = enemy / cells
    out[-1] = enemy / pawns
    return out
