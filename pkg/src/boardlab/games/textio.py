"""One-line text forms for configs, states and moves, plus replayable logs.

Grammar (rows are written bottom row first, '.' empty, 'w' white, 'b' black):

    c4 config   c4:<height>x<width>
    c4 state    c4:<h>x<w>:<row>/<row>/...:<to_move>
    c4 move     <column>
    rl config   rl:<n>x<base>x<pawns>
    rl state    rl:<n>x<base>x<pawns>:<row>/...:<to_move>:<white_in_base>,<black_in_base>:<ply>
    rl move     b><row>,<col>        step out of the own base
                <row>,<col>><row>,<col>

A game log is the config line followed by one move per line; blank lines
and lines starting with '#' are skipped. Terminal status is recomputed
when parsing, so the text forms round-trip every state the engines emit.
"""

from __future__ import annotations

from pathlib import Path

from . import connect4, rlgame
from .base import Player, Status, player_from_letter

GameConfig = connect4.Connect4Config | rlgame.RLGameConfig
GameState = connect4.Connect4State | rlgame.RLGameState


def config_to_text(config: GameConfig) -> str:
    return config.text()


def config_from_text(text: str) -> GameConfig:
    kind, _, dims = text.strip().partition(":")
    parts = dims.split("x")
    if kind == "c4" and len(parts) == 2:
        return connect4.Connect4Config(int(parts[0]), int(parts[1]))
    if kind == "rl" and len(parts) == 3:
        return rlgame.RLGameConfig(int(parts[0]), int(parts[1]), int(parts[2]))
    raise ValueError(f"unrecognised game config {text!r}")


def _rows_to_text(cells: bytes, width: int) -> str:
    letters = {0: ".", 1: "w", 2: "b"}
    rows = []
    for r in range(len(cells) // width):
        rows.append("".join(letters[c] for c in cells[r * width : (r + 1) * width]))
    return "/".join(rows)


def _rows_from_text(text: str, height: int, width: int) -> bytes:
    rows = text.split("/")
    if len(rows) != height:
        raise ValueError(f"expected {height} rows, got {len(rows)}")
    values = {".": 0, "w": 1, "b": 2}
    out = bytearray()
    for r, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"row {r} has {len(row)} cells, expected {width}")
        try:
            out.extend(values[ch] for ch in row)
        except KeyError as exc:
            raise ValueError(f"unknown cell letter in row {r}: {exc}") from None
    return bytes(out)


def state_to_text(state: GameState) -> str:
    if isinstance(state, connect4.Connect4State):
        rows = _rows_to_text(state.cells, state.config.width)
        return f"{state.config.text()}:{rows}:{state.to_move.letter}"
    rows = _rows_to_text(state.cells, state.config.n)
    wb, bb = state.in_base
    return f"{state.config.text()}:{rows}:{state.to_move.letter}:{wb},{bb}:{state.ply_count}"


def _derive_c4(config, cells: bytes, to_move: Player) -> connect4.Connect4State:
    w, h = config.width, config.height
    heights = []
    for col in range(w):
        filled = 0
        seen_empty = False
        for row in range(h):
            if cells[row * w + col] != 0:
                if seen_empty:
                    raise ValueError(f"floating coin in column {col}")
                filled += 1
            else:
                seen_empty = True
        heights.append(filled)
    ply = sum(heights)
    gap = cells.count(1) - cells.count(2)
    if gap != (0 if to_move is Player.WHITE else 1):
        raise ValueError("coin counts do not match the player to move")

    def has_line(value: int) -> bool:
        for row in range(h):
            for col in range(w):
                if cells[row * w + col] == value and connect4._wins_at(cells, w, h, row, col, value):
                    return True
        return False

    status, winner = Status.ONGOING, None
    lines = [p for p in (Player.WHITE, Player.BLACK) if has_line(p.value)]
    if len(lines) == 2:
        raise ValueError("both players hold a connect line")
    if lines:
        if lines[0] is to_move:
            raise ValueError("the winning line cannot belong to the player to move")
        status, winner = Status.WON, lines[0]
    if status is Status.ONGOING and ply == config.cells:
        status = Status.DRAWN
    return connect4.Connect4State(config, cells, tuple(heights), to_move, status, winner, ply)


def _derive_rl(config, cells: bytes, to_move: Player, in_base, ply: int) -> rlgame.RLGameState:
    geo = rlgame.geometry(config)
    for cell in geo.white_base:
        if cells[cell] == 1:
            raise ValueError("white pawn inside the white base region")
    for cell in geo.black_base:
        if cells[cell] == 2:
            raise ValueError("black pawn inside the black base region")
    for player, base_count in ((Player.WHITE, in_base[0]), (Player.BLACK, in_base[1])):
        total = cells.count(player.value) + base_count
        if base_count < 0 or total > config.pawns:
            raise ValueError(f"{player.name.lower()} pawn counts exceed the budget")

    def make(status: Status, winner: Player | None) -> rlgame.RLGameState:
        return rlgame.RLGameState(config, cells, in_base, to_move, status, winner, ply)

    if any(cells[c] == 1 for c in geo.black_base):
        return make(Status.WON, Player.WHITE)
    if any(cells[c] == 2 for c in geo.white_base):
        return make(Status.WON, Player.BLACK)
    white_total = cells.count(1) + in_base[0]
    black_total = cells.count(2) + in_base[1]
    if white_total == 0 and black_total == 0:
        return make(Status.DRAWN, None)
    if white_total == 0:
        return make(Status.WON, Player.BLACK)
    if black_total == 0:
        return make(Status.WON, Player.WHITE)
    probe = make(Status.ONGOING, None)
    if not rlgame.legal_moves(probe):
        return make(Status.WON, to_move.opponent)
    if ply >= config.ply_cap:
        return make(Status.DRAWN, None)
    return probe


def state_from_text(text: str) -> GameState:
    parts = text.strip().split(":")
    config = config_from_text(":".join(parts[:2]))
    if isinstance(config, connect4.Connect4Config):
        if len(parts) != 4:
            raise ValueError("connect-4 state needs 4 colon-separated fields")
        cells = _rows_from_text(parts[2], config.height, config.width)
        return _derive_c4(config, cells, player_from_letter(parts[3]))
    if len(parts) != 6:
        raise ValueError("rlgame state needs 6 colon-separated fields")
    cells = _rows_from_text(parts[2], config.n, config.n)
    to_move = player_from_letter(parts[3])
    wb_text, _, bb_text = parts[4].partition(",")
    return _derive_rl(config, cells, to_move, (int(wb_text), int(bb_text)), int(parts[5]))


def _cell_text(cell: int, n: int) -> str:
    return f"{cell // n},{cell % n}"


def _cell_from_text(text: str, n: int) -> int:
    row_text, _, col_text = text.partition(",")
    row, col = int(row_text), int(col_text)
    if not (0 <= row < n and 0 <= col < n):
        raise ValueError(f"cell {text!r} is off the board")
    return row * n + col


def move_to_text(config: GameConfig, move) -> str:
    if isinstance(config, connect4.Connect4Config):
        return str(move)
    n = config.n
    src = "b" if move.src is None else _cell_text(move.src, n)
    return f"{src}>{_cell_text(move.dst, n)}"


def move_from_text(config: GameConfig, text: str):
    text = text.strip()
    if isinstance(config, connect4.Connect4Config):
        return int(text)
    src_text, sep, dst_text = text.partition(">")
    if not sep:
        raise ValueError(f"malformed move {text!r}")
    src = None if src_text == "b" else _cell_from_text(src_text, config.n)
    return rlgame.RLMove(src, _cell_from_text(dst_text, config.n))


def write_game_log(path: str | Path, config: GameConfig, moves) -> None:
    lines = [config_to_text(config)]
    lines.extend(move_to_text(config, m) for m in moves)
    Path(path).write_text("\n".join(lines) + "\n")


def read_game_log(path: str | Path):
    lines = Path(path).read_text().splitlines()
    rows = [ln.strip() for ln in lines if ln.strip() and not ln.strip().startswith("#")]
    if not rows:
        raise ValueError("empty game log")
    config = config_from_text(rows[0])
    moves = [move_from_text(config, ln) for ln in rows[1:]]
    return config, moves


def replay(config: GameConfig, moves) -> list:
    """All states visited by the move list, starting from the initial state."""
    if isinstance(config, connect4.Connect4Config):
        mod = connect4
    else:
        mod = rlgame
    states = [mod.initial_state(config)]
    for move in moves:
        states.append(mod.apply_move(states[-1], move))
    return states
