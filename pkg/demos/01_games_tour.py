"""A guided tour of the two game engines.

Both games share one interface: a frozen config describes the board, a
frozen state snapshots a position, and `initial_state`, `legal_moves`,
and `apply_move` drive play.  States also travel as plain text, so this
script round-trips a position through its text form along the way.

Run from the repository root:

    python3 demos/01_games_tour.py
"""

from boardlab import games
from boardlab.games import Connect4Config, Player, RLGameConfig, Status, textio
from boardlab.seeds import derive_rng

SYMBOLS = {0: ".", 1: "w", 2: "b"}


def board_lines(state) -> list[str]:
    config = state.config
    width = config.width if isinstance(config, Connect4Config) else config.n
    height = len(state.cells) // width
    rows = [state.cells[r * width : (r + 1) * width] for r in range(height)]
    return ["".join(SYMBOLS[c] for c in row) for row in reversed(rows)]


def show(state, note: str) -> None:
    print(f"\n{note}")
    for line in board_lines(state):
        print("   " + line)
    print(f"   ply {state.ply_count}, {state.status.name.lower()}", end="")
    if state.status is Status.ONGOING:
        print(f", {state.to_move.name.lower()} to move")
    elif state.winner is not None:
        print(f", {state.winner.name.lower()} wins")
    else:
        print()


def connect4_tour() -> None:
    print("=" * 60)
    print("Connect-4 on a 4x4 board (vertical drop, four in a row)")
    print("=" * 60)
    config = Connect4Config(4, 4)
    state = games.initial_state(config)
    print(f"config text: {config.text()}")
    print(f"legal moves from the start: {games.legal_moves(state)} (columns)")

    # white stacks column 0 while black wanders; white wins upward
    for move in (0, 1, 0, 2, 0, 3, 0):
        state = games.apply_move(state, move)
    show(state, "white stacked column 0:")

    text = textio.state_to_text(state)
    print(f"\nas text: {text}")
    back = textio.state_from_text(text)
    print(f"round trip preserves the position: {back == state}")


def rlgame_tour() -> None:
    print()
    print("=" * 60)
    print("RLGame on 5x5 with 2x2 corner bases and 3 pawns per side")
    print("=" * 60)
    config = RLGameConfig(5, 2, 3)
    state = games.initial_state(config)
    moves = games.legal_moves(state)
    texts = [textio.move_to_text(config, m) for m in moves[:4]]
    print(f"white's first choices ({len(moves)} moves): {', '.join(texts)} ...")
    print("(pawns leave the base onto adjacent squares and may never")
    print(" step back toward their own corner; reaching the enemy base wins)")

    rng = derive_rng(2024, "demo", "rlgame")
    while state.status is Status.ONGOING:
        options = games.legal_moves(state)
        state = games.apply_move(state, options[int(rng.integers(len(options)))])
    show(state, "a random playout ran to the end:")
    print(f"   pawns still in base: white {state.in_base[0]}, black {state.in_base[1]}")


def random_playout_census() -> None:
    print()
    print("=" * 60)
    print("A quick census of 200 random games per board")
    print("=" * 60)
    for config in (Connect4Config(4, 4), Connect4Config(6, 7), RLGameConfig(5, 2, 2)):
        plies = []
        outcomes = {"white": 0, "black": 0, "draw": 0}
        for k in range(200):
            rng = derive_rng(7, "census", config.text(), k)
            state = games.initial_state(config)
            while state.status is Status.ONGOING:
                options = games.legal_moves(state)
                state = games.apply_move(state, options[int(rng.integers(len(options)))])
            plies.append(state.ply_count)
            if state.winner is Player.WHITE:
                outcomes["white"] += 1
            elif state.winner is Player.BLACK:
                outcomes["black"] += 1
            else:
                outcomes["draw"] += 1
        mean = sum(plies) / len(plies)
        print(
            f"{config.text():>10}: mean length {mean:5.1f} plies, "
            f"white {outcomes['white']}, black {outcomes['black']}, draws {outcomes['draw']}"
        )


def main() -> None:
    connect4_tour()
    rlgame_tour()
    random_playout_census()


if __name__ == "__main__":
    main()
