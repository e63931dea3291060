"""Temporal-difference learning with a small sigmoid value network.

An agent is a profile of three characteristics: epsilon (how often it
plays the move its network likes best), gamma (how far ahead rewards
reach), and lambda (how strongly each observed error pulls on the
weights).  This script trains one profile on 5x4 Connect-4 against a
frozen random opponent, then measures it against fresh random play.

Run from the repository root:

    python3 demos/03_td_learning.py
"""

import time
from pathlib import Path

from boardlab import games, learning
from boardlab.games import Connect4Config, Player, Status
from boardlab.seeds import derive_rng

OUT = Path("demo-out/learning")

CONFIG = Connect4Config(5, 4)
LEARNER = learning.AgentProfile("learner", epsilon=0.9, gamma=0.9, lam=0.6)
# epsilon 0 plays uniformly at random and lambda 0 never updates, so
# this profile is an inert sparring partner even when it shares the net
RANDOM = learning.AgentProfile("random", epsilon=0.0, gamma=0.5, lam=0.0)


def win_rate_vs_random(net: learning.ValueNetwork, games_n: int, seed_label: str) -> float:
    wins = 0
    for g in range(games_n):
        rng = derive_rng(99, seed_label, g)
        agent_is_white = g % 2 == 0
        state = games.initial_state(CONFIG)
        while state.status is Status.ONGOING:
            if (state.to_move is Player.WHITE) == agent_is_white:
                move = learning.select_move(LEARNER, net, state, rng)
            else:
                moves = games.legal_moves(state)
                move = moves[int(rng.integers(len(moves)))]
            state = games.apply_move(state, move)
        if state.winner is not None and (state.winner is Player.WHITE) == agent_is_white:
            wins += 1
    return wins / games_n


def main() -> None:
    print(f"board: {CONFIG.text()}, encoded as {games.encode_len(CONFIG)} inputs")
    print(f"learner: epsilon {LEARNER.epsilon}, gamma {LEARNER.gamma}, lambda {LEARNER.lam}")

    net = learning.ValueNetwork.initialize(games.encode_len(CONFIG), derive_rng(42, "net"))
    opening = games.initial_state(CONFIG)
    print(f"\nuntrained value of the opening: {net.evaluate(games.encode(opening)):.4f}")
    print(f"untrained win rate over 100 games: {win_rate_vs_random(net, 100, 'before'):.2f}")

    print("\ntraining for 1000 games against the frozen random profile ...")
    started = time.perf_counter()
    for g in range(1000):
        rng = derive_rng(42, "train", g)
        pair = ((LEARNER, net), (RANDOM, net))
        learning.play_game(*(pair if g % 2 == 0 else pair[::-1]), CONFIG, rng)
    print(f"done in {time.perf_counter() - started:.1f}s")

    print(f"\ntrained value of the opening: {net.evaluate(games.encode(opening)):.4f}")
    print(f"trained win rate over 100 games: {win_rate_vs_random(net, 100, 'after'):.2f}")

    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / "learner.npz"
    learning.save_checkpoint(path, net, CONFIG)
    again = learning.load_checkpoint(path, CONFIG)
    print(f"\ncheckpoint round trip through {path}:",
          "identical" if again.weights().keys() == net.weights().keys() else "broken")
    print("(loading refuses a checkpoint trained for a different board)")


if __name__ == "__main__":
    main()
