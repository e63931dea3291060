"""Independent reference implementations used only by the tests.

Everything here is written from the rules as prose, on purpose with
different data structures than the package (column stacks instead of
flat byte boards, position dicts instead of bitmask kits, fixpoint
loops instead of incremental sweeps), so agreement is meaningful.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


class NaiveConnect4:
    """Connect-4 as a list of column stacks with a full-board win scan."""

    def __init__(self, height: int, width: int):
        self.height = height
        self.width = width
        self.cols: list[list[int]] = [[] for _ in range(width)]
        self.to_move = 1
        self.plies = 0
        self.outcome: tuple[str, int | None] = ("ongoing", None)

    def moves(self) -> list[int]:
        if self.outcome[0] != "ongoing":
            raise RuntimeError("game over")
        return [c for c in range(self.width) if len(self.cols[c]) < self.height]

    def grid(self) -> list[list[int]]:
        g = [[0] * self.width for _ in range(self.height)]
        for c, stack in enumerate(self.cols):
            for r, colour in enumerate(stack):
                g[r][c] = colour
        return g

    def _scan_winner(self) -> int | None:
        g = self.grid()
        for r in range(self.height):
            for c in range(self.width):
                colour = g[r][c]
                if colour == 0:
                    continue
                for dr, dc in ((0, 1), (1, 0), (1, 1), (1, -1)):
                    rr, cc = r + 3 * dr, c + 3 * dc
                    if not (0 <= rr < self.height and 0 <= cc < self.width):
                        continue
                    if all(g[r + k * dr][c + k * dc] == colour for k in (1, 2, 3)):
                        return colour
        return None

    def apply(self, col: int) -> None:
        assert col in self.moves()
        self.cols[col].append(self.to_move)
        self.plies += 1
        self.to_move = 3 - self.to_move
        won = self._scan_winner()
        if won is not None:
            self.outcome = ("won", won)
        elif all(len(stack) == self.height for stack in self.cols):
            self.outcome = ("drawn", None)

    def cell(self, row: int, col: int) -> int:
        stack = self.cols[col]
        return stack[row] if row < len(stack) else 0


class NaiveRLGame:
    """The pawn race, replayed from the rules text.

    Board squares hold at most one pawn; remaining pawns are pooled in
    the bases. Distance from base is the king-move distance to the
    nearest square of the own base block.
    """

    def __init__(self, n: int, base: int, pawns: int):
        self.n = n
        self.a = base
        self.pawns = pawns
        self.white_base = {(r, c) for r in range(base) for c in range(base)}
        self.black_base = {(r, c) for r in range(n - base, n) for c in range(n - base, n)}
        self.board: dict[tuple[int, int], int] = {}
        self.in_base = {1: pawns, 2: pawns}
        self.to_move = 1
        self.plies = 0
        self.ply_cap = 20 * n * n
        self.outcome: tuple[str, int | None] = ("ongoing", None)

    def own_base(self, colour: int) -> set:
        return self.white_base if colour == 1 else self.black_base

    def enemy_base(self, colour: int) -> set:
        return self.black_base if colour == 1 else self.white_base

    def dist(self, pos: tuple[int, int], colour: int) -> int:
        return min(max(abs(pos[0] - r), abs(pos[1] - c)) for r, c in self.own_base(colour))

    def _neighbors(self, pos: tuple[int, int]):
        r, c = pos
        for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if 0 <= rr < self.n and 0 <= cc < self.n:
                yield rr, cc

    def pawn_steps(self, pos: tuple[int, int], colour: int) -> list[tuple[int, int]]:
        steps = []
        d0 = self.dist(pos, colour)
        for q in self._neighbors(pos):
            if q in self.own_base(colour):
                continue
            if q in self.enemy_base(colour):
                steps.append(q)
            elif q not in self.board and self.dist(q, colour) >= d0:
                steps.append(q)
        return steps

    def base_exits(self, colour: int) -> list[tuple[int, int]]:
        exits = set()
        for b in self.own_base(colour):
            for q in self._neighbors(b):
                if q not in self.own_base(colour) and q not in self.enemy_base(colour):
                    exits.add(q)
        return sorted(exits)

    def idx(self, pos: tuple[int, int]) -> int:
        return pos[0] * self.n + pos[1]

    def moves(self) -> set[tuple[int | None, int]]:
        if self.outcome[0] != "ongoing":
            raise RuntimeError("game over")
        me = self.to_move
        out: set[tuple[int | None, int]] = set()
        if self.in_base[me] > 0:
            for q in self.base_exits(me):
                if q not in self.board:
                    out.add((None, self.idx(q)))
        for pos, colour in self.board.items():
            if colour != me:
                continue
            for q in self.pawn_steps(pos, colour):
                out.add((self.idx(pos), self.idx(q)))
        return out

    def _sweep(self) -> None:
        # remove every pawn with no step, simultaneously, until stable
        while True:
            dead = [
                pos
                for pos, colour in self.board.items()
                if not self.pawn_steps(pos, colour)
            ]
            if not dead:
                return
            for pos in dead:
                del self.board[pos]

    def apply(self, move: tuple[int | None, int]) -> None:
        assert move in self.moves(), move
        me = self.to_move
        opp = 3 - me
        src, dst_idx = move
        dst = divmod(dst_idx, self.n)
        if src is None:
            self.in_base[me] -= 1
        else:
            del self.board[divmod(src, self.n)]
        self.plies += 1
        self.to_move = opp
        if dst in self.enemy_base(me):
            self.board[dst] = me
            self.outcome = ("won", me)
            return
        self.board[dst] = me
        self._sweep()
        totals = {
            colour: sum(1 for c in self.board.values() if c == colour) + self.in_base[colour]
            for colour in (1, 2)
        }
        if totals[1] == 0 and totals[2] == 0:
            self.outcome = ("drawn", None)
            return
        if totals[1] == 0:
            self.outcome = ("won", 2)
            return
        if totals[2] == 0:
            self.outcome = ("won", 1)
            return
        opp_on_field = any(c == opp for c in self.board.values())
        if not opp_on_field and all(q in self.board for q in self.base_exits(opp)):
            self.outcome = ("won", me)
            return
        if self.plies >= self.ply_cap:
            self.outcome = ("drawn", None)


def rl_position_legit(n: int, base: int, white: tuple[int, ...], black: tuple[int, ...]) -> bool:
    """No pawn of either colour is dead in the given field placement."""
    game = NaiveRLGame(n, base, 10)
    for cell in white:
        game.board[divmod(cell, n)] = 1
    for cell in black:
        game.board[divmod(cell, n)] = 2
    return all(game.pawn_steps(pos, colour) for pos, colour in game.board.items())


def enumerate_rl_placements(n: int, base: int, pawns: int):
    """Every ordered field placement with i white and j black pawns,
    i, j <= pawns, as (white cells, black cells) index tuples."""
    blocked = {r * n + c for r in range(base) for c in range(base)}
    blocked |= {r * n + c for r in range(n - base, n) for c in range(n - base, n)}
    field = [i for i in range(n * n) if i not in blocked]
    top = min(2 * pawns, len(field))
    for k in range(top + 1):
        for cells in itertools.combinations(field, k):
            for i in range(max(0, k - pawns), min(pawns, k) + 1):
                for white in itertools.combinations(cells, i):
                    white_set = set(white)
                    black = tuple(c for c in cells if c not in white_set)
                    yield white, black


def split_weight(pawns: int, on_field: int) -> int:
    """Number of (in base, captured, entered) splits for the rest."""
    return 1 + 2 * (pawns - on_field)


def average_ranks(values) -> list[float]:
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        shared = (i + j) / 2 + 1
        for t in range(i, j + 1):
            ranks[order[t]] = shared
        i = j + 1
    return ranks


def naive_spearman(x, y) -> float:
    rx, ry = average_ranks(list(x)), average_ranks(list(y))
    n = len(rx)
    mx = sum(rx) / n
    my = sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    return cov / math.sqrt(vx * vy)


def naive_kendall(x, y) -> float:
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    n = len(x)
    concordant = discordant = ties_x = ties_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = (x[i] > x[j]) - (x[i] < x[j])
            dy = (y[i] > y[j]) - (y[i] < y[j])
            if dx == 0:
                ties_x += 1
            if dy == 0:
                ties_y += 1
            if dx and dy:
                if dx == dy:
                    concordant += 1
                else:
                    discordant += 1
    pairs = n * (n - 1) // 2
    return (concordant - discordant) / math.sqrt((pairs - ties_x) * (pairs - ties_y))


def fd_gradients(net, x, h: float = 1e-5) -> dict[str, np.ndarray]:
    """Central-difference gradients of net.evaluate at x."""
    base = net.weights()
    grads = {}
    for key in base:
        shape = np.shape(base[key])
        grad = np.zeros(shape if shape else (1,))
        for index in np.ndindex(*grad.shape):
            shifted = net.copy()
            values = []
            for sign in (1.0, -1.0):
                weights = {k: np.array(v, dtype=float, copy=True) for k, v in base.items()}
                if shape:
                    weights[key][index] += sign * h
                else:
                    weights[key] = weights[key] + sign * h
                shifted.set_weights(weights)
                values.append(shifted.evaluate(x))
            grad[index] = (values[0] - values[1]) / (2 * h)
        grads[key] = grad if shape else grad[0]
    return grads
