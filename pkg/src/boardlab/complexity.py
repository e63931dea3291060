"""State-space size estimation for RLGame boards.

`upper_bound` counts, with exact integer arithmetic, every way to place
i white and j black pawns on the field (all cells outside the two
bases) for all i, j up to the pawn budget. Each placement is weighted
by the number of ways the off-field pawns can be split between "still
in the base", "captured" and "entered the enemy base" (at most one
pawn can have entered), which is 1 + 2*(budget - on_field) per player.
The count includes positions no legal game can reach.

`estimate` tightens the bound by sampling random placements per
(i, j) profile and measuring the fraction free of trapped pawns, i.e.
pawns with no legal step under the movement rules. Terms with i = 0 or
j = 0 have no pawn interaction and enter at full weight. The ratio of
the weighted legit mass over the upper bound shrinks as boards fill up.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .games import RLGameConfig, geometry
from .seeds import derive_rng

# Published enumeration results for Connect-4 grids (John Tromp's
# legal-position counts), keyed by (height, width). Used to order the
# built-in Connect-4 tournament sessions by complexity.
CONNECT4_STATE_SPACE: dict[tuple[int, int], float] = {
    (8, 2): 1.33e4,
    (8, 3): 8.42e6,
    (8, 4): 1.10e9,
    (7, 4): 1.35e8,
    (7, 5): 1.42e10,
    (6, 5): 1.04e9,
    (6, 6): 6.92e10,
    (6, 7): 4.53e12,
    (5, 5): 6.98e7,
    (5, 6): 2.82e9,
    (5, 7): 1.13e10,
}

BOARD_RANGE = range(5, 11)
BASE_RANGE = range(2, 5)
PAWN_RANGE = range(1, 11)


def valid_pairs() -> list[tuple[int, int]]:
    """(n, base) combinations whose bases are at least one square apart."""
    return [(n, a) for n in BOARD_RANGE for a in BASE_RANGE if n >= 2 * a + 1]


def _term(field: int, pawns: int, i: int, j: int) -> int:
    return (
        comb(field, i + j)
        * comb(i + j, i)
        * (1 + 2 * (pawns - i))
        * (1 + 2 * (pawns - j))
    )


def upper_bound(n: int, base: int, pawns: int) -> int:
    """Exact weighted count of placements, summed over all i, j >= 0."""
    config = RLGameConfig(n, base, pawns)
    field = config.field_size
    total = 0
    for i in range(pawns + 1):
        for j in range(pawns + 1):
            if i + j <= field:
                total += _term(field, pawns, i, j)
    return total


@dataclass(frozen=True)
class ConfigProfile:
    """A sampled placement class: i white and j black pawns on the field."""

    config: RLGameConfig
    i: int
    j: int

    def __post_init__(self) -> None:
        if not 0 < self.i <= self.config.pawns:
            raise ValueError("i must satisfy 0 < i <= pawns")
        if not 0 < self.j <= self.config.pawns:
            raise ValueError("j must satisfy 0 < j <= pawns")
        if self.i + self.j > self.config.field_size:
            raise ValueError("profile does not fit on the field")

    @property
    def weight(self) -> int:
        return _term(self.config.field_size, self.config.pawns, self.i, self.j)


def enumerate_profiles(config: RLGameConfig) -> list[ConfigProfile]:
    """All valid (i, j) profiles, ascending by i then j."""
    out = []
    for i in range(1, config.pawns + 1):
        for j in range(1, config.pawns + 1):
            if i + j <= config.field_size:
                out.append(ConfigProfile(config, i, j))
    return out


class _MaskKit:
    """Static boolean stencils for the vectorised trapped-pawn test.

    For each colour and each of the four step directions, `step_ok`
    marks the source cells whose target in that direction is a field
    cell reachable without shrinking the own-base distance; `win_any`
    marks sources adjacent to the enemy base. A pawn is alive when some
    direction with `step_ok` points at an empty cell, or `win_any`
    holds. This mirrors the engine's movement rule; the test suite
    checks the two implementations against each other.
    """

    def __init__(self, config: RLGameConfig) -> None:
        geo = geometry(config)
        n = config.n
        self.n = n
        self.field_cells = np.array(geo.field_cells, dtype=np.int64)
        field_mask = np.zeros((n, n), dtype=bool)
        field_mask.reshape(-1)[self.field_cells] = True
        self.field_mask = field_mask
        dists = {
            1: np.array(geo.dist_white, dtype=np.int64).reshape(n, n),
            2: np.array(geo.dist_black, dtype=np.int64).reshape(n, n),
        }
        bases = {1: geo.black_base, 2: geo.white_base}  # enemy base per colour
        self.step_ok: dict[int, list[np.ndarray]] = {}
        self.win_any: dict[int, np.ndarray] = {}
        self.directions = ((-1, 0), (0, -1), (0, 1), (1, 0))
        for colour in (1, 2):
            dist = dists[colour]
            enemy = np.zeros((n, n), dtype=bool)
            enemy.reshape(-1)[list(bases[colour])] = True
            win_any = np.zeros((n, n), dtype=bool)
            per_dir = []
            for dr, dc in self.directions:
                ok = np.zeros((n, n), dtype=bool)
                for r in range(n):
                    for c in range(n):
                        rr, cc = r + dr, c + dc
                        if not (0 <= rr < n and 0 <= cc < n):
                            continue
                        if enemy[rr, cc]:
                            win_any[r, c] = True
                        elif field_mask[rr, cc] and dist[rr, cc] >= dist[r, c]:
                            ok[r, c] = True
                per_dir.append(ok)
            self.step_ok[colour] = per_dir
            self.win_any[colour] = win_any


@lru_cache(maxsize=None)
def _mask_kit(config: RLGameConfig) -> _MaskKit:
    return _MaskKit(config)


def legit_mask(config: RLGameConfig, white_cells: np.ndarray, black_cells: np.ndarray) -> np.ndarray:
    """For a batch of placements, True where no pawn of either colour is trapped.

    `white_cells` has shape (batch, i) and `black_cells` (batch, j),
    holding flat board indices of distinct field cells.
    """
    kit = _mask_kit(config)
    n = kit.n
    batch = white_cells.shape[0] if white_cells.ndim == 2 else black_cells.shape[0]
    rows = np.arange(batch)[:, None]
    occupied = {}
    for colour, cells in ((1, white_cells), (2, black_cells)):
        board = np.zeros((batch, n * n), dtype=bool)
        if cells.size:
            board[rows, cells] = True
        occupied[colour] = board.reshape(batch, n, n)
    empty = kit.field_mask & ~occupied[1] & ~occupied[2]
    pad = np.zeros((batch, n + 2, n + 2), dtype=bool)
    pad[:, 1:-1, 1:-1] = empty
    ok = np.ones(batch, dtype=bool)
    for colour in (1, 2):
        alive = np.broadcast_to(kit.win_any[colour], (batch, n, n)).copy()
        for (dr, dc), step in zip(kit.directions, kit.step_ok[colour]):
            alive |= step & pad[:, 1 + dr : 1 + dr + n, 1 + dc : 1 + dc + n]
        ok &= ~(occupied[colour] & ~alive).any(axis=(1, 2))
    return ok


@dataclass(frozen=True)
class ProfileSample:
    i: int
    j: int
    samples: int
    legit: int
    weight: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.legit, self.samples)

    @property
    def contribution(self) -> Fraction:
        return self.fraction * self.weight


def sample_profile(profile: ConfigProfile, count: int, seed: int) -> ProfileSample:
    """Draw `count` uniform placements for the profile and count legit ones."""
    if count <= 0:
        raise ValueError("count must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    kit = _mask_kit(profile.config)
    field = kit.field_cells
    i, j = profile.i, profile.j
    keys = rng.random((count, field.size))
    order = np.argsort(keys, axis=1)[:, : i + j]
    cells = field[order]
    legit = int(legit_mask(profile.config, cells[:, :i], cells[:, i:]).sum())
    return ProfileSample(i, j, count, legit, profile.weight)


@dataclass
class ComplexityEstimate:
    config: RLGameConfig
    formula_value: int
    sampled_legit: Fraction
    ratio: float
    profiles: list[ProfileSample]
    samples_per_profile: int
    seed: int


def estimate(config: RLGameConfig, samples_per_profile: int = 1000, seed: int = 0) -> ComplexityEstimate:
    """Monte-Carlo legality ratio: weighted legit mass over the upper bound.

    Each profile gets its own generator derived from (seed, profile
    index), so results do not depend on evaluation order. Profile rows
    with i = 0 or j = 0 are not sampled; they carry full weight.
    """
    field = config.field_size
    pawns = config.pawns
    total = upper_bound(config.n, config.base, pawns)
    legit_mass = Fraction(0)
    for i in range(pawns + 1):
        for j in range(pawns + 1):
            if (i == 0 or j == 0) and i + j <= field:
                legit_mass += _term(field, pawns, i, j)
    rows = []
    for index, profile in enumerate(enumerate_profiles(config)):
        rng = derive_rng(seed, "profile", index)
        row = sample_profile(profile, samples_per_profile, rng)
        rows.append(row)
        legit_mass += row.contribution
    ratio = float(legit_mass / total)
    return ComplexityEstimate(config, total, legit_mass, ratio, rows, samples_per_profile, seed)


@dataclass
class SweepRow:
    n: int
    base: int
    formula_small: int
    ratio_small: float | None
    formula_large: int
    ratio_large: float | None


def sweep_table(samples_per_profile: int = 1000, seed: int = 0) -> list[SweepRow]:
    """Formula and ratio for every valid (n, base) pair at 1 and 10 pawns.

    With samples_per_profile = 0 only the exact formula values are
    computed, which takes well under a second.
    """
    rows = []
    for n, base in valid_pairs():
        values: list = []
        for pawns in (1, 10):
            if samples_per_profile > 0:
                est = estimate(RLGameConfig(n, base, pawns), samples_per_profile, seed)
                values.extend([est.formula_value, est.ratio])
            else:
                values.extend([upper_bound(n, base, pawns), None])
        rows.append(SweepRow(n, base, *values))
    return rows


@dataclass
class MonotonicityReport:
    n: int
    base: int
    ratios: list[tuple[int, float]]
    violations: list[tuple[int, int]]


def ratio_monotonicity_report(
    n: int, base: int, samples_per_profile: int = 1000, seed: int = 0
) -> MonotonicityReport:
    """Ratio for every pawn budget 1..10; flags adjacent non-decreases."""
    ratios = []
    for pawns in PAWN_RANGE:
        est = estimate(RLGameConfig(n, base, pawns), samples_per_profile, seed)
        ratios.append((pawns, est.ratio))
    violations = [
        (ratios[k][0], ratios[k + 1][0])
        for k in range(len(ratios) - 1)
        if ratios[k + 1][1] >= ratios[k][1]
    ]
    return MonotonicityReport(n, base, ratios, violations)


def sci3(value: int) -> str:
    """Scientific notation with three significant digits, e.g. '3.83e+02'.

    Integer arithmetic throughout, so huge exact counts do not pick up
    float rounding before being truncated to three digits.
    """
    if value < 0:
        return "-" + sci3(-value)
    if value == 0:
        return "0.00e+00"
    digits = len(str(value)) - 1
    if digits >= 2:
        unit = 10 ** (digits - 2)
        mantissa = (value + unit // 2) // unit
    else:
        mantissa = value * 10 ** (2 - digits)
    if mantissa >= 1000:  # rounding carried over, e.g. 999.6 -> 1000
        mantissa //= 10
        digits += 1
    return f"{mantissa / 100:.2f}e{digits:+03d}"
