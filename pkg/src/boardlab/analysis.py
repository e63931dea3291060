"""Rank agreement across sessions and clustering of agent behaviour.

Inputs are the per-session ranking tables a tournament writes. The
questions answered here: do different board sizes rank the same agents
the same way (Spearman rho, Kendall tau-b over all session pairs), and
do agents fall into performance tiers whose characteristic mix shifts
as the game gets bigger (k-means over ranks, tier summaries, relative
shift of mean characteristics between the smallest and largest board).

Clusters are always relabeled C1..Ck by ascending mean rank, so C1 is
the strongest tier regardless of how a particular k-means run numbered
its centers.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .seeds import derive_rng, derive_seed

CHARACTERISTICS = ("epsilon", "gamma", "lambda")

# Mean-value bands for describing a tier's characteristic mix. Grid
# values live in [0.6, 0.9]; the cuts split that range into three.
BAND_CUTS = (0.75, 0.85)
BAND_STYLES = {
    "epsilon": ("explorer", "balanced", "exploiter"),
    "gamma": ("risk-taking", "moderate", "conservative"),
    "lambda": ("slow-smooth", "tempered", "fast-unstable"),
}


def describe_mean(characteristic: str, value: float) -> str:
    low, high = BAND_CUTS
    styles = BAND_STYLES[characteristic]
    if value < low:
        return styles[0]
    if value < high:
        return styles[1]
    return styles[2]


@dataclass(frozen=True)
class SessionRanking:
    """One session's final standing, row-aligned by sorted agent id."""

    label: str
    agents: tuple[str, ...]
    epsilon: tuple[float, ...]
    gamma: tuple[float, ...]
    lam: tuple[float, ...]
    ranks: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.agents)
        if not n:
            raise ValueError("empty ranking")
        lengths = {len(self.epsilon), len(self.gamma), len(self.lam), len(self.ranks)}
        if lengths != {n}:
            raise ValueError("column lengths disagree")
        if len(set(self.agents)) != n:
            raise ValueError("duplicate agent ids")
        if sorted(self.ranks) != list(range(1, n + 1)):
            raise ValueError(f"ranks are not a permutation of 1..{n}")

    @classmethod
    def from_rows(cls, label: str, rows) -> "SessionRanking":
        rows = sorted(rows, key=lambda r: r[0])
        agents, eps, gam, lam, ranks = zip(*rows)
        return cls(label, tuple(agents), tuple(eps), tuple(gam), tuple(lam), tuple(ranks))

    @classmethod
    def from_csv(cls, path, label: str | None = None) -> "SessionRanking":
        path = Path(path)
        if label is None:
            label = path.parent.name
        rows = []
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                rows.append(
                    (
                        row["agent"],
                        float(row["epsilon"]),
                        float(row["gamma"]),
                        float(row["lambda"]),
                        int(row["rank"]),
                    )
                )
        return cls.from_rows(label, rows)


def align_rankings(tables: list[SessionRanking]) -> tuple[tuple[str, ...], np.ndarray]:
    """Agents (sorted) and an agents x sessions matrix of ranks."""
    if not tables:
        raise ValueError("no ranking tables")
    agents = tables[0].agents
    for table in tables[1:]:
        if table.agents != agents:
            raise ValueError(f"agent sets differ between {tables[0].label} and {table.label}")
    matrix = np.array([table.ranks for table in tables], dtype=float).T
    return agents, matrix


def rankdata(values) -> np.ndarray:
    """Ranks 1..n with ties sharing their average rank."""
    arr = np.asarray(values, dtype=float)
    order = np.argsort(arr, kind="stable")
    ranks = np.empty(len(arr))
    i = 0
    while i < len(arr):
        j = i
        while j + 1 < len(arr) and arr[order[j + 1]] == arr[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def _check_pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-D sequences of equal length")
    if len(x) < 2:
        raise ValueError("need at least two observations")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise ValueError("correlation is undefined for a constant sequence")
    return x, y


def spearman(x, y) -> float:
    """Spearman rho; the classic d^2 form when both sides are tie-free."""
    x, y = _check_pair(x, y)
    n = len(x)
    rx, ry = rankdata(x), rankdata(y)
    if len(np.unique(x)) == n and len(np.unique(y)) == n:
        d = rx - ry
        return 1.0 - 6.0 * float(d @ d) / (n * (n * n - 1))
    rx -= rx.mean()
    ry -= ry.mean()
    return float((rx @ ry) / math.sqrt(float(rx @ rx) * float(ry @ ry)))


def kendall(x, y) -> float:
    """Kendall tau-b: tie-adjusted concordant minus discordant pairs."""
    x, y = _check_pair(x, y)
    n = len(x)
    iu = np.triu_indices(n, 1)
    dx = np.sign(x[:, None] - x[None, :])[iu]
    dy = np.sign(y[:, None] - y[None, :])[iu]
    pairs = len(dx)
    ties_x = int(np.sum(dx == 0))
    ties_y = int(np.sum(dy == 0))
    product = dx * dy
    concordant = int(np.sum(product > 0))
    discordant = int(np.sum(product < 0))
    return (concordant - discordant) / math.sqrt((pairs - ties_x) * (pairs - ties_y))


@dataclass(frozen=True)
class CorrelationRow:
    session_a: str
    session_b: str
    spearman: float
    kendall: float


def correlation_table(tables: list[SessionRanking]) -> list[CorrelationRow]:
    """Both coefficients for every unordered session pair."""
    align_rankings(tables)
    rows = []
    for i in range(len(tables)):
        for j in range(i + 1, len(tables)):
            a, b = tables[i], tables[j]
            rows.append(
                CorrelationRow(a.label, b.label, spearman(a.ranks, b.ranks), kendall(a.ranks, b.ranks))
            )
    return rows


def write_correlation_csv(rows: list[CorrelationRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["session_a", "session_b", "spearman", "kendall"])
        for row in rows:
            writer.writerow([row.session_a, row.session_b, repr(row.spearman), repr(row.kendall)])


def render_heatmap(tables: list[SessionRanking]) -> str:
    """Text matrix of rho/tau per session pair, diagonal included."""
    labels = [t.label for t in tables]
    cells = {}
    for row in correlation_table(tables):
        text = f"{row.spearman:+.2f}/{row.kendall:+.2f}"
        cells[(row.session_a, row.session_b)] = text
        cells[(row.session_b, row.session_a)] = text
    for label in labels:
        cells[(label, label)] = "+1.00/+1.00"
    width = max(len(text) for text in cells.values())
    width = max(width, max(len(label) for label in labels))
    lines = [" " * width + " " + " ".join(label.rjust(width) for label in labels)]
    for a in labels:
        lines.append(a.rjust(width) + " " + " ".join(cells[(a, b)].rjust(width) for b in labels))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class KMeansResult:
    centers: np.ndarray
    labels: np.ndarray
    inertia: float
    rerun: int
    iterations: int


def _init_centers(points: np.ndarray, k: int, rng, init: str) -> np.ndarray:
    n = len(points)
    if init == "random":
        chosen: list[int] = []
        seen = set()
        for idx in rng.permutation(n):
            key = points[idx].tobytes()
            if key not in seen:
                seen.add(key)
                chosen.append(int(idx))
                if len(chosen) == k:
                    break
        return points[chosen].copy()
    if init != "kmeans++":
        raise ValueError(f"unknown init {init!r}")
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    d2 = ((points - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            centers[c] = points[rng.integers(n)]
        else:
            centers[c] = points[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, ((points - centers[c]) ** 2).sum(axis=1))
    return centers


def _lloyd(points: np.ndarray, k: int, rng, init: str, max_iter: int):
    centers = _init_centers(points, k, rng, init)
    labels = None
    prev_inertia = math.inf
    rows = np.arange(len(points))
    for iteration in range(1, max_iter + 1):
        d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = d2.argmin(axis=1)
        mins = d2[rows, new_labels]
        for c in range(k):
            if not np.any(new_labels == c):
                # revive an empty cluster at the worst-fit point
                centers[c] = points[int(np.argmax(mins))]
                d2[:, c] = ((points - centers[c]) ** 2).sum(axis=1)
                new_labels = d2.argmin(axis=1)
                mins = d2[rows, new_labels]
        inertia = float(mins.sum())
        if inertia > prev_inertia + 1e-9 * (1.0 + prev_inertia):
            raise AssertionError("k-means objective increased")
        if labels is not None and np.array_equal(new_labels, labels):
            return labels, centers, inertia, iteration
        labels = new_labels
        prev_inertia = inertia
        for c in range(k):
            centers[c] = points[labels == c].mean(axis=0)
    return labels, centers, inertia, max_iter


def kmeans(
    points, k: int, *, reruns: int = 100, max_iter: int = 300, seed: int = 0, init: str = "kmeans++"
) -> KMeansResult:
    """Lloyd's algorithm, restarted; the lowest-inertia run wins.

    Ties keep the earliest restart, so results are reproducible from
    the seed alone.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if k < 1:
        raise ValueError("k must be positive")
    if len(np.unique(points, axis=0)) < k:
        raise ValueError(f"need at least {k} distinct points for k={k}")
    if reruns < 1 or max_iter < 1:
        raise ValueError("reruns and max_iter must be positive")
    best = None
    for rerun in range(reruns):
        rng = derive_rng(seed, "rerun", rerun)
        labels, centers, inertia, iterations = _lloyd(points, k, rng, init, max_iter)
        if best is None or inertia < best.inertia:
            best = KMeansResult(centers, labels, inertia, rerun, iterations)
    return best


@dataclass(frozen=True)
class ClusterReport:
    """k-means outcome with clusters renumbered 1..k by mean rank."""

    labels: tuple[int, ...]
    centers: np.ndarray
    sizes: tuple[int, ...]
    inertia: float
    rerun: int

    @property
    def k(self) -> int:
        return len(self.sizes)


def cluster_ranks(matrix, k: int = 3, *, reruns: int = 100, max_iter: int = 300, seed: int = 0) -> ClusterReport:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim == 1:
        matrix = matrix[:, None]
    result = kmeans(matrix, k, reruns=reruns, max_iter=max_iter, seed=seed)
    means = np.array([matrix[result.labels == c].mean() for c in range(k)])
    order = np.argsort(means, kind="stable")
    remap = {int(old): new + 1 for new, old in enumerate(order)}
    labels = tuple(remap[int(c)] for c in result.labels)
    sizes = tuple(labels.count(c) for c in range(1, k + 1))
    return ClusterReport(labels, result.centers[order], sizes, result.inertia, result.rerun)


@dataclass(frozen=True)
class ClusterProfile:
    cluster: int
    size: int
    mean_rank: float
    mean_epsilon: float
    mean_gamma: float
    mean_lambda: float
    epsilon_style: str
    gamma_style: str
    lambda_style: str

    def mean_of(self, characteristic: str) -> float:
        return getattr(self, f"mean_{characteristic}")


def summarize_clusters(table: SessionRanking, labels) -> list[ClusterProfile]:
    """Per-tier size, mean rank, and mean characteristic mix."""
    labels = list(labels)
    if len(labels) != len(table.agents):
        raise ValueError("label count does not match the table")
    profiles = []
    for cluster in range(1, max(labels) + 1):
        idx = [i for i, lab in enumerate(labels) if lab == cluster]
        if not idx:
            raise ValueError(f"cluster {cluster} is empty")

        def mean(column) -> float:
            return sum(column[i] for i in idx) / len(idx)

        eps, gam, lam = mean(table.epsilon), mean(table.gamma), mean(table.lam)
        profiles.append(
            ClusterProfile(
                cluster=cluster,
                size=len(idx),
                mean_rank=mean(table.ranks),
                mean_epsilon=eps,
                mean_gamma=gam,
                mean_lambda=lam,
                epsilon_style=describe_mean("epsilon", eps),
                gamma_style=describe_mean("gamma", gam),
                lambda_style=describe_mean("lambda", lam),
            )
        )
    return profiles


@dataclass(frozen=True)
class ShiftRow:
    cluster: int
    characteristic: str
    low_session: str
    high_session: str
    low_mean: float
    high_mean: float
    shift_pct: float


def shift_report(
    low: list[ClusterProfile], high: list[ClusterProfile], low_label: str, high_label: str
) -> list[ShiftRow]:
    """Relative drift of each tier's mean characteristics, low to high."""
    if len(low) != len(high):
        raise ValueError("tier counts differ")
    rows = []
    for profile_low, profile_high in zip(low, high):
        for characteristic in CHARACTERISTICS:
            a = profile_low.mean_of(characteristic)
            b = profile_high.mean_of(characteristic)
            rows.append(
                ShiftRow(
                    cluster=profile_low.cluster,
                    characteristic=characteristic,
                    low_session=low_label,
                    high_session=high_label,
                    low_mean=a,
                    high_mean=b,
                    shift_pct=(b - a) / a * 100.0,
                )
            )
    return rows


def complete_linkage(points) -> list[tuple[int, int, float, int]]:
    """Agglomerative merges under the farthest-pair cluster distance.

    Returns scipy-style rows (left, right, height, size): clusters 0..n-1
    are the points, merge i creates cluster n+i. Ties pick the smallest
    id pair, so the table is deterministic.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    n = len(points)
    if n < 2:
        raise ValueError("need at least two points")
    gaps = np.sqrt(((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=2))
    dist = {(i, j): float(gaps[i, j]) for i in range(n) for j in range(i + 1, n)}
    sizes = {i: 1 for i in range(n)}
    merges = []
    next_id = n
    while dist:
        (a, b), height = min(dist.items(), key=lambda kv: (kv[1], kv[0]))
        merged = {}
        for (x, y), d in dist.items():
            if a in (x, y) or b in (x, y):
                other = y if x in (a, b) else x
                if other in (a, b):
                    continue
                key = (min(other, next_id), max(other, next_id))
                merged[key] = max(merged.get(key, 0.0), d)
            else:
                merged[(x, y)] = d
        dist = merged
        sizes[next_id] = sizes[a] + sizes[b]
        merges.append((a, b, height, sizes[next_id]))
        next_id += 1
    return merges


def linkage_cut(merges: list[tuple[int, int, float, int]], n: int, k: int) -> list[int]:
    """Partition into k clusters by stopping the merge sequence early.

    Labels are 1-based, numbered by first appearance over the points.
    """
    if not 1 <= k <= n:
        raise ValueError("k out of range")
    parent = list(range(n + len(merges)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = n
    for step, (a, b, _height, _size) in enumerate(merges):
        if count == k:
            break
        parent[find(a)] = n + step
        parent[find(b)] = n + step
        count -= 1
    numbering: dict[int, int] = {}
    labels = []
    for i in range(n):
        root = find(i)
        numbering.setdefault(root, len(numbering) + 1)
        labels.append(numbering[root])
    return labels


@dataclass
class GameAnalysis:
    """Everything the per-game pipeline derives from three sessions."""

    tables: list[SessionRanking]
    agents: tuple[str, ...]
    report: ClusterReport
    session_labels: dict[str, tuple[int, ...]]
    summaries: dict[str, list[ClusterProfile]]
    shifts: list[ShiftRow]
    linkage: list[tuple[int, int, float, int]]


def analyze_game(
    tables: list[SessionRanking],
    *,
    k: int = 3,
    reruns: int = 100,
    max_iter: int = 300,
    seed: int = 0,
    out_dir=None,
) -> GameAnalysis:
    """Cluster one game's sessions; tables must be ordered by rising
    state-space complexity (the shift report compares first to last).
    """
    agents, matrix = align_rankings(tables)
    report = cluster_ranks(
        matrix, k, reruns=reruns, max_iter=max_iter, seed=derive_seed(seed, "joint")
    )
    session_labels = {}
    summaries = {}
    for table in tables:
        tier_labels = cluster_ranks(
            np.array(table.ranks, dtype=float),
            k,
            reruns=reruns,
            max_iter=max_iter,
            seed=derive_seed(seed, "session", table.label),
        ).labels
        session_labels[table.label] = tier_labels
        summaries[table.label] = summarize_clusters(table, tier_labels)
    low, high = tables[0], tables[-1]
    shifts = shift_report(summaries[low.label], summaries[high.label], low.label, high.label)
    linkage = complete_linkage(matrix)
    result = GameAnalysis(tables, agents, report, session_labels, summaries, shifts, linkage)
    if out_dir is not None:
        write_game_analysis(result, Path(out_dir))
    return result


def write_game_analysis(result: GameAnalysis, out_dir: Path) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    first = result.tables[0]
    with open(out_dir / "clusters.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["agent", "epsilon", "gamma", "lambda"]
        header += [f"rank_{table.label}" for table in result.tables]
        header.append("cluster")
        writer.writerow(header)
        for i, agent in enumerate(result.agents):
            row = [agent, f"{first.epsilon[i]:g}", f"{first.gamma[i]:g}", f"{first.lam[i]:g}"]
            row += [table.ranks[i] for table in result.tables]
            row.append(f"C{result.report.labels[i]}")
            writer.writerow(row)
    with open(out_dir / "cluster_summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["session", "cluster", "size", "mean_rank", "mean_epsilon", "mean_gamma",
             "mean_lambda", "epsilon_style", "gamma_style", "lambda_style"]
        )
        for table in result.tables:
            for p in result.summaries[table.label]:
                writer.writerow(
                    [table.label, f"C{p.cluster}", p.size, repr(p.mean_rank), repr(p.mean_epsilon),
                     repr(p.mean_gamma), repr(p.mean_lambda), p.epsilon_style, p.gamma_style,
                     p.lambda_style]
                )
    with open(out_dir / "shifts.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["cluster", "characteristic", "low_session", "high_session", "low_mean",
             "high_mean", "shift_pct"]
        )
        for row in result.shifts:
            writer.writerow(
                [f"C{row.cluster}", row.characteristic, row.low_session, row.high_session,
                 repr(row.low_mean), repr(row.high_mean), repr(row.shift_pct)]
            )
    with open(out_dir / "linkage.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "left", "right", "height", "size"])
        for step, (left, right, height, size) in enumerate(result.linkage):
            writer.writerow([step, left, right, repr(height), size])
