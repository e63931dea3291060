import csv

import numpy as np
import pytest

from boardlab import analysis

import oracles


def toy_table(label, ranks, agents=None):
    n = len(ranks)
    agents = agents or tuple(f"a{k}" for k in range(n))
    eps = tuple(0.6 + 0.1 * (k % 4) for k in range(n))
    gam = tuple(0.6 + 0.1 * ((k // 4) % 4) for k in range(n))
    lam = tuple(0.6 + 0.1 * ((k // 16) % 4) for k in range(n))
    return analysis.SessionRanking(label, tuple(agents), eps, gam, lam, tuple(ranks))


def test_hand_correlation_pair():
    x = [1, 2, 3, 4, 5]
    y = [1, 3, 2, 5, 4]
    assert analysis.spearman(x, y) == 0.8
    assert analysis.kendall(x, y) == 0.6
    assert analysis.spearman(x, x) == 1.0
    assert analysis.kendall(x, list(reversed(x))) == -1.0


def test_correlations_match_pair_counting_with_ties():
    rng = np.random.default_rng(42)
    checked = 0
    while checked < 50:
        n = int(rng.integers(4, 15))
        x = rng.integers(0, 5, size=n).astype(float)
        y = rng.integers(0, 5, size=n).astype(float)
        if np.all(x == x[0]) or np.all(y == y[0]):
            continue
        assert abs(analysis.spearman(x, y) - oracles.naive_spearman(x, y)) < 1e-12
        assert abs(analysis.kendall(x, y) - oracles.naive_kendall(x, y)) < 1e-12
        checked += 1


def test_correlation_input_validation():
    with pytest.raises(ValueError):
        analysis.spearman([1, 2], [1, 2, 3])
    with pytest.raises(ValueError):
        analysis.kendall([1], [2])
    with pytest.raises(ValueError):
        analysis.spearman([3, 3, 3], [1, 2, 3])


def test_rankdata_averages_ties():
    assert analysis.rankdata([10, 20, 20, 30]).tolist() == [1.0, 2.5, 2.5, 4.0]
    assert analysis.rankdata([5, 1, 3]).tolist() == [3.0, 1.0, 2.0]


def test_session_ranking_validation():
    with pytest.raises(ValueError):
        toy_table("s", [1, 2, 2, 4])  # not a permutation
    with pytest.raises(ValueError):
        toy_table("s", [1, 2], agents=("a", "a"))
    with pytest.raises(ValueError):
        analysis.SessionRanking("s", ("a",), (0.6,), (0.6,), (0.6,), (1, 2))
    rows = [("b", 0.6, 0.7, 0.8, 2), ("a", 0.9, 0.7, 0.8, 1)]
    table = analysis.SessionRanking.from_rows("s", rows)
    assert table.agents == ("a", "b") and table.ranks == (1, 2)


def test_session_ranking_from_csv(tmp_path):
    session_dir = tmp_path / "session-c4-4x4"
    session_dir.mkdir()
    path = session_dir / "ranking.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["agent", "epsilon", "gamma", "lambda", "rank"])
        writer.writerow(["a1", "0.6", "0.7", "0.8", "2"])
        writer.writerow(["a0", "0.9", "0.7", "0.8", "1"])
    table = analysis.SessionRanking.from_csv(path)
    assert table.label == "session-c4-4x4"
    assert table.agents == ("a0", "a1") and table.ranks == (1, 2)
    named = analysis.SessionRanking.from_csv(path, label="other")
    assert named.label == "other"


def test_align_rankings_rejects_mismatched_agents():
    a = toy_table("a", [1, 2, 3])
    b = toy_table("b", [3, 1, 2], agents=("x0", "x1", "x2"))
    with pytest.raises(ValueError):
        analysis.align_rankings([a, b])
    agents, matrix = analysis.align_rankings([a, toy_table("c", [3, 1, 2])])
    assert agents == ("a0", "a1", "a2")
    assert matrix.shape == (3, 2) and matrix[:, 1].tolist() == [3.0, 1.0, 2.0]


def test_correlation_table_and_csv(tmp_path):
    tables = [
        toy_table("s1", [1, 2, 3, 4]),
        toy_table("s2", [1, 2, 4, 3]),
        toy_table("s3", [4, 3, 2, 1]),
    ]
    rows = analysis.correlation_table(tables)
    assert [(r.session_a, r.session_b) for r in rows] == [
        ("s1", "s2"), ("s1", "s3"), ("s2", "s3"),
    ]
    assert rows[1].spearman == -1.0 and rows[1].kendall == -1.0
    path = tmp_path / "correlations.csv"
    analysis.write_correlation_csv(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "session_a,session_b,spearman,kendall"
    parsed = list(csv.DictReader(lines))
    assert float(parsed[1]["spearman"]) == -1.0


def test_heatmap_is_symmetric_with_unit_diagonal():
    tables = [toy_table("s1", [1, 2, 3, 4]), toy_table("s2", [2, 1, 3, 4])]
    text = analysis.render_heatmap(tables)
    lines = text.splitlines()
    assert len(lines) == 3
    cells_1 = lines[1].split()
    cells_2 = lines[2].split()
    assert cells_1[1] == cells_2[2] == "+1.00/+1.00"
    assert cells_1[2] == cells_2[1]  # off-diagonal mirror


def test_kmeans_recovers_separated_blobs():
    rng = np.random.default_rng(0)
    blobs = [(0.0, 0.0), (10.0, 10.0), (-10.0, 8.0)]
    points = np.vstack([rng.normal(loc=c, scale=0.3, size=(20, 2)) for c in blobs])
    result = analysis.kmeans(points, 3, reruns=10, seed=1)
    groups = [set(np.flatnonzero(result.labels == c)) for c in range(3)]
    expected = [set(range(0, 20)), set(range(20, 40)), set(range(40, 60))]
    assert sorted(map(sorted, groups)) == sorted(map(sorted, expected))
    assert result.inertia < 60 * 0.3**2 * 2 * 3


def test_kmeans_trivial_and_invalid_cases():
    points = np.array([[0.0], [1.0], [2.0], [5.0]])
    exact = analysis.kmeans(points, 4, reruns=3, seed=0)
    assert exact.inertia == 0.0
    assert sorted(exact.labels.tolist()) == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        analysis.kmeans(np.array([[1.0], [1.0], [2.0]]), 3)
    with pytest.raises(ValueError):
        analysis.kmeans(points, 0)
    with pytest.raises(ValueError):
        analysis.kmeans(points, 2, reruns=0)
    one_dim = analysis.kmeans(np.array([0.0, 0.1, 9.0, 9.1]), 2, reruns=5, seed=0)
    assert one_dim.labels[0] == one_dim.labels[1] != one_dim.labels[2]


def test_kmeans_is_seed_reproducible():
    rng = np.random.default_rng(3)
    points = rng.normal(size=(40, 3))
    a = analysis.kmeans(points, 4, reruns=20, seed=9)
    b = analysis.kmeans(points, 4, reruns=20, seed=9)
    assert np.array_equal(a.labels, b.labels)
    assert np.array_equal(a.centers, b.centers)
    assert a.rerun == b.rerun and a.inertia == b.inertia


class FakeRng:
    """Forces kmeans++ to duplicate its first two centers."""

    def integers(self, n):
        return 0

    def choice(self, n, p=None):
        return 0

    def permutation(self, n):
        return np.arange(n)


def test_lloyd_revives_empty_clusters():
    points = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])
    labels, centers, inertia, _ = analysis._lloyd(points, 2, FakeRng(), "kmeans++", 50)
    assert set(labels.tolist()) == {0, 1}
    assert inertia == 1.0  # two tight pairs, one unit gap in each
    with pytest.raises(ValueError):
        analysis._init_centers(points, 2, FakeRng(), "bogus")


def test_cluster_ranks_orders_tiers_by_mean_rank():
    matrix = np.array([7.0, 8.0, 9.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    report = analysis.cluster_ranks(matrix, 3, reruns=10, seed=0)
    assert report.labels == (3, 3, 3, 1, 1, 1, 2, 2, 2)
    assert report.sizes == (3, 3, 3)
    assert report.k == 3


def test_summarize_clusters_and_styles():
    table = analysis.SessionRanking(
        "s",
        ("a0", "a1", "a2", "a3"),
        (0.6, 0.6, 0.9, 0.9),
        (0.7, 0.7, 0.9, 0.9),
        (0.8, 0.8, 0.6, 0.6),
        (1, 2, 3, 4),
    )
    profiles = analysis.summarize_clusters(table, [1, 1, 2, 2])
    top, bottom = profiles
    assert top.cluster == 1 and top.size == 2 and top.mean_rank == 1.5
    assert top.mean_epsilon == 0.6 and top.epsilon_style == "explorer"
    assert bottom.mean_epsilon == 0.9 and bottom.epsilon_style == "exploiter"
    assert bottom.gamma_style == "conservative" and bottom.lambda_style == "slow-smooth"
    with pytest.raises(ValueError):
        analysis.summarize_clusters(table, [1, 1, 3, 3])  # cluster 2 empty
    with pytest.raises(ValueError):
        analysis.summarize_clusters(table, [1, 1, 2])


def test_describe_mean_band_edges():
    assert analysis.describe_mean("epsilon", 0.74) == "explorer"
    assert analysis.describe_mean("epsilon", 0.75) == "balanced"
    assert analysis.describe_mean("epsilon", 0.85) == "exploiter"
    assert analysis.describe_mean("gamma", 0.9) == "conservative"
    assert analysis.describe_mean("lambda", 0.9) == "fast-unstable"


def test_shift_report_percentages():
    table_low = analysis.SessionRanking(
        "low", ("a", "b"), (0.6, 0.8), (0.7, 0.7), (0.8, 0.8), (1, 2)
    )
    table_high = analysis.SessionRanking(
        "high", ("a", "b"), (0.75, 0.8), (0.7, 0.7), (0.8, 0.8), (1, 2)
    )
    low = analysis.summarize_clusters(table_low, [1, 2])
    high = analysis.summarize_clusters(table_high, [1, 2])
    rows = analysis.shift_report(low, high, "low", "high")
    assert len(rows) == 6  # two tiers x three characteristics
    eps_row = rows[0]
    assert eps_row.cluster == 1 and eps_row.characteristic == "epsilon"
    assert abs(eps_row.shift_pct - 25.0) < 1e-9
    assert rows[1].shift_pct == 0.0
    with pytest.raises(ValueError):
        analysis.shift_report(low, high[:1], "low", "high")


def test_complete_linkage_hand_case():
    merges = analysis.complete_linkage(np.array([0.0, 1.0, 10.0, 11.0]))
    assert merges == [(0, 1, 1.0, 2), (2, 3, 1.0, 2), (4, 5, 11.0, 4)]
    assert analysis.linkage_cut(merges, 4, 2) == [1, 1, 2, 2]
    assert analysis.linkage_cut(merges, 4, 4) == [1, 2, 3, 4]
    assert analysis.linkage_cut(merges, 4, 1) == [1, 1, 1, 1]
    with pytest.raises(ValueError):
        analysis.linkage_cut(merges, 4, 5)
    with pytest.raises(ValueError):
        analysis.complete_linkage(np.array([1.0]))


def test_complete_linkage_heights_are_monotone():
    rng = np.random.default_rng(5)
    points = rng.normal(size=(12, 2))
    merges = analysis.complete_linkage(points)
    heights = [h for _, _, h, _ in merges]
    assert heights == sorted(heights)
    assert merges[-1][3] == 12


def test_analyze_game_end_to_end(tmp_path):
    rng = np.random.default_rng(8)
    base = list(range(1, 9))
    tables = []
    for label in ("small", "medium", "large"):
        ranks = base[:]
        rng.shuffle(ranks)
        tables.append(toy_table(label, ranks))
    result = analysis.analyze_game(tables, k=3, reruns=20, seed=4, out_dir=tmp_path)
    assert result.agents == tables[0].agents
    assert set(result.session_labels) == {"small", "medium", "large"}
    assert all(shift.low_session == "small" for shift in result.shifts)
    assert all(shift.high_session == "large" for shift in result.shifts)
    assert len(result.linkage) == 7

    names = {p.name for p in tmp_path.iterdir()}
    assert names == {"clusters.csv", "cluster_summary.csv", "shifts.csv", "linkage.csv"}
    with open(tmp_path / "clusters.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 8
    assert set(rows[0]) == {
        "agent", "epsilon", "gamma", "lambda",
        "rank_small", "rank_medium", "rank_large", "cluster",
    }
    assert all(row["cluster"] in {"C1", "C2", "C3"} for row in rows)
    with open(tmp_path / "shifts.csv", newline="") as fh:
        shift_rows = list(csv.DictReader(fh))
    assert len(shift_rows) == 9  # three tiers x three characteristics
    assert {row["cluster"] for row in shift_rows} == {"C1", "C2", "C3"}


def test_analyze_game_reproducibility():
    tables = [
        toy_table("x", [3, 1, 4, 2, 8, 7, 5, 6]),
        toy_table("y", [1, 2, 3, 4, 5, 6, 7, 8]),
    ]
    a = analysis.analyze_game(tables, k=2, reruns=10, seed=6)
    b = analysis.analyze_game(tables, k=2, reruns=10, seed=6)
    assert a.report.labels == b.report.labels
    assert a.session_labels == b.session_labels
    assert a.shifts == b.shifts
