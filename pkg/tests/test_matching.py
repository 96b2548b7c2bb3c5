import numpy as np
import pytest

from ftlab.matching import (
    MatchingGraph,
    MatchingResult,
    brute_force_mwpm,
    enumerate_perfect_matchings,
    mwpm,
    _mirror_blossom,
)
from ftlab._blossom import max_weight_matching, matched_pairs


def _graph_from_positions(pos, boundary=None):
    pos = np.asarray(pos)
    w = np.abs(pos[:, None] - pos[None, :]).astype(np.int64)
    return MatchingGraph(w, boundary)


def test_empty_graph():
    g = MatchingGraph(np.zeros((0, 0), dtype=np.int64))
    assert mwpm(g).weight == 0
    assert brute_force_mwpm(g).weight == 0


def test_two_nodes_single_pairing():
    g = _graph_from_positions([0, 3])
    res = brute_force_mwpm(g)
    assert res.pairs == [(0, 1)] and res.weight == 3
    res = mwpm(g)
    assert res.pairs == [(0, 1)] and res.weight == 3


def test_four_nodes_on_line_forced_optimum():
    g = _graph_from_positions([0, 1, 10, 11])
    for solver in (brute_force_mwpm, mwpm):
        res = solver(g)
        assert res.weight == 2
        assert sorted(tuple(sorted(p)) for p in res.pairs) == [(0, 1), (2, 3)]


def test_enumeration_count_is_double_factorial():
    assert sum(1 for _ in enumerate_perfect_matchings(8)) == 105  # 7!!
    assert sum(1 for _ in enumerate_perfect_matchings(2)) == 1
    assert sum(1 for _ in enumerate_perfect_matchings(0)) == 1


def test_odd_without_boundary_raises():
    g = _graph_from_positions([0, 1, 2])
    with pytest.raises(ValueError):
        mwpm(g)
    with pytest.raises(ValueError):
        brute_force_mwpm(g)


def test_boundary_beats_distant_pairing():
    # two events far apart, each next to its boundary
    w = np.array([[0, 10], [10, 0]], dtype=np.int64)
    g = MatchingGraph(w, boundary=np.array([1, 2], dtype=np.int64))
    for solver in (brute_force_mwpm, mwpm):
        res = solver(g)
        assert res.weight == 3
        assert sorted(res.to_boundary) == [0, 1]


def _random_instance(rng, k, with_boundary, wmax=16):
    w = rng.integers(0, wmax, size=(k, k)).astype(np.int64)
    w = w + w.T  # symmetric
    np.fill_diagonal(w, 0)
    b = rng.integers(0, wmax, size=k).astype(np.int64) if with_boundary else None
    return MatchingGraph(w, b)


def _random_geometric(rng, k, with_boundary, extent=6):
    pts = rng.integers(0, extent, size=(k, 3))
    w = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2).astype(np.int64)
    b = rng.integers(1, extent, size=k).astype(np.int64) if with_boundary else None
    return MatchingGraph(w, b)


def test_mwpm_matches_brute_force_random_instances():
    rng = np.random.default_rng(2024)
    for trial in range(400):
        k = int(rng.integers(0, 11))
        with_boundary = bool(rng.integers(0, 2))
        if not with_boundary and k % 2:
            k += 1
        g = (
            _random_instance(rng, k, with_boundary)
            if trial % 2
            else _random_geometric(rng, k, with_boundary)
        )
        got = mwpm(g)
        want = brute_force_mwpm(g)
        assert got.weight == want.weight, (trial, g.weights, g.boundary)
        assert got.covers(k)


def test_mirror_blossom_matches_brute_force():
    rng = np.random.default_rng(7)
    for trial in range(200):
        k = int(rng.integers(2, 11))
        with_boundary = bool(rng.integers(0, 2))
        if not with_boundary and k % 2:
            k += 1
        g = _random_instance(rng, k, with_boundary)
        b = g.boundary if g.boundary is not None else np.zeros(k, dtype=np.int64)
        _, wt = _mirror_blossom(g.weights, b, g.boundary is not None)
        want = brute_force_mwpm(g)
        assert int(wt) == want.weight, (trial, g.weights, g.boundary)


def _nx_max_weight(n, eu, ev, ew):
    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from(range(n))
    for u, v, w in zip(eu, ev, ew):
        G.add_edge(int(u), int(v), weight=int(w))
    m = nx.max_weight_matching(G, maxcardinality=False)
    return sum(G[u][v]["weight"] for u, v in m)


def test_blossom_kernel_vs_networkx_random_graphs():
    rng = np.random.default_rng(11)
    for trial in range(150):
        n = int(rng.integers(2, 13))
        density = rng.uniform(0.3, 1.0)
        eu, ev, ew = [], [], []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < density:
                    eu.append(i)
                    ev.append(j)
                    ew.append(int(rng.integers(0, 50)))
        if not eu:
            continue
        eu = np.array(eu, dtype=np.int32)
        ev = np.array(ev, dtype=np.int32)
        ew = np.array(ew, dtype=np.int64)
        mate = max_weight_matching(n, eu, ev, ew)
        got = 0
        for k in range(len(eu)):
            if mate[eu[k]] == 2 * k + 1:
                got += int(ew[k])
        want = _nx_max_weight(n, eu, ev, ew)
        assert got == want, (trial, list(zip(eu, ev, ew)))


def test_blossom_kernel_vs_networkx_larger():
    rng = np.random.default_rng(13)
    for trial in range(8):
        n = 40
        eu, ev, ew = [], [], []
        for i in range(n):
            for j in range(i + 1, n):
                eu.append(i)
                ev.append(j)
                ew.append(int(rng.integers(0, 30)))
        eu = np.array(eu, dtype=np.int32)
        ev = np.array(ev, dtype=np.int32)
        ew = np.array(ew, dtype=np.int64)
        mate = max_weight_matching(n, eu, ev, ew)
        got = sum(int(ew[k]) for k in range(len(eu)) if mate[eu[k]] == 2 * k + 1)
        want = _nx_max_weight(n, eu, ev, ew)
        assert got == want


def test_matched_pairs_wrapper():
    eu = np.array([0, 1, 2], dtype=np.int32)
    ev = np.array([1, 2, 3], dtype=np.int32)
    ew = np.array([5, 1, 5], dtype=np.int64)
    pairs = matched_pairs(4, eu, ev, ew)
    assert sorted(pairs) == [(0, 1), (2, 3)]


def test_larger_components_agree_with_mirror_path():
    """Force component sizes above DP_MAX so the blossom path is exercised."""
    rng = np.random.default_rng(5)
    k = 16
    pts = rng.integers(0, 4, size=(k, 3))  # tight cluster: nothing prunes
    w = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2).astype(np.int64)
    b = np.full(k, 40, dtype=np.int64)  # boundary never attractive
    g = MatchingGraph(w, b)
    res = mwpm(g)
    assert res.covers(k)
    # cross-check against networkx min-weight perfect matching
    import networkx as nx

    G = nx.Graph()
    for i in range(k):
        for j in range(i + 1, k):
            G.add_edge(i, j, weight=int(w[i, j]))
    m = nx.min_weight_matching(G)
    want = sum(int(w[u, v]) for u, v in m)
    assert res.weight == want
