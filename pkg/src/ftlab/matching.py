"""Minimum-weight perfect matching of detection events.

The production decoder (`mwpm`) is exact: it prunes edges that can never
beat matching both endpoints to the boundary (a weight-preserving reduction),
splits the remainder into connected components, and solves each component
either by bitmask dynamic programming (small) or by the blossom kernel on a
mirrored graph (large). `brute_force_mwpm` is the independent enumeration
oracle the production path must agree with.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from ._blossom import max_weight_matching

DP_MAX = 12
_BIG = np.int64(1) << 40


@dataclass
class MatchingGraph:
    """Complete graph over detection events, plus optional boundary costs.

    weights[i, j] is the integer spacetime distance between events i and j;
    boundary[i] is the cost of matching event i to its own virtual boundary
    node (None on a closed topology). Boundary-boundary edges are free.
    """

    weights: np.ndarray
    boundary: np.ndarray | None = None
    events: list = field(default_factory=list)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.int64)
        if self.weights.ndim != 2 or self.weights.shape[0] != self.weights.shape[1]:
            raise ValueError("weights must be a square matrix")
        if (self.weights < 0).any():
            raise ValueError("weights must be non-negative")
        if self.boundary is not None:
            self.boundary = np.asarray(self.boundary, dtype=np.int64)
            if self.boundary.shape != (self.weights.shape[0],):
                raise ValueError("boundary cost vector length mismatch")

    @property
    def n_events(self) -> int:
        return self.weights.shape[0]


@dataclass
class MatchingResult:
    pairs: list[tuple[int, int]]
    to_boundary: list[int]
    weight: int

    def covers(self, n_events: int) -> bool:
        seen = set(self.to_boundary)
        for a, b in self.pairs:
            seen.update((a, b))
        return seen == set(range(n_events))


def enumerate_perfect_matchings(k: int):
    """Yield every perfect matching of {0..k-1} as a list of pairs."""
    if k % 2:
        raise ValueError("odd vertex count has no perfect matching")
    items = list(range(k))

    def rec(rest):
        if not rest:
            yield []
            return
        a = rest[0]
        for idx in range(1, len(rest)):
            b = rest[idx]
            tail = rest[1:idx] + rest[idx + 1 :]
            for sub in rec(tail):
                yield [(a, b)] + sub

    yield from rec(items)


def brute_force_mwpm(graph: MatchingGraph) -> MatchingResult:
    """Exhaustive minimum-weight matching; oracle for <= 12 events."""
    k = graph.n_events
    if k > 12:
        raise ValueError(f"brute force capped at 12 events, got {k}")
    if graph.boundary is None and k % 2:
        raise ValueError("odd event count without boundary")
    w = graph.weights
    b = graph.boundary
    best = {"weight": None, "pairs": None, "bnd": None}

    def rec(unmatched, acc, pairs, bnd):
        if best["weight"] is not None and acc >= best["weight"]:
            return
        if not unmatched:
            best["weight"] = acc
            best["pairs"] = list(pairs)
            best["bnd"] = list(bnd)
            return
        i = unmatched[0]
        rest = unmatched[1:]
        for idx in range(len(rest)):
            j = rest[idx]
            rec(rest[:idx] + rest[idx + 1 :], acc + int(w[i, j]), pairs + [(i, j)], bnd)
        if b is not None:
            rec(rest, acc + int(b[i]), pairs, bnd + [i])

    rec(list(range(k)), 0, [], [])
    return MatchingResult(best["pairs"], best["bnd"], int(best["weight"]))


@njit(cache=True)
def _dp_component(w, b, has_boundary):
    """Exact min-weight matching of one small component via subset DP.

    Returns (choice, weight): choice[mask] holds the partner chosen for the
    lowest set bit of mask (or -1 for its boundary node).
    """
    m = w.shape[0]
    full = 1 << m
    dp = np.full(full, _BIG, dtype=np.int64)
    choice = np.full(full, -2, dtype=np.int8)
    dp[0] = 0
    for mask in range(1, full):
        lo = 0
        while not (mask >> lo) & 1:
            lo += 1
        best = _BIG
        arg = np.int8(-2)
        if has_boundary:
            v = dp[mask ^ (1 << lo)] + b[lo]
            if v < best:
                best = v
                arg = -1
        for j in range(lo + 1, m):
            if (mask >> j) & 1:
                v = dp[mask ^ (1 << lo) ^ (1 << j)] + w[lo, j]
                if v < best:
                    best = v
                    arg = j
        dp[mask] = best
        choice[mask] = arg
    return choice, dp[full - 1]


@njit(cache=True)
def _mirror_blossom(w, b, has_boundary):
    """Exact min-weight matching of one component via the blossom kernel.

    Real nodes 0..m-1; mirror nodes m..2m-1. Edge (i, j) duplicates between
    mirrors at weight 0 is not needed for weight: we use the standard
    construction (real-real at w, real-mirror at b_i, mirror-mirror free) and
    reflect weights so maximum-weight maximum-cardinality equals minimum
    weight perfect matching. Returns (mate_real, weight) where mate_real[i]
    is the matched real partner or -1 for boundary.
    """
    m = w.shape[0]
    n = 2 * m if has_boundary else m
    cap = m * (m - 1) + (2 * m if has_boundary else 0)
    eu = np.empty(cap, dtype=np.int32)
    ev = np.empty(cap, dtype=np.int32)
    ew0 = np.empty(cap, dtype=np.int64)
    ne = 0
    maxw = np.int64(0)
    for i in range(m):
        for j in range(i + 1, m):
            eu[ne] = i
            ev[ne] = j
            ew0[ne] = w[i, j]
            if w[i, j] > maxw:
                maxw = w[i, j]
            ne += 1
    if has_boundary:
        for i in range(m):
            eu[ne] = i
            ev[ne] = m + i
            ew0[ne] = b[i]
            if b[i] > maxw:
                maxw = b[i]
            ne += 1
        for i in range(m):
            for j in range(i + 1, m):
                eu[ne] = m + i
                ev[ne] = m + j
                ew0[ne] = 0
                ne += 1
    # reflect: maximizing K - w forces maximum cardinality first
    big = (np.int64(n) // 2) * maxw + 1
    ew = np.empty(ne, dtype=np.int64)
    for k in range(ne):
        ew[k] = big - ew0[k]
    mate = max_weight_matching(n, eu[:ne], ev[:ne], ew[:ne])
    mate_real = np.full(m, -1, dtype=np.int64)
    weight = np.int64(0)
    for k in range(ne):
        u = eu[k]
        v = ev[k]
        if mate[u] == 2 * k + 1:  # edge k matched
            if u < m and v < m:
                mate_real[u] = v
                mate_real[v] = u
                weight += ew0[k]
            elif u < m:
                mate_real[u] = -1
                weight += ew0[k]
    return mate_real, weight


def mwpm(graph: MatchingGraph) -> MatchingResult:
    """Exact minimum-weight matching with boundary; production decoder."""
    k = graph.n_events
    if k == 0:
        return MatchingResult([], [], 0)
    w = graph.weights
    b = graph.boundary
    if b is None:
        if k % 2:
            raise ValueError("odd event count without boundary")
        allowed = np.ones((k, k), dtype=bool)
    else:
        allowed = w < (b[:, None] + b[None, :])
    np.fill_diagonal(allowed, False)

    # connected components of the pruned graph
    comp = np.full(k, -1, dtype=np.int64)
    ncomp = 0
    for s in range(k):
        if comp[s] >= 0:
            continue
        stack = [s]
        comp[s] = ncomp
        while stack:
            u = stack.pop()
            for v in np.nonzero(allowed[u])[0]:
                if comp[v] < 0:
                    comp[v] = ncomp
                    stack.append(int(v))
        ncomp += 1

    pairs: list[tuple[int, int]] = []
    to_boundary: list[int] = []
    weight = 0
    for c in range(ncomp):
        members = np.nonzero(comp == c)[0]
        m = len(members)
        if m == 1:
            if b is None:
                raise ValueError("isolated event without boundary")
            to_boundary.append(int(members[0]))
            weight += int(b[members[0]])
            continue
        sub_w = np.ascontiguousarray(w[np.ix_(members, members)], dtype=np.int64)
        sub_b = (
            np.ascontiguousarray(b[members], dtype=np.int64)
            if b is not None
            else np.zeros(m, dtype=np.int64)
        )
        if m <= DP_MAX:
            choice, cw = _dp_component(sub_w, sub_b, b is not None)
            weight += int(cw)
            mask = (1 << m) - 1
            while mask:
                lo = (mask & -mask).bit_length() - 1
                ch = int(choice[mask])
                if ch == -1:
                    to_boundary.append(int(members[lo]))
                    mask ^= 1 << lo
                else:
                    pairs.append((int(members[lo]), int(members[ch])))
                    mask ^= (1 << lo) | (1 << ch)
        else:
            mate_real, cw = _mirror_blossom(sub_w, sub_b, b is not None)
            weight += int(cw)
            for i in range(m):
                j = int(mate_real[i])
                if j == -1:
                    to_boundary.append(int(members[i]))
                elif j > i:
                    pairs.append((int(members[i]), int(members[j])))
    return MatchingResult(pairs, to_boundary, weight)
