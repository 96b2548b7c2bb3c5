"""Syndrome records, spacetime detection events, and logical judgment.

Decoding is CSS-split: plaquette (z) records diagnose X error chains,
star (x) records diagnose Z chains; Y faults feed events into both graphs.
Edge weights are unweighted L1 spacetime distances (one lattice step = one
round = weight 1).

The library path (`detection_events` -> `build_matching_graph` -> `mwpm` ->
`correction_from_matching` -> `judge`) is explicit and object-based; the
Monte Carlo engine uses `_decode_batch`, a jitted kernel that computes only
the logical-flip parity per shot. Both produce identical outcomes on the
same events, which the test suite checks shot by shot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .pauli import PauliString, pauli_multiply, commutes
from .lattice import SurfaceLattice
from .codes import StabilizerCode
from .matching import MatchingGraph, MatchingResult, mwpm, _dp_component, _mirror_blossom, DP_MAX


@dataclass
class SyndromeRecord:
    """Measurement bits of one stabilizer species across rounds.

    `bits[r, s]` is the round-r outcome of site s relative to the noiseless
    reference (so an all-zero record means no detections); `final_row` is the
    perfect readout reconstructed from the data qubits after the last round.
    """

    species: str
    bits: np.ndarray  # (rounds, n_sites) uint8
    final_row: np.ndarray  # (n_sites,) uint8

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)
        self.final_row = np.asarray(self.final_row, dtype=np.uint8)
        if self.bits.ndim != 2 or self.final_row.shape != (self.bits.shape[1],):
            raise ValueError("record dimensions inconsistent")

    @property
    def rounds(self) -> int:
        return self.bits.shape[0]


def detection_events(record: SyndromeRecord) -> list[tuple[int, int]]:
    """(site, round) positions where an outcome differs from the previous
    round; round 0 compares against the quiet initialization reference and
    the final perfect row contributes events at round index `rounds`."""
    if record.rounds < 1:
        raise ValueError("need at least one round")
    stacked = np.vstack([record.bits, record.final_row[None, :]])
    diff = stacked.copy()
    diff[1:] ^= stacked[:-1]
    rs, ss = np.nonzero(diff)
    return [(int(s), int(r)) for r, s in zip(rs, ss)]


def build_matching_graph(lat: SurfaceLattice, species: str, events) -> MatchingGraph:
    """Complete event graph with |space|_1 + |time| weights and per-event
    boundary costs (planar only)."""
    sites = lat.species_sites(species)
    k = len(events)
    w = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        si, ti = events[i]
        for j in range(i + 1, k):
            sj, tj = events[j]
            d = lat.site_distance(sites[si], sites[sj]) + abs(ti - tj)
            w[i, j] = w[j, i] = d
    boundary = None
    if lat.topology == "planar":
        boundary = np.array(
            [lat.boundary_distance(species, sites[s]) for s, _ in events], dtype=np.int64
        )
    return MatchingGraph(w, boundary, events=list(events))


def correction_from_matching(
    lat: SurfaceLattice, species: str, events, result: MatchingResult
) -> PauliString:
    """Assemble the Pauli correction along canonical chains of the matching."""
    sites = lat.species_sites(species)
    letter = "X" if species == "z" else "Z"
    x = np.zeros(lat.n_data, dtype=np.uint8)
    z = np.zeros(lat.n_data, dtype=np.uint8)
    bit = x if letter == "X" else z
    for i, j in result.pairs:
        (si, _), (sj, _) = events[i], events[j]
        for q in lat.correction_path(species, sites[si], sites[sj]):
            bit[q] ^= 1
    for i in result.to_boundary:
        si = events[i][0]
        for q in lat.boundary_path(species, sites[si]):
            bit[q] ^= 1
    return PauliString(x, z)


def decode_record(lat: SurfaceLattice, species: str, record: SyndromeRecord):
    """Full library decode: events -> matching -> correction."""
    events = detection_events(record)
    graph = build_matching_graph(lat, species, events)
    result = mwpm(graph)
    corr = correction_from_matching(lat, species, events, result)
    return corr, result, events


def judge(correction: PauliString, residual: PauliString, code: StabilizerCode) -> str:
    """Classify correction*residual: success or the logical class it enacts.

    Raises if the combined operator has a nontrivial syndrome (that means the
    matching did not annihilate all defects, i.e. a decoder bug)."""
    if correction.n != code.n or residual.n != code.n:
        raise ValueError("operator support must match the code's data qubits")
    combined = pauli_multiply(correction, residual)
    if any(s for s in code.syndrome(combined)):
        raise ValueError("correction does not return the state to the code space")
    flips_z = not commutes(combined, code.logical_z)  # X_L-type content
    flips_x = not commutes(combined, code.logical_x)  # Z_L-type content
    if flips_z and flips_x:
        return "logical_Y"
    if flips_z:
        return "logical_X"
    if flips_x:
        return "logical_Z"
    return "success"


def events_debug_dump(lat, species, events, result: MatchingResult) -> dict:
    """JSON-ready record of one shot's events and matching (debug aid)."""
    sites = lat.species_sites(species)
    return {
        "species": species,
        "events": [[int(s), int(t), list(sites[s])] for s, t in events],
        "pairs": [[int(a), int(b)] for a, b in result.pairs],
        "to_boundary": [int(i) for i in result.to_boundary],
        "weight": int(result.weight),
    }


# ---------------------------------------------------------------------------
# jitted batch kernel used by the Monte Carlo engine
# ---------------------------------------------------------------------------


@njit(cache=True)
def _decode_events_kernel(sites, times, dist, bdist, cross, bcross, has_boundary):
    """Exact matching of one shot's events; returns (logical_parity, weight).

    Same prune/decompose strategy as `matching.mwpm`, operating on raw arrays:
    edges at weight >= b_i + b_j can never beat two boundary matches, so the
    pruned components can be solved independently.
    """
    k = sites.shape[0]
    if k == 0:
        return 0, np.int64(0)
    w = np.empty((k, k), dtype=np.int64)
    b = np.zeros(k, dtype=np.int64)
    for i in range(k):
        if has_boundary:
            b[i] = bdist[sites[i]]
        for j in range(k):
            dt = times[i] - times[j]
            if dt < 0:
                dt = -dt
            w[i, j] = dist[sites[i], sites[j]] + dt

    comp = np.full(k, -1, dtype=np.int32)
    stack = np.empty(k, dtype=np.int32)
    ncomp = 0
    for s in range(k):
        if comp[s] >= 0:
            continue
        top = 0
        stack[top] = s
        top += 1
        comp[s] = ncomp
        while top > 0:
            top -= 1
            u = stack[top]
            for v in range(k):
                if comp[v] < 0:
                    if (not has_boundary) or w[u, v] < b[u] + b[v]:
                        comp[v] = ncomp
                        stack[top] = v
                        top += 1
        ncomp += 1

    parity = 0
    total = np.int64(0)
    members = np.empty(k, dtype=np.int32)
    for c in range(ncomp):
        m = 0
        for i in range(k):
            if comp[i] == c:
                members[m] = i
                m += 1
        if m == 1:
            i0 = members[0]
            total += b[i0]
            parity ^= bcross[sites[i0]]
            continue
        sub_w = np.empty((m, m), dtype=np.int64)
        sub_b = np.empty(m, dtype=np.int64)
        for a in range(m):
            sub_b[a] = b[members[a]]
            for bb in range(m):
                sub_w[a, bb] = w[members[a], members[bb]]
        if m <= DP_MAX:
            choice, wt = _dp_component(sub_w, sub_b, has_boundary)
            total += wt
            mask = (1 << m) - 1
            while mask:
                lo = 0
                while not (mask >> lo) & 1:
                    lo += 1
                ch = choice[mask]
                if ch == -1:
                    parity ^= bcross[sites[members[lo]]]
                    mask ^= 1 << lo
                else:
                    parity ^= cross[sites[members[lo]], sites[members[ch]]]
                    mask ^= (1 << lo) | (1 << ch)
        else:
            mate_real, wt = _mirror_blossom(sub_w, sub_b, has_boundary)
            total += wt
            for a in range(m):
                pa = mate_real[a]
                if pa == -1:
                    parity ^= bcross[sites[members[a]]]
                elif pa > a:
                    parity ^= cross[sites[members[a]], sites[members[pa]]]
    return parity, total


@njit(cache=True)
def _decode_batch(det, dist, bdist, cross, bcross, has_boundary):
    """Per-shot logical-flip parities for a (shots, sites, rounds+1) event
    tensor; returns (parities, weights)."""
    nshots, nsites, nrounds = det.shape
    parities = np.zeros(nshots, dtype=np.uint8)
    weights = np.zeros(nshots, dtype=np.int64)
    sites_buf = np.empty(nsites * nrounds, dtype=np.int32)
    times_buf = np.empty(nsites * nrounds, dtype=np.int32)
    for shot in range(nshots):
        count = 0
        for t in range(nrounds):
            for s in range(nsites):
                if det[shot, s, t]:
                    sites_buf[count] = s
                    times_buf[count] = t
                    count += 1
        parity, wt = _decode_events_kernel(
            sites_buf[:count], times_buf[:count], dist, bdist, cross, bcross, has_boundary
        )
        parities[shot] = parity
        weights[shot] = wt
    return parities, weights


def decoder_tables(lat: SurfaceLattice, species: str):
    """Precomputed geometry tables for the batch kernel.

    Returns (dist, bdist, cross, bcross): pairwise site distances, boundary
    distances, and the parities of canonical correction chains against the
    logical operator this species' corrections can flip."""
    sites = lat.species_sites(species)
    S = len(sites)
    logical = lat.logical_z if species == "z" else lat.logical_x
    support = set(int(q) for q in logical.support())
    dist = np.zeros((S, S), dtype=np.int64)
    cross = np.zeros((S, S), dtype=np.uint8)
    for i in range(S):
        for j in range(S):
            if i == j:
                continue
            dist[i, j] = lat.site_distance(sites[i], sites[j])
            path = lat.correction_path(species, sites[i], sites[j])
            cross[i, j] = len(support.intersection(path)) % 2
    bdist = np.zeros(S, dtype=np.int64)
    bcross = np.zeros(S, dtype=np.uint8)
    if lat.topology == "planar":
        for i in range(S):
            bdist[i] = lat.boundary_distance(species, sites[i])
            bcross[i] = len(support.intersection(lat.boundary_path(species, sites[i]))) % 2
    return dist, bdist, cross, bcross
