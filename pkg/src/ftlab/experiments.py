"""Monte Carlo memory experiments and threshold estimation.

A memory experiment runs `rounds` noisy syndrome-extraction rounds followed
by one noiseless readout round, decodes both species with exact matching,
and counts a failure whenever the net operator (error times correction)
acts as any logical. Shots are reproducible: every shot draws from a
counter-based generator keyed by (master_seed, shot_index) with the grid
point folded into the counter, so results are bit-identical regardless of
batch size, execution order, or worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .lattice import SurfaceLattice, surface_lattice, surface_syndrome_circuit, parse_tag
from .circuit import Circuit
from .noise import NoiseModel, noisy_locations, shot_rng, sample_faults
from .decoder import _decode_batch, decoder_tables

_XBIT = np.array([0, 1, 1, 0], dtype=np.uint8)
_ZBIT = np.array([0, 0, 1, 1], dtype=np.uint8)


@dataclass
class ExperimentConfig:
    topology: str = "planar"
    distances: tuple = (3, 5, 7)
    ps: tuple = (0.002, 0.004, 0.008)
    preset: str = "circuit_level"
    shots: int = 10_000
    rounds: int | None = None  # None: rounds = d
    master_seed: int = 0
    threads: int = 1
    batch: int = 512

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if list(self.ps) != sorted(self.ps):
            raise ValueError("p grid must be sorted")
        if self.rounds is not None and self.rounds < 1:
            raise ValueError("rounds must be >= 1")


@dataclass
class Row:
    preset: str
    d: int
    p: float
    rounds: int
    shots: int
    failures: int
    p_l: float
    ci_lo: float
    ci_hi: float


@dataclass
class ResultTable:
    rows: list[Row] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["preset", "d", "p", "rounds", "shots", "failures", "p_l", "ci_lo", "ci_hi"])
        for r in self.rows:
            w.writerow(
                [r.preset, r.d, f"{r.p:.10g}", r.rounds, r.shots, r.failures,
                 f"{r.p_l:.10g}", f"{r.ci_lo:.10g}", f"{r.ci_hi:.10g}"]
            )
        return buf.getvalue()

    def to_json(self) -> list[dict]:
        return [vars(r) for r in self.rows]

    def select(self, d=None, p=None):
        out = [
            r
            for r in self.rows
            if (d is None or r.d == d) and (p is None or math.isclose(r.p, p))
        ]
        return out


# ---------------------------------------------------------------------------
# compiled circuit plan for the vectorized frame engine
# ---------------------------------------------------------------------------


class _LayerPlan:
    __slots__ = ("cx", "h_q", "meas", "prep_q", "depol_q", "depol_idx",
                 "gate2_q", "gate2_idx", "mflip_idx")

    def __init__(self):
        self.cx = None          # (2, k) ctrl/tgt qubit columns
        self.h_q = None
        self.meas = None        # (qubits, species ids, site idx, round, mflip noisy idx or -1)
        self.prep_q = None
        self.depol_q = None     # qubits receiving 1q depolarizing after this layer
        self.depol_idx = None   # matching noisy-draw column indices
        self.gate2_q = None     # (2, k)
        self.gate2_idx = None
        self.mflip_idx = None


class CompiledMemoryCircuit:
    """Flattened layer program + noise wiring for one (lattice, rounds, model)."""

    def __init__(self, lat: SurfaceLattice, rounds: int, model: NoiseModel):
        self.lat = lat
        self.rounds = rounds
        self.model = model
        self.circuit = surface_syndrome_circuit(lat, rounds)
        noisy = noisy_locations(self.circuit, model)
        self.n_noisy = len(noisy)
        noisy_by_loc = {(nl.location.layer, nl.location.index): (i, nl.channel) for i, nl in enumerate(noisy)}

        n_z = len(lat.z_sites)
        n_x = len(lat.x_sites)
        self.n_z, self.n_x = n_z, n_x
        self.layers: list[_LayerPlan] = []
        for li, layer in enumerate(self.circuit.layers):
            plan = _LayerPlan()
            cx_c, cx_t = [], []
            h_q = []
            prep_q = []
            meas = []
            depol_q, depol_idx = [], []
            g2_c, g2_t, g2_idx = [], [], []
            for ei, el in enumerate(layer):
                key = (li, ei)
                hit = noisy_by_loc.get(key)
                if el.op == "CX":
                    cx_c.append(el.qubits[0])
                    cx_t.append(el.qubits[1])
                    if hit and hit[1] == "gate2":
                        g2_c.append(el.qubits[0])
                        g2_t.append(el.qubits[1])
                        g2_idx.append(hit[0])
                elif el.op == "H":
                    h_q.append(el.qubits[0])
                    if hit and hit[1] == "depol1":
                        depol_q.append(el.qubits[0])
                        depol_idx.append(hit[0])
                elif el.op in ("PZ", "PX"):
                    prep_q.append(el.qubits[0])
                    if hit and hit[1] == "depol1":
                        depol_q.append(el.qubits[0])
                        depol_idx.append(hit[0])
                elif el.op in ("MZ", "MX"):
                    species, site, rnd = parse_tag(el.tag)
                    meas.append(
                        (el.qubits[0], el.op, species, site, rnd, hit[0] if hit else -1)
                    )
                elif el.op == "I":
                    if hit and hit[1] == "depol1":
                        depol_q.append(el.qubits[0])
                        depol_idx.append(hit[0])
            plan.cx = (np.array(cx_c, dtype=np.int64), np.array(cx_t, dtype=np.int64)) if cx_c else None
            plan.h_q = np.array(h_q, dtype=np.int64) if h_q else None
            plan.prep_q = np.array(prep_q, dtype=np.int64) if prep_q else None
            plan.meas = meas or None
            plan.depol_q = np.array(depol_q, dtype=np.int64) if depol_q else None
            plan.depol_idx = np.array(depol_idx, dtype=np.int64) if depol_q else None
            plan.gate2_q = (np.array(g2_c, dtype=np.int64), np.array(g2_t, dtype=np.int64)) if g2_c else None
            plan.gate2_idx = np.array(g2_idx, dtype=np.int64) if g2_c else None
            self.layers.append(plan)

        # stabilizer incidence over data qubits for the final perfect readout
        self.Hz = np.zeros((n_z, lat.n_data), dtype=np.uint8)
        for i, site in enumerate(lat.z_sites):
            for s in lat.support(site):
                self.Hz[i, lat.data_index[s]] = 1
        self.Hx = np.zeros((n_x, lat.n_data), dtype=np.uint8)
        for i, site in enumerate(lat.x_sites):
            for s in lat.support(site):
                self.Hx[i, lat.data_index[s]] = 1
        self.zl_mask = np.zeros(lat.n_data, dtype=np.uint8)
        self.zl_mask[lat.logical_z.support()] = 1
        self.xl_mask = np.zeros(lat.n_data, dtype=np.uint8)
        self.xl_mask[lat.logical_x.support()] = 1
        self.tables_z = decoder_tables(lat, "z")
        self.tables_x = decoder_tables(lat, "x")

    def run_batch(self, master_seed: int, shot0: int, nshots: int, stream: int = 0):
        """Simulate shots [shot0, shot0+nshots); returns per-shot failure flags."""
        n = self.circuit.n_qubits
        p = self.model.p
        U = np.empty((nshots, self.n_noisy), dtype=np.float64)
        C = np.empty((nshots, self.n_noisy), dtype=np.uint8)
        for i in range(nshots):
            rng = shot_rng(master_seed, shot0 + i, stream)
            U[i] = rng.random(self.n_noisy)
            C[i] = rng.integers(0, 15, size=self.n_noisy, dtype=np.uint8)
        fault = U < p

        x = np.zeros((nshots, n), dtype=np.uint8)
        z = np.zeros((nshots, n), dtype=np.uint8)
        out_z = np.zeros((nshots, self.n_z, self.rounds), dtype=np.uint8)
        out_x = np.zeros((nshots, self.n_x, self.rounds), dtype=np.uint8)

        for plan in self.layers:
            if plan.cx is not None:
                c, t = plan.cx
                x[:, t] ^= x[:, c]
                z[:, c] ^= z[:, t]
            if plan.h_q is not None:
                q = plan.h_q
                tmp = x[:, q].copy()
                x[:, q] = z[:, q]
                z[:, q] = tmp
            if plan.meas is not None:
                for q, op, species, site, rnd, nidx in plan.meas:
                    vals = x[:, q] if op == "MZ" else z[:, q]
                    if nidx >= 0:
                        vals = vals ^ fault[:, nidx]
                    if species == "z":
                        out_z[:, site, rnd] = vals
                    else:
                        out_x[:, site, rnd] = vals
                    x[:, q] = 0
                    z[:, q] = 0
            if plan.prep_q is not None:
                x[:, plan.prep_q] = 0
                z[:, plan.prep_q] = 0
            if plan.depol_q is not None:
                letters = np.where(fault[:, plan.depol_idx], C[:, plan.depol_idx] % 3 + 1, 0)
                x[:, plan.depol_q] ^= _XBIT[letters]
                z[:, plan.depol_q] ^= _ZBIT[letters]
            if plan.gate2_q is not None:
                cq, tq = plan.gate2_q
                pair = np.where(fault[:, plan.gate2_idx], C[:, plan.gate2_idx] + 1, 0)
                a, b = pair >> 2, pair & 3
                x[:, cq] ^= _XBIT[a]
                z[:, cq] ^= _ZBIT[a]
                x[:, tq] ^= _XBIT[b]
                z[:, tq] ^= _ZBIT[b]

        x_data = x[:, : self.lat.n_data]
        z_data = z[:, : self.lat.n_data]
        final_z = (x_data @ self.Hz.T) & 1
        final_x = (z_data @ self.Hx.T) & 1

        det_z = np.empty((nshots, self.n_z, self.rounds + 1), dtype=np.uint8)
        det_z[:, :, 0] = out_z[:, :, 0]
        det_z[:, :, 1 : self.rounds] = out_z[:, :, 1:] ^ out_z[:, :, :-1]
        det_z[:, :, self.rounds] = final_z ^ out_z[:, :, self.rounds - 1]
        det_x = np.empty((nshots, self.n_x, self.rounds + 1), dtype=np.uint8)
        det_x[:, :, 0] = out_x[:, :, 0]
        det_x[:, :, 1 : self.rounds] = out_x[:, :, 1:] ^ out_x[:, :, :-1]
        det_x[:, :, self.rounds] = final_x ^ out_x[:, :, self.rounds - 1]

        has_boundary = self.lat.topology == "planar"
        par_z, _ = _decode_batch(det_z, *self.tables_z, has_boundary)
        par_x, _ = _decode_batch(det_x, *self.tables_x, has_boundary)

        res_z = (x_data @ self.zl_mask) & 1  # X-error content across Z_L
        res_x = (z_data @ self.xl_mask) & 1  # Z-error content across X_L
        fail_xclass = (res_z.astype(np.uint8) ^ par_z).astype(bool)
        fail_zclass = (res_x.astype(np.uint8) ^ par_x).astype(bool)
        return fail_xclass | fail_zclass


def _run_point(args):
    topology, d, rounds, preset, p, shots, master_seed, stream, batch = args
    lat = surface_lattice(topology, d)
    compiled = CompiledMemoryCircuit(lat, rounds, NoiseModel(preset, p))
    failures = 0
    shot = 0
    while shot < shots:
        nb = min(batch, shots - shot)
        failures += int(compiled.run_batch(master_seed, shot, nb, stream).sum())
        shot += nb
    return failures


def run_memory_experiment(cfg: ExperimentConfig) -> ResultTable:
    """Full (d, p) grid of memory experiments; deterministic given cfg."""
    points = []
    for di, d in enumerate(cfg.distances):
        rounds = cfg.rounds if cfg.rounds is not None else d
        for pi, p in enumerate(cfg.ps):
            stream = di * len(cfg.ps) + pi + 1
            points.append(
                (cfg.topology, d, rounds, cfg.preset, p, cfg.shots,
                 cfg.master_seed, stream, cfg.batch)
            )
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            failure_counts = list(pool.map(_run_point, points))
    else:
        failure_counts = [_run_point(pt) for pt in points]
    table = ResultTable()
    for (topology, d, rounds, preset, p, shots, _seed, _stream, _b), failures in zip(
        points, failure_counts
    ):
        lo, hi = wilson_interval(failures, shots)
        table.rows.append(
            Row(preset, d, p, rounds, shots, failures, failures / shots, lo, hi)
        )
    return table


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------


def _norm_quantile_two_sided(confidence: float) -> float:
    """z with P(|N(0,1)| <= z) = confidence, via Newton on erf."""
    if not 0 < confidence < 1:
        raise ValueError("confidence must be in (0, 1)")
    z = 1.0
    for _ in range(80):
        f = math.erf(z / math.sqrt(2)) - confidence
        fp = math.sqrt(2 / math.pi) * math.exp(-z * z / 2)
        step = f / fp
        z -= step
        if abs(step) < 1e-14:
            break
    return z


def wilson_interval(failures: int, shots: int, confidence: float = 0.95):
    """Wilson score interval for a binomial proportion."""
    if not 0 <= failures <= shots or shots < 1:
        raise ValueError("need 0 <= failures <= shots, shots >= 1")
    z = _norm_quantile_two_sided(confidence)
    n = shots
    phat = failures / n
    denom = 1 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


class BracketNotFoundError(ValueError):
    pass


@dataclass
class ThresholdEstimate:
    p_th: float
    spread: float
    crossings: list[dict]


def estimate_threshold(table: ResultTable) -> ThresholdEstimate:
    """Crossing-based threshold from a multi-distance result table.

    For each adjacent distance pair the crossing of the two p_L(p) curves is
    interpolated log-linearly in log p; zero counts get a 0.5-failure
    continuity correction. Raises BracketNotFoundError when a pair of curves
    never crosses inside the grid.
    """
    ds = sorted({r.d for r in table.rows})
    ps = sorted({r.p for r in table.rows})
    if len(ds) < 2:
        raise ValueError("need at least two distances")
    if len(ps) < 3:
        raise ValueError("need at least three p points")

    def logpl(d, p):
        row = next(r for r in table.rows if r.d == d and math.isclose(r.p, p))
        eff = row.failures if row.failures > 0 else 0.5
        return math.log(eff / row.shots)

    crossings = []
    for d1, d2 in zip(ds, ds[1:]):
        diffs = [logpl(d1, p) - logpl(d2, p) for p in ps]
        found = None
        for i in range(len(ps) - 1):
            a, b = diffs[i], diffs[i + 1]
            if a == 0:
                found = ps[i]
                break
            if (a < 0 < b) or (b < 0 < a):
                la, lb = math.log(ps[i]), math.log(ps[i + 1])
                t = a / (a - b)
                found = math.exp(la + t * (lb - la))
                break
        if found is None:
            if diffs[-1] == 0:
                found = ps[-1]
            else:
                raise BracketNotFoundError(
                    f"bracket not found: d={d1} and d={d2} curves do not cross in the grid"
                )
        crossings.append({"d_pair": [d1, d2], "p_cross": found})
    vals = [c["p_cross"] for c in crossings]
    mean = sum(vals) / len(vals)
    spread = max(abs(v - mean) for v in vals)
    return ThresholdEstimate(mean, spread, crossings)


# ---------------------------------------------------------------------------
# scalar reference pipeline (slow, transparent; used for cross-validation and
# per-shot debug dumps)
# ---------------------------------------------------------------------------


def run_shot_reference(lat, rounds, model, master_seed, shot_index, stream=0,
                       debug=False):
    """One shot through the object-level pipeline: sample_faults ->
    frame_run -> SyndromeRecord -> mwpm decode -> judge.

    Returns (outcome, details) where outcome is judge()'s classification.
    """
    from .circuit import frame_run
    from .decoder import (SyndromeRecord, decode_record, judge,
                          events_debug_dump)
    from .pauli import PauliString, pauli_multiply

    circuit = surface_syndrome_circuit(lat, rounds)
    faults, mflips = sample_faults(circuit, model, master_seed, shot_index, stream)
    flipped, residual = frame_run(circuit, faults)
    tags = flipped ^ mflips

    n_z, n_x = len(lat.z_sites), len(lat.x_sites)
    bits = {"z": np.zeros((rounds, n_z), dtype=np.uint8),
            "x": np.zeros((rounds, n_x), dtype=np.uint8)}
    for tag in tags:
        species, site, rnd = parse_tag(tag)
        bits[species][rnd, site] = 1

    res_x = residual.x[: lat.n_data]
    res_z = residual.z[: lat.n_data]
    final = {}
    final["z"] = np.array(
        [int(res_x[[lat.data_index[s] for s in lat.support(site)]].sum() % 2)
         for site in lat.z_sites], dtype=np.uint8)
    final["x"] = np.array(
        [int(res_z[[lat.data_index[s] for s in lat.support(site)]].sum() % 2)
         for site in lat.x_sites], dtype=np.uint8)

    corr = PauliString.identity(lat.n_data)
    details = {"records": {}, "events": {}}
    for species in ("z", "x"):
        record = SyndromeRecord(species, bits[species], final[species])
        c, result, events = decode_record(lat, species, record)
        corr = pauli_multiply(corr, c)
        details["records"][species] = record
        details["events"][species] = events
        if debug:
            details.setdefault("dump", {})[species] = events_debug_dump(
                lat, species, events, result)
    data_residual = PauliString(res_x, res_z)
    outcome = judge(corr, data_residual, lat.as_code())
    details["residual"] = data_residual
    details["correction"] = corr
    return outcome, details
