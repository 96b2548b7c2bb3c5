"""Stochastic fault models over circuit locations.

Three presets, all parameterized by a single per-location probability p:

- code_capacity: depolarizing noise (X/Y/Z each p/3) on data-qubit idles in
  each round's first layer; measurements perfect.
- phenomenological: code_capacity plus classical measurement flips with
  probability p.
- circuit_level: every location is noisy. Two-qubit gates draw uniformly
  from the 15 non-identity two-qubit Paulis (each p/15); one-qubit gates,
  idles and preparations draw X/Y/Z each p/3; measurements flip with
  probability p.

Sampling is keyed by (master_seed, shot_index) through a counter-based
Philox generator, so fault maps are reproducible regardless of execution
order, batching, or thread count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString
from .circuit import Circuit, FaultLocation, enumerate_locations

PRESETS = ("code_capacity", "phenomenological", "circuit_level")

# letter codes used by the samplers: 0=I, 1=X, 2=Y, 3=Z
_XBIT = np.array([0, 1, 1, 0], dtype=np.uint8)
_ZBIT = np.array([0, 0, 1, 1], dtype=np.uint8)


@dataclass(frozen=True)
class NoiseModel:
    preset: str
    p: float

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ValueError(f"unknown preset {self.preset!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0, 1], got {self.p}")


def code_capacity(p: float) -> NoiseModel:
    return NoiseModel("code_capacity", p)


def phenomenological(p: float) -> NoiseModel:
    return NoiseModel("phenomenological", p)


def circuit_level(p: float) -> NoiseModel:
    return NoiseModel("circuit_level", p)


@dataclass(frozen=True)
class NoisyLocation:
    """One sampled location: `channel` is depol1, gate2 or mflip."""

    location: FaultLocation
    channel: str


def noisy_locations(circuit: Circuit, model: NoiseModel) -> list[NoisyLocation]:
    """Deterministically ordered list of locations the preset makes noisy."""
    locs = enumerate_locations(circuit)
    if model.preset == "circuit_level":
        out = []
        for loc in locs:
            if loc.kind == "gate2":
                out.append(NoisyLocation(loc, "gate2"))
            elif loc.kind == "measure":
                out.append(NoisyLocation(loc, "mflip"))
            else:
                out.append(NoisyLocation(loc, "depol1"))
        return out
    round_layers = circuit.metadata.get("round_layers")
    data_qubits = circuit.metadata.get("data_qubits")
    if round_layers is None or data_qubits is None:
        raise ValueError(
            f"{model.preset} preset needs round_layers/data_qubits circuit metadata"
        )
    round_set = set(round_layers)
    data_set = set(data_qubits)
    out = []
    for loc in locs:
        if loc.kind == "idle" and loc.layer in round_set and loc.qubits[0] in data_set:
            out.append(NoisyLocation(loc, "depol1"))
        elif loc.kind == "measure" and model.preset == "phenomenological":
            out.append(NoisyLocation(loc, "mflip"))
    return out


def shot_rng(master_seed: int, shot_index: int, stream: int = 0) -> np.random.Generator:
    """Counter-based per-shot generator; independent of evaluation order.

    `stream` distinguishes independent uses of the same (seed, shot) pair,
    e.g. different grid points of one experiment."""
    return np.random.Generator(
        np.random.Philox(
            key=np.array([master_seed, shot_index], dtype=np.uint64),
            counter=np.array([stream, 0, 0, 0], dtype=np.uint64),
        )
    )


def shot_draws(rng: np.random.Generator, count: int):
    """The fixed per-shot consumption pattern: one uniform and one channel
    index per noisy location."""
    u = rng.random(count)
    c = rng.integers(0, 15, size=count, dtype=np.uint8)
    return u, c


def _pauli_from_draw(channel: str, qubits, c: int, n: int) -> PauliString:
    if channel == "depol1":
        letter = "XYZ"[c % 3]
        return PauliString.single(n, qubits[0], letter)
    # gate2: c in 0..14 encodes the pair (a, b) = divmod(c + 1, 4), a,b in IXYZ
    a, b = divmod(c + 1, 4)
    x = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    x[qubits[0]], z[qubits[0]] = _XBIT[a], _ZBIT[a]
    x[qubits[1]], z[qubits[1]] = _XBIT[b], _ZBIT[b]
    return PauliString(x, z, int(a == 2) + int(b == 2))


def sample_faults(
    circuit: Circuit, model: NoiseModel, master_seed: int, shot_index: int, stream: int = 0
):
    """Draw one shot's faults.

    Returns (pauli_faults, measurement_flips): a map FaultLocation ->
    PauliString plus the set of flipped measurement tags.
    """
    noisy = noisy_locations(circuit, model)
    rng = shot_rng(master_seed, shot_index, stream)
    u, c = shot_draws(rng, len(noisy))
    faults: dict[FaultLocation, PauliString] = {}
    flips: set[str] = set()
    for i, nl in enumerate(noisy):
        if u[i] >= model.p:
            continue
        if nl.channel == "mflip":
            layer = circuit.layers[nl.location.layer]
            flips.add(layer[nl.location.index].tag)
        else:
            faults[nl.location] = _pauli_from_draw(
                nl.channel, nl.location.qubits, int(c[i]), circuit.n_qubits
            )
    return faults, flips


def channels(model: NoiseModel) -> dict:
    """Per-kind outcome table {kind: [(label, probability), ...]}."""
    p = model.p
    depol = [(letter, p / 3) for letter in "XYZ"]
    two = []
    for code in range(15):
        a, b = divmod(code + 1, 4)
        two.append(("IXYZ"[a] + "IXYZ"[b], p / 15))
    quiet = [("none", 0.0)]
    if model.preset == "circuit_level":
        return {"prep": depol, "gate1": depol, "gate2": two, "idle": depol, "measure": [("flip", p)]}
    table = {"prep": quiet, "gate1": quiet, "gate2": quiet, "idle": depol, "measure": quiet}
    if model.preset == "phenomenological":
        table["measure"] = [("flip", p)]
    else:
        table["measure"] = [("flip", 0.0)]
    return table


def channel_table(model: NoiseModel) -> str:
    """Human-readable channel table."""
    lines = [f"preset={model.preset} p={model.p}"]
    for kind, rows in channels(model).items():
        body = ", ".join(f"{label}:{prob:g}" for label, prob in rows)
        lines.append(f"  {kind:8s} {body}")
    return "\n".join(lines)
