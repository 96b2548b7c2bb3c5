"""Timestepped Clifford circuit IR with enumerable spacetime fault locations.

A circuit is a list of layers; each layer must mention every qubit exactly
once (idle steps are explicit elements, so every spacetime position is a
fault location). The Pauli-frame engine propagates injected Pauli faults
through the ideal circuit and reports which measurements flip relative to
the fault-free run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliString

# opcode -> (arity in qubits, carries tag, location kind)
OPCODES = {
    "PZ": (1, False, "prep"),
    "PX": (1, False, "prep"),
    "H": (1, False, "gate1"),
    "X": (1, False, "gate1"),
    "Y": (1, False, "gate1"),
    "Z": (1, False, "gate1"),
    "CX": (2, False, "gate2"),
    "MZ": (1, True, "measure"),
    "MX": (1, True, "measure"),
    "I": (1, False, "idle"),
}


@dataclass(frozen=True)
class Element:
    op: str
    qubits: tuple[int, ...]
    tag: str | None = None

    def __post_init__(self):
        if self.op not in OPCODES:
            raise ValueError(f"unknown opcode {self.op!r}")
        arity, tagged, _ = OPCODES[self.op]
        if len(self.qubits) != arity:
            raise ValueError(f"{self.op} takes {arity} qubit(s), got {self.qubits}")
        if tagged and self.tag is None:
            raise ValueError(f"{self.op} requires a measurement tag")
        if self.op == "CX" and self.qubits[0] == self.qubits[1]:
            raise ValueError("CX control equals target")

    @property
    def kind(self) -> str:
        return OPCODES[self.op][2]


def prep_z(q):
    return Element("PZ", (q,))


def prep_x(q):
    return Element("PX", (q,))


def h(q):
    return Element("H", (q,))


def cx(c, t):
    return Element("CX", (c, t))


def measure_z(q, tag):
    return Element("MZ", (q,), tag)


def measure_x(q, tag):
    return Element("MX", (q,), tag)


def idle(q):
    return Element("I", (q,))


def pad_layer(elements, n_qubits) -> tuple[Element, ...]:
    """Fill a partial layer with explicit idles on all untouched qubits."""
    used = set()
    for el in elements:
        used.update(el.qubits)
    padded = list(elements) + [idle(q) for q in range(n_qubits) if q not in used]
    return tuple(padded)


@dataclass(frozen=True)
class FaultLocation:
    """One spacetime position: (layer, element index within layer)."""

    layer: int
    index: int
    op: str
    qubits: tuple[int, ...]

    @property
    def kind(self) -> str:
        return OPCODES[self.op][2]


class Circuit:
    """Immutable layered circuit; every qubit appears once per layer."""

    def __init__(self, n_qubits: int, layers, metadata: dict | None = None):
        self.n_qubits = int(n_qubits)
        self.layers: tuple[tuple[Element, ...], ...] = tuple(tuple(l) for l in layers)
        self.metadata = dict(metadata or {})
        tags = set()
        for li, layer in enumerate(self.layers):
            seen: set[int] = set()
            for el in layer:
                for q in el.qubits:
                    if not 0 <= q < self.n_qubits:
                        raise ValueError(f"layer {li}: qubit {q} out of range")
                    if q in seen:
                        raise ValueError(f"layer {li}: qubit {q} used twice")
                    seen.add(q)
                if el.tag is not None:
                    if el.tag in tags:
                        raise ValueError(f"duplicate measurement tag {el.tag!r}")
                    tags.add(el.tag)
            if seen != set(range(self.n_qubits)):
                missing = sorted(set(range(self.n_qubits)) - seen)
                raise ValueError(f"layer {li}: qubits {missing} missing (idle must be explicit)")

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    def measurement_tags(self) -> list[str]:
        return [el.tag for layer in self.layers for el in layer if el.tag is not None]

    def __eq__(self, other):
        return (
            isinstance(other, Circuit)
            and self.n_qubits == other.n_qubits
            and self.layers == other.layers
        )


def enumerate_locations(circuit: Circuit) -> list[FaultLocation]:
    """All fault locations, layer-major then element-index order."""
    out = []
    for li, layer in enumerate(circuit.layers):
        for ei, el in enumerate(layer):
            out.append(FaultLocation(li, ei, el.op, el.qubits))
    return out


def validate_layers(circuit: Circuit) -> bool:
    """True iff every layer's elements touch disjoint qubits.

    Disjointness is guaranteed by the constructor, so this re-checks the
    invariant independently (useful on hand-built layer lists).
    """
    for layer in circuit.layers:
        seen: set[int] = set()
        for el in layer:
            for q in el.qubits:
                if q in seen:
                    return False
                seen.add(q)
    return True


def frame_run(circuit: Circuit, faults: dict | None = None):
    """Propagate a Pauli frame through the circuit with injected faults.

    `faults` maps FaultLocation (or (layer, index) pairs) to PauliString
    supported only on that location's qubits; each fault is multiplied into
    the frame right after its element acts. Returns (set of flipped
    measurement tags, residual frame as a PauliString).
    """
    n = circuit.n_qubits
    x = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    by_layer: dict[int, list[tuple[int, PauliString]]] = {}
    for loc, pauli in (faults or {}).items():
        if isinstance(loc, FaultLocation):
            li, ei = loc.layer, loc.index
        else:
            li, ei = loc
        el = circuit.layers[li][ei]
        if any(q not in el.qubits for q in pauli.support()):
            raise ValueError(f"fault at layer {li} elem {ei} has support outside {el.qubits}")
        by_layer.setdefault(li, []).append((ei, pauli))

    flipped: set[str] = set()
    for li, layer in enumerate(circuit.layers):
        for el in layer:
            op = el.op
            if op == "CX":
                c, t = el.qubits
                x[t] ^= x[c]
                z[c] ^= z[t]
            elif op == "H":
                q = el.qubits[0]
                x[q], z[q] = z[q], x[q]
            elif op == "MZ":
                q = el.qubits[0]
                if x[q]:
                    flipped.add(el.tag)
                x[q] = 0
                z[q] = 0
            elif op == "MX":
                q = el.qubits[0]
                if z[q]:
                    flipped.add(el.tag)
                x[q] = 0
                z[q] = 0
            elif op in ("PZ", "PX"):
                q = el.qubits[0]
                x[q] = 0
                z[q] = 0
            # I and Pauli gates leave the frame unchanged
        for ei, pauli in by_layer.get(li, ()):
            x ^= pauli.x
            z ^= pauli.z
    return flipped, PauliString(x, z)


# -- text serialization (one layer per line) ---------------------------------
#
# Grammar (documented in docs/formats.md):
#   file    := header meta? line*
#   header  := "# ftlab-circuit v1 qubits=" INT
#   meta    := "# meta " JSON-OBJECT
#   line    := element (" " element)*         -- one line per layer
#   element := "PZ" q | "PX" q | "H" q | "X" q | "Y" q | "Z" q | "I" q
#            | "CX" q q | "MZ" q tag | "MX" q tag
# Tags must not contain whitespace.


def circuit_to_text(circuit: Circuit) -> str:
    lines = [f"# ftlab-circuit v1 qubits={circuit.n_qubits}"]
    if circuit.metadata:
        lines.append("# meta " + json.dumps(circuit.metadata, sort_keys=True))
    for layer in circuit.layers:
        parts = []
        for el in layer:
            toks = [el.op, *map(str, el.qubits)]
            if el.tag is not None:
                toks.append(el.tag)
            parts.append(" ".join(toks))
        lines.append("  ".join(parts))
    return "\n".join(lines) + "\n"


def circuit_from_text(text: str) -> Circuit:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# ftlab-circuit v1 qubits="):
        raise ValueError("missing circuit header line")
    n_qubits = int(lines[0].split("qubits=")[1])
    metadata = {}
    body = lines[1:]
    if body and body[0].startswith("# meta "):
        metadata = json.loads(body[0][len("# meta "):])
        body = body[1:]
    layers = []
    for ln in body:
        toks = ln.split()
        elements = []
        i = 0
        while i < len(toks):
            op = toks[i]
            if op not in OPCODES:
                raise ValueError(f"unknown opcode {op!r} in line {ln!r}")
            arity, tagged, _ = OPCODES[op]
            qubits = tuple(int(t) for t in toks[i + 1 : i + 1 + arity])
            i += 1 + arity
            tag = None
            if tagged:
                tag = toks[i]
                i += 1
            elements.append(Element(op, qubits, tag))
        layers.append(tuple(elements))
    return Circuit(n_qubits, layers, metadata)
