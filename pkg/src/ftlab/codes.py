"""Stabilizer code constructors: 3-bit repetition and Steane [[7,1,3]].

Surface/toric lattices live in `lattice`; this module holds the small codes,
the generic StabilizerCode container, and a brute-force distance check used
to validate every constructor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .pauli import PauliString, commutes, pauli_multiply
from . import gf2
from .circuit import Circuit, pad_layer, prep_z, h, cx, measure_z


@dataclass
class StabilizerCode:
    """n-qubit code given by stabilizer generators and one logical pair."""

    n: int
    stabilizers: list[PauliString]
    logical_x: PauliString
    logical_z: PauliString
    distance: int
    name: str = ""
    decoder: Callable[[tuple], PauliString] | None = None

    def __post_init__(self):
        for a, b in itertools.combinations(self.stabilizers, 2):
            if not commutes(a, b):
                raise ValueError(f"stabilizers do not commute: {a} vs {b}")
        for s in self.stabilizers:
            if not commutes(self.logical_x, s) or not commutes(self.logical_z, s):
                raise ValueError(f"logical operator anticommutes with stabilizer {s}")
        if commutes(self.logical_x, self.logical_z):
            raise ValueError("logical X and Z must anticommute")

    def syndrome(self, error: PauliString) -> tuple[int, ...]:
        return tuple(0 if commutes(error, s) else 1 for s in self.stabilizers)

    def in_stabilizer_group(self, p: PauliString) -> bool:
        return gf2.in_pauli_group(p, self.stabilizers)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "name": self.name,
            "distance": self.distance,
            "stabilizers": [s.letters() for s in self.stabilizers],
            "logical_x": self.logical_x.letters(),
            "logical_z": self.logical_z.letters(),
        }


def repetition3():
    """Three-qubit repetition code and its two-ancilla syndrome circuit.

    Data qubits 0..2, ancillas 3 (Z0 Z1) and 4 (Z1 Z2). The attached lookup
    decoder corrects single X errors from the 2-bit syndrome.
    """
    table = {
        (0, 0): PauliString.identity(3),
        (1, 0): PauliString.single(3, 0, "X"),
        (1, 1): PauliString.single(3, 1, "X"),
        (0, 1): PauliString.single(3, 2, "X"),
    }
    code = StabilizerCode(
        n=3,
        stabilizers=[PauliString.from_string("ZZI"), PauliString.from_string("IZZ")],
        logical_x=PauliString.from_string("XXX"),
        logical_z=PauliString.from_string("ZII"),
        distance=3,  # against bit flips; a single Z is already logical
        name="repetition3",
        decoder=lambda synd: table[tuple(synd)],
    )
    n = 5
    layers = [
        pad_layer([prep_z(3), prep_z(4)], n),
        pad_layer([cx(0, 3)], n),
        pad_layer([cx(1, 3), cx(2, 4)], n),
        pad_layer([cx(1, 4)], n),
        pad_layer([measure_z(3, "s0"), measure_z(4, "s1")], n),
    ]
    circuit = Circuit(n, layers, metadata={"data_qubits": [0, 1, 2], "ancillas": [3, 4]})
    return code, circuit


# [7,4] Hamming parity check; column q (1-based) is the binary expansion of q.
_HAMMING_ROWS = [
    (3, 4, 5, 6),  # weight-4 supports, 0-based qubit indices
    (1, 2, 5, 6),
    (0, 2, 4, 6),
]


def _steane_decode(synd) -> PauliString:
    """Total lookup decoder: each 3-bit half is a Hamming error position."""
    sx = synd[:3]  # X-type stabilizer outcomes: diagnose Z errors
    sz = synd[3:]  # Z-type outcomes: diagnose X errors
    corr = PauliString.identity(7)
    pos_z = 4 * sx[0] + 2 * sx[1] + sx[2]
    if pos_z:
        corr = pauli_multiply(corr, PauliString.single(7, pos_z - 1, "Z"))
    pos_x = 4 * sz[0] + 2 * sz[1] + sz[2]
    if pos_x:
        corr = pauli_multiply(corr, PauliString.single(7, pos_x - 1, "X"))
    return corr


def steane7():
    """Steane code, its six-ancilla syndrome circuit, and a transversal CNOT.

    Returns (code, circuit, transversal_cnot) where transversal_cnot(block_a,
    block_b, n_qubits) emits the single layer of seven pairwise CNOTs.
    """
    stabs = []
    for rows, letter in ((_HAMMING_ROWS, "X"), (_HAMMING_ROWS, "Z")):
        for sup in rows:
            p = PauliString.identity(7)
            for q in sup:
                p = pauli_multiply(p, PauliString.single(7, q, letter))
            stabs.append(p)
    code = StabilizerCode(
        n=7,
        stabilizers=stabs,
        logical_x=PauliString.from_string("XXXXXXX"),
        logical_z=PauliString.from_string("ZZZZZZZ"),
        distance=3,
        name="steane7",
        decoder=_steane_decode,
    )

    # Syndrome circuit: data 0..6, X-type ancillas 7..9 (prepared |+> with H,
    # read out through H), Z-type ancillas 10..12. The CNOT schedule below
    # permutes each support so no data qubit is touched twice in a layer.
    n = 13
    schedule = [
        (3, 4, 5, 6),
        (1, 2, 6, 5),
        (0, 6, 4, 2),
    ]
    x_anc = (7, 8, 9)
    z_anc = (10, 11, 12)
    layers = [
        pad_layer([prep_z(a) for a in x_anc + z_anc], n),
        pad_layer([h(a) for a in x_anc], n),
    ]
    for step in range(4):
        layers.append(pad_layer([cx(x_anc[i], schedule[i][step]) for i in range(3)], n))
    layers.append(pad_layer([h(a) for a in x_anc], n))
    for step in range(4):
        layers.append(pad_layer([cx(schedule[i][step], z_anc[i]) for i in range(3)], n))
    layers.append(
        pad_layer(
            [measure_z(a, f"x{i}") for i, a in enumerate(x_anc)]
            + [measure_z(a, f"z{i}") for i, a in enumerate(z_anc)],
            n,
        )
    )
    circuit = Circuit(
        n,
        layers,
        metadata={"data_qubits": list(range(7)), "ancillas": list(range(7, 13))},
    )

    def transversal_cnot(block_a, block_b, n_qubits=14):
        if len(block_a) != 7 or len(block_b) != 7:
            raise ValueError("blocks must list 7 qubits each")
        return Circuit(n_qubits, [pad_layer([cx(a, b) for a, b in zip(block_a, block_b)], n_qubits)])

    return code, circuit, transversal_cnot


def min_distance_bruteforce(code: StabilizerCode, letters: str = "XYZ") -> int:
    """Minimum weight of a logical operator, by exhaustive search.

    Candidates are restricted to the given letter alphabet (e.g. "X" for the
    bit-flip distance). Capped at n <= 13.
    """
    if code.n > 13:
        raise ValueError(f"brute-force distance capped at 13 qubits, got {code.n}")
    stab_x = np.array([s.x for s in code.stabilizers], dtype=np.uint8)
    stab_z = np.array([s.z for s in code.stabilizers], dtype=np.uint8)
    group = gf2.pauli_span(code.stabilizers)
    letter_bits = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
    choices = [letter_bits[ch] for ch in letters]
    for w in range(1, code.n + 1):
        for support in itertools.combinations(range(code.n), w):
            for assign in itertools.product(choices, repeat=w):
                x = np.zeros(code.n, dtype=np.uint8)
                z = np.zeros(code.n, dtype=np.uint8)
                for q, (bx, bz) in zip(support, assign):
                    x[q], z[q] = bx, bz
                # commutes with every stabilizer?
                if ((stab_x @ z + stab_z @ x) % 2).any():
                    continue
                if not group.contains(np.concatenate([x, z])):
                    return w
    raise ValueError("no logical operator found (not an encoding?)")


def steane_encode_zero() -> Circuit:
    """Gate-level encoder taking |0>^7 to the Steane logical zero.

    Hadamards on the X-generator pivots (qubits 3, 1, 0) followed by CNOT
    fan-outs over each generator's remaining support.
    """
    n = 7
    layers = [
        pad_layer([h(3), h(1), h(0)], n),
        pad_layer([cx(3, 4), cx(1, 5), cx(0, 2)], n),
        pad_layer([cx(3, 5), cx(1, 6), cx(0, 4)], n),
        pad_layer([cx(3, 6), cx(1, 2)], n),
        pad_layer([cx(0, 6)], n),
    ]
    return Circuit(n, layers)
