"""Phased Pauli strings in symplectic (x, z) bit representation.

A Pauli operator on n qubits is stored as two length-n bit vectors plus a
power of i:  P = i^v * prod_q X_q^{x[q]} Z_q^{z[q]}.  The letter Y carries
an implicit factor (Y = i*X*Z), so a plain string like "XYZ" has v equal to
the number of Y letters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_LETTERS = ("I", "X", "Y", "Z")
# (x, z) bit pair for each letter
_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_PHASE_STR = {0: "+1", 1: "+i", 2: "-1", 3: "-i"}


@dataclass(frozen=True)
class PauliString:
    """Immutable phased tensor product of I/X/Y/Z over n qubits."""

    x: np.ndarray
    z: np.ndarray
    v: int = 0  # exponent of i in the global phase, mod 4

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.uint8)
        z = np.asarray(self.z, dtype=np.uint8)
        if x.shape != z.shape or x.ndim != 1:
            raise ValueError("x and z bit vectors must be 1-D and equal length")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "v", int(self.v) % 4)
        x.setflags(write=False)
        z.setflags(write=False)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @staticmethod
    def identity(n: int) -> "PauliString":
        return PauliString(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @staticmethod
    def from_string(s: str, phase_i_power: int = 0) -> "PauliString":
        """Build from a letter string like "XIZY"; Y letters fold into the phase."""
        x = np.zeros(len(s), dtype=np.uint8)
        z = np.zeros(len(s), dtype=np.uint8)
        v = phase_i_power
        for q, ch in enumerate(s.upper()):
            if ch not in _BITS:
                raise ValueError(f"unknown Pauli letter {ch!r}")
            x[q], z[q] = _BITS[ch]
            if ch == "Y":
                v += 1
        return PauliString(x, z, v)

    @staticmethod
    def single(n: int, qubit: int, letter: str) -> "PauliString":
        """Weight-1 Pauli with `letter` on `qubit`, identity elsewhere."""
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        bx, bz = _BITS[letter.upper()]
        x[qubit], z[qubit] = bx, bz
        return PauliString(x, z, 1 if letter.upper() == "Y" else 0)

    def letter(self, q: int) -> str:
        xq, zq = self.x[q], self.z[q]
        return "I" if not (xq or zq) else "X" if not zq else "Z" if not xq else "Y"

    def letters(self) -> str:
        out = []
        for q in range(self.n):
            xq, zq = self.x[q], self.z[q]
            out.append("I" if not (xq or zq) else "X" if not zq else "Z" if not xq else "Y")
        return "".join(out)

    @property
    def phase(self) -> complex:
        """Global phase relative to the plain letter string (one of 1, i, -1, -i)."""
        n_y = int(np.count_nonzero(self.x & self.z))
        return 1j ** ((self.v - n_y) % 4)

    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def support(self) -> np.ndarray:
        return np.nonzero(self.x | self.z)[0]

    def is_identity(self) -> bool:
        return self.weight() == 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_multiply(self, other)

    def __repr__(self) -> str:
        n_y = int(np.count_nonzero(self.x & self.z))
        return f"{_PHASE_STR[(self.v - n_y) % 4]}*{self.letters()}"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.n == other.n
            and self.v == other.v
            and bool(np.array_equal(self.x, other.x))
            and bool(np.array_equal(self.z, other.z))
        )

    def __hash__(self) -> int:
        return hash((self.x.tobytes(), self.z.tobytes(), self.v))

    def equal_up_to_phase(self, other: "PauliString") -> bool:
        return bool(np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z))


def pauli_multiply(a: PauliString, b: PauliString) -> PauliString:
    """Group product a*b with exact phase tracking."""
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} != {b.n}")
    # Commuting Z^za past X^xb picks up (-1)^(za*xb).
    v = a.v + b.v + 2 * int(np.dot(a.z.astype(np.int64), b.x.astype(np.int64)))
    return PauliString(a.x ^ b.x, a.z ^ b.z, v)


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the symplectic inner product of a and b vanishes mod 2."""
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} != {b.n}")
    s = int(np.dot(a.x.astype(np.int64), b.z.astype(np.int64)))
    s += int(np.dot(a.z.astype(np.int64), b.x.astype(np.int64)))
    return s % 2 == 0


# Conjugation rules U P U^dag for the supported Clifford gates, in the
# i^v X^x Z^z convention (H flips the sign iff x z, since H (XZ) H = ZX).

def conjugate_through_gate(p: PauliString, gate: str, qubits) -> PauliString:
    """Return U p U^dag for gate in {"CNOT", "H", "I"} acting on `qubits`."""
    g = gate.upper()
    x = p.x.copy()
    z = p.z.copy()
    v = p.v
    if g in ("I", "ID", "IDENTITY"):
        return p
    if g in ("CNOT", "CX"):
        c, t = qubits
        if not (0 <= c < p.n and 0 <= t < p.n) or c == t:
            raise ValueError(f"bad CNOT qubits {qubits}")
        # in the i^v X^x Z^z convention the bit update is phase-free
        x[t] ^= x[c]
        z[c] ^= z[t]
        return PauliString(x, z, v)
    if g == "H":
        (q,) = qubits if not isinstance(qubits, int) else (qubits,)
        if not 0 <= q < p.n:
            raise ValueError(f"qubit {q} out of range")
        if x[q] & z[q]:
            v += 2
        x[q], z[q] = z[q], x[q]
        return PauliString(x, z, v)
    raise ValueError(f"unsupported gate {gate!r}")
