"""GF(2) linear algebra helpers for symplectic Pauli vectors."""

from __future__ import annotations

import numpy as np

from .pauli import PauliString


def to_symplectic(p: PauliString) -> np.ndarray:
    """Phase-free symplectic vector [x | z] of a Pauli string."""
    return np.concatenate([p.x, p.z]).astype(np.uint8)


class Gf2Space:
    """Incrementally built row space over GF(2) with membership queries."""

    def __init__(self, vectors=None):
        self._rows: list[np.ndarray] = []  # reduced rows
        self._pivots: list[int] = []  # pivot column of each row
        for v in vectors or []:
            self.add(v)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        """Residue of vec modulo the current row space."""
        v = np.array(vec, dtype=np.uint8, copy=True)
        for row, piv in zip(self._rows, self._pivots):
            if v[piv]:
                v ^= row
        return v

    def contains(self, vec) -> bool:
        return not self.reduce(np.asarray(vec, dtype=np.uint8)).any()

    def add(self, vec) -> bool:
        """Insert vec; returns True iff it enlarged the space."""
        v = self.reduce(np.asarray(vec, dtype=np.uint8))
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        # keep existing rows reduced against the new one
        for i, row in enumerate(self._rows):
            if row[piv]:
                self._rows[i] = row ^ v
        self._rows.append(v)
        self._pivots.append(piv)
        return True


def rank(rows) -> int:
    """GF(2) rank of an iterable of bit vectors."""
    space = Gf2Space()
    for r in rows:
        space.add(r)
    return space.rank


def pauli_span(paulis) -> Gf2Space:
    """Row space spanned by the symplectic vectors of the given Paulis."""
    return Gf2Space(to_symplectic(p) for p in paulis)


def in_pauli_group(p: PauliString, generators) -> bool:
    """Phase-free membership of p in the group generated by `generators`."""
    return pauli_span(generators).contains(to_symplectic(p))
