"""Exact stabilizer-tableau simulator for small circuits (n <= 32).

Aaronson-Gottesman style tableau with n destabilizer and n stabilizer rows.
Used as an oracle to validate the Pauli-frame engine and the code
constructors; not built for speed.
"""

from __future__ import annotations

import numpy as np

from .pauli import PauliString, commutes, pauli_multiply
from . import gf2

TABLEAU_MAX_QUBITS = 32


def _g(x1, z1, x2, z2):
    """Exponent of i picked up when multiplying single-qubit Paulis (vectorized)."""
    x1 = x1.astype(np.int8)
    z1 = z1.astype(np.int8)
    x2 = x2.astype(np.int8)
    z2 = z2.astype(np.int8)
    out = np.zeros_like(x1)
    both = (x1 == 1) & (z1 == 1)
    out[both] = (z2 - x2)[both]
    xonly = (x1 == 1) & (z1 == 0)
    out[xonly] = (z2 * (2 * x2 - 1))[xonly]
    zonly = (x1 == 0) & (z1 == 1)
    out[zonly] = (x2 * (1 - 2 * z2))[zonly]
    return out


class StabilizerTableau:
    """Mutable tableau over n qubits, initialized to |0...0>."""

    def __init__(self, n: int):
        if not 1 <= n <= TABLEAU_MAX_QUBITS:
            raise ValueError(f"tableau supports 1..{TABLEAU_MAX_QUBITS} qubits, got {n}")
        self.n = n
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.uint8)
        self.x[np.arange(n), np.arange(n)] = 1  # destabilizers X_i
        self.z[np.arange(n, 2 * n), np.arange(n)] = 1  # stabilizers Z_i

    def copy(self) -> "StabilizerTableau":
        t = StabilizerTableau.__new__(StabilizerTableau)
        t.n = self.n
        t.x = self.x.copy()
        t.z = self.z.copy()
        t.r = self.r.copy()
        return t

    # -- row helpers ---------------------------------------------------

    def _rowsum(self, h: int, i: int):
        """Row h := row i * row h, with exact sign bookkeeping."""
        phase = 2 * self.r[h] + 2 * self.r[i] + np.sum(
            _g(self.x[i], self.z[i], self.x[h], self.z[h])
        )
        self.r[h] = (int(phase) % 4) // 2
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    def row_pauli(self, row: int) -> PauliString:
        n_y = int(np.count_nonzero(self.x[row] & self.z[row]))
        return PauliString(self.x[row], self.z[row], n_y + 2 * int(self.r[row]))

    def stabilizer_generators(self) -> list[PauliString]:
        return [self.row_pauli(i) for i in range(self.n, 2 * self.n)]

    # -- gates ---------------------------------------------------------

    def h(self, q: int):
        self.r ^= self.x[:, q] & self.z[:, q]
        self.x[:, q], self.z[:, q] = self.z[:, q].copy(), self.x[:, q].copy()

    def cnot(self, c: int, t: int):
        self.r ^= self.x[:, c] & self.z[:, t] & (self.x[:, t] ^ self.z[:, c] ^ 1)
        self.x[:, t] ^= self.x[:, c]
        self.z[:, c] ^= self.z[:, t]

    def pauli_x(self, q: int):
        self.r ^= self.z[:, q]

    def pauli_z(self, q: int):
        self.r ^= self.x[:, q]

    def pauli_y(self, q: int):
        self.r ^= self.x[:, q] ^ self.z[:, q]

    def apply_pauli(self, p: PauliString):
        """Conjugate the state by a Pauli (i.e. apply it as a gate)."""
        for q in p.support():
            xq, zq = p.x[q], p.z[q]
            if xq and zq:
                self.pauli_y(q)
            elif xq:
                self.pauli_x(q)
            else:
                self.pauli_z(q)

    # -- measurement / preparation -------------------------------------

    def measure_z(self, q: int, rng: np.random.Generator) -> int:
        """Projective Z measurement; returns bit (0 for +1, 1 for -1)."""
        n = self.n
        stab_rows = np.nonzero(self.x[n:, q])[0]
        if stab_rows.size:
            p = int(stab_rows[0]) + n
            for i in range(2 * n):
                if i != p and self.x[i, q]:
                    self._rowsum(i, p)
            # old stabilizer becomes the destabilizer of the new Z_q row
            self.x[p - n] = self.x[p]
            self.z[p - n] = self.z[p]
            self.r[p - n] = self.r[p]
            self.x[p] = 0
            self.z[p] = 0
            self.z[p, q] = 1
            outcome = int(rng.integers(0, 2))
            self.r[p] = outcome
            return outcome
        # deterministic: product of stabilizers selected by destabilizer x bits
        sx = np.zeros(self.n, dtype=np.uint8)
        sz = np.zeros(self.n, dtype=np.uint8)
        sr = 0
        for i in range(n):
            if self.x[i, q]:
                phase = 2 * sr + 2 * self.r[i + n] + int(
                    np.sum(_g(self.x[i + n], self.z[i + n], sx, sz))
                )
                sr = (phase % 4) // 2
                sx ^= self.x[i + n]
                sz ^= self.z[i + n]
        return int(sr)

    def measure_x(self, q: int, rng: np.random.Generator) -> int:
        self.h(q)
        out = self.measure_z(q, rng)
        self.h(q)
        return out

    def prep_z(self, q: int, rng: np.random.Generator):
        if self.measure_z(q, rng):
            self.pauli_x(q)

    def prep_x(self, q: int, rng: np.random.Generator):
        if self.measure_x(q, rng):
            self.pauli_z(q)

    # -- queries ---------------------------------------------------------

    def expectation(self, p: PauliString) -> int:
        """+1/-1 if p is (anti)stabilized, 0 if the outcome would be random."""
        gens = self.stabilizer_generators()
        for s in gens:
            if not commutes(p, s):
                return 0
        # Solve for the subset of generators whose product matches p's bits
        # (Gaussian elimination tracking operator products), then compare
        # exact phases. Order inside products is irrelevant: the group is
        # abelian so signs are well defined.
        solution = PauliString.identity(self.n)
        v = gf2.to_symplectic(p)
        basis: list[tuple[np.ndarray, PauliString]] = []
        for vec, op in ((gf2.to_symplectic(s), s) for s in gens):
            red = vec.copy()
            redop = op
            for bvec, bop in basis:
                piv = int(np.nonzero(bvec)[0][0])
                if red[piv]:
                    red = red ^ bvec
                    redop = pauli_multiply(redop, bop)
            if red.any():
                basis.append((red, redop))
        for bvec, bop in basis:
            piv = int(np.nonzero(bvec)[0][0])
            if v[piv]:
                v = v ^ bvec
                solution = pauli_multiply(solution, bop)
        if v.any():
            return 0  # not in the group (logical direction): random
        # solution equals p up to phase i^k with k in {0, 2}
        diff = (solution.v - p.v) % 4
        return 1 if diff == 0 else -1

    def is_stabilized_by(self, p: PauliString) -> bool:
        return self.expectation(p) == 1


def tableau_run(initial: StabilizerTableau, circuit, seed=0):
    """Execute a circuit on a copy of `initial`; returns (tableau, outcomes).

    Outcomes map measurement tag -> bit (0 for +1, 1 for -1). Random
    measurement branches consume the seeded generator in deterministic
    element order, so two runs with equal seeds align their coin flips.
    """
    if circuit.n_qubits != initial.n:
        raise ValueError("circuit/tableau qubit count mismatch")
    tab = initial.copy()
    rng = np.random.default_rng(seed)
    outcomes: dict[str, int] = {}
    for layer in circuit.layers:
        for el in layer:
            op = el.op
            if op == "CX":
                tab.cnot(*el.qubits)
            elif op == "H":
                tab.h(el.qubits[0])
            elif op == "X":
                tab.pauli_x(el.qubits[0])
            elif op == "Y":
                tab.pauli_y(el.qubits[0])
            elif op == "Z":
                tab.pauli_z(el.qubits[0])
            elif op == "MZ":
                outcomes[el.tag] = tab.measure_z(el.qubits[0], rng)
            elif op == "MX":
                outcomes[el.tag] = tab.measure_x(el.qubits[0], rng)
            elif op == "PZ":
                tab.prep_z(el.qubits[0], rng)
            elif op == "PX":
                tab.prep_x(el.qubits[0], rng)
            elif op == "I":
                pass
            else:  # pragma: no cover - opcodes are validated upstream
                raise ValueError(f"non-Clifford element {op}")
    return tab, outcomes
