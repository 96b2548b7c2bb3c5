import itertools

import numpy as np
import pytest

from ftlab.pauli import PauliString, pauli_multiply, commutes, conjugate_through_gate

# dense 2x2 matrices for the brute-force oracle
_M = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense(p: PauliString) -> np.ndarray:
    out = np.array([[p.phase]], dtype=complex)
    for ch in p.letters():
        out = np.kron(out, _M[ch])
    return out


def test_multiply_single_qubit_table():
    x = PauliString.from_string("X")
    z = PauliString.from_string("Z")
    xz = pauli_multiply(x, z)
    assert xz.letters() == "Y"
    assert xz.phase == -1j  # X*Z = -i*Y


def test_identity_multiplication():
    p = PauliString.from_string("XYZI")
    ident = PauliString.identity(4)
    assert pauli_multiply(ident, p) == p
    assert pauli_multiply(p, ident) == p


def test_involution_up_to_phase():
    p = PauliString.from_string("XZ")
    sq = pauli_multiply(p, p)
    assert sq.letters() == "II"
    assert sq.phase == 1


def test_multiply_matches_dense_oracle_exhaustive_two_qubits():
    for a_l, b_l in itertools.product(itertools.product("IXYZ", repeat=2), repeat=2):
        a = PauliString.from_string("".join(a_l))
        b = PauliString.from_string("".join(b_l))
        prod = pauli_multiply(a, b)
        assert np.allclose(dense(prod), dense(a) @ dense(b))


def test_multiply_associative_random():
    rng = np.random.default_rng(7)
    for _ in range(100):
        strs = ["".join(rng.choice(list("IXYZ"), 3)) for _ in range(3)]
        a, b, c = (PauliString.from_string(s) for s in strs)
        assert pauli_multiply(pauli_multiply(a, b), c) == pauli_multiply(a, pauli_multiply(b, c))


def test_length_mismatch_raises():
    with pytest.raises(ValueError):
        pauli_multiply(PauliString.from_string("X"), PauliString.from_string("XX"))
    with pytest.raises(ValueError):
        commutes(PauliString.from_string("X"), PauliString.from_string("XX"))


def test_commutes_simple_cases():
    assert not commutes(PauliString.from_string("X"), PauliString.from_string("Z"))
    assert commutes(PauliString.from_string("XX"), PauliString.from_string("ZZ"))
    # X_1 vs Z_1 Z_2: one anticommuting position
    assert not commutes(PauliString.from_string("XI"), PauliString.from_string("ZZ"))


def test_commutes_matches_dense_commutator():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = PauliString.from_string("".join(rng.choice(list("IXYZ"), 2)))
        b = PauliString.from_string("".join(rng.choice(list("IXYZ"), 2)))
        comm = dense(a) @ dense(b) - dense(b) @ dense(a)
        assert commutes(a, b) == np.allclose(comm, 0)


def test_commutes_consistent_with_products():
    rng = np.random.default_rng(11)
    for _ in range(200):
        a = PauliString.from_string("".join(rng.choice(list("IXYZ"), 4)))
        b = PauliString.from_string("".join(rng.choice(list("IXYZ"), 4)))
        ab = pauli_multiply(a, b)
        ba = pauli_multiply(b, a)
        assert ab.letters() == ba.letters()
        assert commutes(a, b) == (ab == ba)


def test_cnot_copies_x_to_target():
    p = conjugate_through_gate(PauliString.from_string("XI"), "CNOT", (0, 1))
    assert p.letters() == "XX" and p.phase == 1


def test_cnot_copies_z_to_control():
    p = conjugate_through_gate(PauliString.from_string("IZ"), "CNOT", (0, 1))
    assert p.letters() == "ZZ" and p.phase == 1


def test_cnot_fixes_control_z():
    p = conjugate_through_gate(PauliString.from_string("ZI"), "CNOT", (0, 1))
    assert p.letters() == "ZI" and p.phase == 1


def test_hadamard_swaps_x_z():
    assert conjugate_through_gate(PauliString.from_string("X"), "H", (0,)).letters() == "Z"
    assert conjugate_through_gate(PauliString.from_string("Z"), "H", (0,)).letters() == "X"
    y = conjugate_through_gate(PauliString.from_string("Y"), "H", (0,))
    assert y.letters() == "Y" and y.phase == -1


def test_unsupported_gate_raises():
    with pytest.raises(ValueError):
        conjugate_through_gate(PauliString.from_string("X"), "S", (0,))


def _cnot_dense():
    return np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    )


def test_cnot_conjugation_matches_dense_all_16():
    u = _cnot_dense()
    for letters in itertools.product("IXYZ", repeat=2):
        p = PauliString.from_string("".join(letters))
        got = conjugate_through_gate(p, "CNOT", (0, 1))
        assert np.allclose(dense(got), u @ dense(p) @ u.conj().T)


def test_conjugation_preserves_commutation():
    rng = np.random.default_rng(5)
    for _ in range(100):
        a = PauliString.from_string("".join(rng.choice(list("IXYZ"), 3)))
        b = PauliString.from_string("".join(rng.choice(list("IXYZ"), 3)))
        ca = conjugate_through_gate(a, "CNOT", (0, 2))
        cb = conjugate_through_gate(b, "CNOT", (0, 2))
        assert commutes(a, b) == commutes(ca, cb)


def test_weight_and_support():
    p = PauliString.from_string("IXIYZ")
    assert p.weight() == 3
    assert list(p.support()) == [1, 3, 4]
