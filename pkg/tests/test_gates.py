import numpy as np
import pytest

from udwqc.channels import unitary_channel
from udwqc.gates import (
    GATE_KINDS,
    basis_ket,
    build_gate,
    projector,
    qubit_mediated_channel,
    verify_truth_table,
)

QST_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 1, 0, 0]], dtype=complex
)


def test_projector_z_plus_is_ket0_dyad():
    p = projector("z", +1)
    assert np.array_equal(p.mat, np.diag([1.0, 0.0]).astype(complex))


@pytest.mark.parametrize("axis", ["x", "y", "z"])
def test_projector_completeness_and_idempotence(axis):
    plus = projector(axis, +1).mat
    minus = projector(axis, -1).mat
    assert np.allclose(plus + minus, np.eye(2), atol=1e-15)
    assert np.allclose(plus @ plus, plus, atol=1e-15)
    assert np.allclose(plus @ minus, 0.0, atol=1e-15)


def test_pauli_from_projector_sums():
    x = sum(mu * projector("x", mu).mat for mu in (+1, -1))
    assert np.allclose(x, np.array([[0, 1], [1, 0]]), atol=1e-15)
    y = sum(mu * projector("y", mu).mat for mu in (+1, -1))
    assert np.allclose(y, np.array([[0, -1j], [1j, 0]]), atol=1e-15)
    z = sum(mu * projector("z", mu).mat for mu in (+1, -1))
    assert np.allclose(z, np.diag([1, -1]), atol=1e-15)


@pytest.mark.parametrize("kind", GATE_KINDS)
def test_every_gate_is_unitary(kind):
    gate = build_gate(kind)
    dev = np.max(np.abs(gate.mat.conj().T @ gate.mat - np.eye(gate.dim)))
    assert dev < 1e-12


def test_qst_matrix_exact():
    assert np.array_equal(build_gate("QST").mat, QST_MATRIX)


def test_qst_factorizes_into_two_cnots():
    prod = build_gate("CNOT21_Z").mat @ build_gate("CNOT12").mat
    assert np.array_equal(build_gate("QST").mat, prod)


def test_cnot21_forms_agree_entrywise():
    assert np.array_equal(build_gate("CNOT21_Z").mat, build_gate("CNOT21_X").mat)


def test_swap_is_three_cnots():
    c21 = build_gate("CNOT21_Z").mat
    c12 = build_gate("CNOT12").mat
    assert np.array_equal(build_gate("SWAP").mat, c21 @ c12 @ c21)


def test_swap_exchanges_random_product_states():
    rng = np.random.default_rng(7)
    swap = build_gate("SWAP").mat
    for _ in range(20):
        psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        phi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        psi /= np.linalg.norm(psi)
        phi /= np.linalg.norm(phi)
        out = swap @ np.kron(psi, phi)
        assert np.allclose(out, np.kron(phi, psi), atol=1e-12)


@pytest.mark.parametrize("kind", ["X", "Z", "Y", "CNOT12", "CNOT21_Z", "H"])
def test_truth_tables(kind):
    table = verify_truth_table(kind)
    assert table.passed, [r.input_label for r in table.rows if not r.matches]


def test_y_table_row_flagged_as_phase_only():
    # The reference Y table lists |0> -> -i|1>; the matrix gives +i|1>.
    table = verify_truth_table("Y")
    row0 = table.rows[0]
    assert row0.matches
    assert row0.phase == pytest.approx(-1.0)  # computed = -(expected)
    exact = verify_truth_table("Y", up_to_phase=False)
    assert not exact.rows[0].matches


def test_s_squared_is_z_and_t_squared_is_s():
    s = build_gate("S").mat
    t = build_gate("T").mat
    assert np.allclose(s @ s, build_gate("Z").mat, atol=1e-12)
    assert np.allclose(t @ t, s, atol=1e-12)


def test_mediated_qst_with_zero_ancillas_is_identity():
    ch = qubit_mediated_channel("QST2")
    ident = unitary_channel(np.eye(2))
    assert np.max(np.abs(ch.superop - ident.superop)) < 1e-12


def test_mediated_qst_transfers_basis_states():
    ch = qubit_mediated_channel("QST2")
    for label, ket in (("0", [1, 0]), ("1", [0, 1])):
        rho = np.outer(ket, np.conj(ket)).astype(complex)
        out = ch.apply(rho)
        assert np.allclose(out, rho, atol=1e-12), label


def test_mediated_swap3_is_identity_for_any_frank():
    rng = np.random.default_rng(3)
    frank = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    frank /= np.linalg.norm(frank)
    ch = qubit_mediated_channel("SWAP3", frank_init=frank)
    ident = unitary_channel(np.eye(2))
    assert np.max(np.abs(ch.superop - ident.superop)) < 1e-12


def test_cnot1_reference_reproduces_cnot_choi():
    ch = qubit_mediated_channel("CNOT1")
    cnot = build_gate("CNOT12").mat
    expected = unitary_channel(cnot).choi().mat
    assert np.max(np.abs(ch.choi().mat - expected)) < 1e-12


def test_mediated_channel_rejects_bad_frank():
    with pytest.raises(ValueError):
        qubit_mediated_channel("QST2", frank_init=[1.0, 1.0])


def test_basis_ket_rejects_unknown():
    with pytest.raises(ValueError):
        basis_ket("w", 1)
    with pytest.raises(ValueError):
        build_gate("TOFFOLI")
