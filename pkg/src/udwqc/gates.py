"""Canonical qubit gates in projector form, truth tables, and qubit-mediated
reference channels.

Gates are assembled from rank-1 basis projectors rather than hard-coded
entries, so the projector-decomposition identities can be checked exactly.
Qubit ordering convention: the leftmost tensor factor is qubit 1 (the control
in CNOT(1,2)).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .operators import Operator, partial_trace

KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)

GATE_KINDS = ("X", "Y", "Z", "CNOT12", "CNOT21_X", "CNOT21_Z", "QST", "SWAP", "H", "S", "T")

_BASIS_KETS = {
    ("z", +1): KET0,
    ("z", -1): KET1,
    ("x", +1): np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
    ("x", -1): np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0),
    ("y", +1): np.array([1.0, 1.0j], dtype=complex) / np.sqrt(2.0),
    ("y", -1): np.array([1.0, -1.0j], dtype=complex) / np.sqrt(2.0),
}


_PAULIS = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def basis_ket(axis: str, sign: int) -> np.ndarray:
    """Eigenvector of the Pauli operator along ``axis`` with eigenvalue ``sign``."""
    try:
        return _BASIS_KETS[(axis, int(sign))].copy()
    except KeyError:
        raise ValueError(f"unknown basis ({axis!r}, {sign})") from None


def projector(axis: str, sign: int) -> Operator:
    """Rank-1 projector onto the +/- eigenstate of the given Pauli axis.

    Built as (I + sign*sigma)/2 so the entries are exact dyadic rationals and
    the projector-decomposition gate identities hold to exact equality.
    """
    if axis not in _PAULIS or sign not in (+1, -1):
        raise ValueError(f"unknown basis ({axis!r}, {sign})")
    return Operator((np.eye(2, dtype=complex) + sign * _PAULIS[axis]) / 2.0, (2,))


def _pauli(axis: str) -> np.ndarray:
    return _PAULIS[axis].copy()


def _identity(n: int = 2) -> np.ndarray:
    return np.eye(n, dtype=complex)


def _x_power(mu: int) -> np.ndarray:
    # X^((-mu+1)/2): identity for mu=+1, X for mu=-1.
    return _identity() if mu == +1 else _pauli("x")


def _z_power(mu: int) -> np.ndarray:
    return _identity() if mu == +1 else _pauli("z")


def build_gate(kind: str) -> Operator:
    """Construct a canonical gate from its projector decomposition."""
    if kind == "X":
        mat = sum(mu * projector("x", mu).mat for mu in (+1, -1))
        return Operator(mat, (2,))
    if kind == "Z":
        mat = sum(mu * projector("z", mu).mat for mu in (+1, -1))
        return Operator(mat, (2,))
    if kind == "Y":
        mat = sum(mu * projector("y", mu).mat for mu in (+1, -1))
        return Operator(mat, (2,))
    if kind == "H":
        mat = (_pauli("x") + _pauli("z")) / np.sqrt(2.0)
        return Operator(mat, (2,))
    if kind == "S":
        mat = projector("z", +1).mat + 1.0j * projector("z", -1).mat
        return Operator(mat, (2,))
    if kind == "T":
        mat = projector("z", +1).mat + np.exp(1.0j * np.pi / 4.0) * projector("z", -1).mat
        return Operator(mat, (2,))
    if kind == "CNOT12":
        mat = sum(np.kron(projector("z", mu).mat, _x_power(mu)) for mu in (+1, -1))
        return Operator(mat, (2, 2))
    if kind == "CNOT21_X":
        mat = sum(np.kron(_x_power(mu), projector("z", mu).mat) for mu in (+1, -1))
        return Operator(mat, (2, 2))
    if kind == "CNOT21_Z":
        mat = sum(np.kron(projector("x", mu).mat, _z_power(mu)) for mu in (+1, -1))
        return Operator(mat, (2, 2))
    if kind == "QST":
        return Operator(build_gate("CNOT21_Z").mat @ build_gate("CNOT12").mat, (2, 2))
    if kind == "SWAP":
        c21 = build_gate("CNOT21_Z").mat
        c12 = build_gate("CNOT12").mat
        return Operator(c21 @ c12 @ c21, (2, 2))
    raise ValueError(f"unknown gate kind {kind!r}")


# ---------------------------------------------------------------------------
# Truth tables
# ---------------------------------------------------------------------------

@dataclass
class TruthTableRow:
    input_label: str
    expected: np.ndarray
    computed: np.ndarray
    matches: bool
    phase: complex  # computed = phase * expected when matches


@dataclass
class TruthTable:
    kind: str
    rows: list[TruthTableRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.matches for r in self.rows)


def _ket_from_label(label: str) -> np.ndarray:
    v = np.array([1.0], dtype=complex)
    for ch in label:
        v = np.kron(v, KET0 if ch == "0" else KET1)
    return v


# Expected outputs as (coefficient, basis-label) sums; unnormalized entries are
# normalized before comparison.
_TRUTH_TABLES: dict[str, list[tuple[str, list[tuple[complex, str]]]]] = {
    "X": [("0", [(1, "1")]), ("1", [(1, "0")])],
    "Z": [("0", [(1, "0")]), ("1", [(-1, "1")])],
    "Y": [("0", [(-1j, "1")]), ("1", [(1j, "0")])],
    "CNOT12": [
        ("00", [(1, "00")]),
        ("01", [(1, "01")]),
        ("10", [(1, "11")]),
        ("11", [(1, "10")]),
    ],
    "CNOT21_Z": [
        ("00", [(1, "00")]),
        ("01", [(1, "11")]),
        ("10", [(1, "10")]),
        ("11", [(1, "01")]),
    ],
    "H": [
        ("0", [(1, "0"), (1, "1")]),
        ("1", [(1, "0"), (-1, "1")]),
    ],
}


def verify_truth_table(kind: str, up_to_phase: bool = True) -> TruthTable:
    """Compare a gate's action on basis states against its reference table.

    Comparison is up to a global phase per row; the returned rows carry the
    phase so sign-convention mismatches (the Y table) stay visible.
    """
    if kind not in _TRUTH_TABLES:
        raise ValueError(f"no truth table for gate kind {kind!r}")
    gate = build_gate(kind)
    table = TruthTable(kind)
    for label, terms in _TRUTH_TABLES[kind]:
        expected = np.zeros(gate.dim, dtype=complex)
        for coeff, out_label in terms:
            expected += coeff * _ket_from_label(out_label)
        expected = expected / np.linalg.norm(expected)
        computed = gate.mat @ _ket_from_label(label)
        overlap = np.vdot(expected, computed)
        if up_to_phase:
            matches = bool(abs(abs(overlap) - 1.0) < 1e-12)
            phase = overlap if matches else 0.0j
        else:
            matches = bool(np.max(np.abs(computed - expected)) < 1e-12)
            phase = 1.0 + 0.0j
        table.rows.append(TruthTableRow(label, expected, computed, matches, complex(phase)))
    return table


# ---------------------------------------------------------------------------
# Qubit-mediated reference channels
# ---------------------------------------------------------------------------

def _as_state_vector(state) -> np.ndarray:
    v = np.asarray(state, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if abs(n - 1.0) > 1e-10:
        raise ValueError(f"state vector norm {n:.6g} is not 1")
    return v


def _embed(gate: np.ndarray, slots: tuple[int, int], dims: tuple[int, ...]) -> np.ndarray:
    """Embed a two-qubit gate acting on the given factor slots of a register."""
    n = len(dims)
    ops = [np.eye(d, dtype=complex) for d in dims]
    full = np.zeros((int(np.prod(dims)),) * 2, dtype=complex)
    g = gate.reshape(2, 2, 2, 2)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    if g[i, j, k, l] == 0:
                        continue
                    factors = list(ops)
                    e_ik = np.zeros((2, 2), dtype=complex)
                    e_ik[i, k] = 1.0
                    e_jl = np.zeros((2, 2), dtype=complex)
                    e_jl[j, l] = 1.0
                    factors[slots[0]] = e_ik
                    factors[slots[1]] = e_jl
                    term = factors[0]
                    for f in factors[1:]:
                        term = np.kron(term, f)
                    full += g[i, j, k, l] * term
    return full


def qubit_mediated_channel(kind: str, frank_init=KET0, bob_init=KET0):
    """CPTP superoperator for the qubit-mediated reference processes.

    QST2   -- two canonical QST gates pass Alice's state through Frank to Bob;
              maps rho_A to the Bob output factor (2 -> 2).
    SWAP3  -- Alice<->Frank, Frank<->Bob, Alice<->Frank swaps; identity on the
              Bob output slot (2 -> 2).
    CNOT1  -- the plain two-qubit unitary CNOT(1,2) channel (4 -> 4).
    """
    from .channels import Channel, channel_from_apply, unitary_channel

    if kind == "CNOT1":
        return unitary_channel(build_gate("CNOT12"), recipe={"kind": "QubitCNOT_unitary"})

    frank = _as_state_vector(frank_init)
    bob = _as_state_vector(bob_init)
    dims = (2, 2, 2)
    qst = build_gate("QST").mat
    swap = build_gate("SWAP").mat
    if kind == "QST2":
        stages = [_embed(qst, (0, 1), dims), _embed(qst, (1, 2), dims)]
    elif kind == "SWAP3":
        u_af = _embed(swap, (0, 1), dims)
        u_fb = _embed(swap, (1, 2), dims)
        stages = [u_af, u_fb, u_af]
    else:
        raise ValueError(f"unknown mediated channel kind {kind!r}")

    rho_env = np.kron(np.outer(frank, frank.conj()), np.outer(bob, bob.conj()))

    def apply(rho_a: np.ndarray) -> np.ndarray:
        rho = np.kron(rho_a, rho_env)
        for u in stages:
            rho = u @ rho @ u.conj().T
        return partial_trace(Operator(rho, dims), keep=[2]).mat

    return channel_from_apply(
        apply, d_in=2, d_out=2,
        recipe={"kind": f"Qubit{kind}", "frank": frank.tolist(), "bob": bob.tolist()},
    )
