"""Field-mediated and qubit-mediated channels as CPTP superoperators.

Channels are stored in the column-stacking convention: the superoperator S
satisfies vec(Phi(X)) = S vec(X) with vec stacking columns.  Builders run on
the exact symbolic displacement engine (authoritative) or on the truncated
Fock backend (the oracle); "both" builds the two and fails loudly if they
disagree beyond 1e-6.

The decode stage of a transfer channel is the receiving-side gate taken in
the field-to-qubit direction, i.e. the adjoint of the receiver's encode
gate; only that reading makes the transfer capacity approach one and the
diamond distance to the ideal channel vanish.  The literal same-form
reading is kept available via decode_form="printed".
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np

from .field import ModelParams, fock_realize
from .gates import build_gate, qubit_mediated_channel
from .operators import Operator, hermitize, partial_trace
from .udw import (
    CoherentJointState,
    CoherentKetState,
    UdwGate,
    apply_gate,
    apply_gate_to_ket,
    udw_gate,
)

CP_TOL = 1e-8
TP_TOL = 1e-10
BACKEND_AGREEMENT_TOL = 1e-6

PLUS_Y = np.array([1.0, 1.0j], dtype=complex) / np.sqrt(2.0)
KET0 = np.array([1.0, 0.0], dtype=complex)


class BackendMismatchError(RuntimeError):
    """Raised when the symbolic and Fock builds of a channel disagree."""


class ChannelBuildError(RuntimeError):
    """Raised when a built map violates the CP or TP invariants."""


@dataclass
class Channel:
    """A CPTP map with its builder recipe attached."""

    superop: np.ndarray
    d_in: int
    d_out: int
    recipe: dict = dc_field(default_factory=dict)
    backend: str = "symbolic"

    @property
    def tensor(self) -> np.ndarray:
        """View with indices [out_row, out_col, in_row, in_col]."""
        return self.superop.reshape(
            (self.d_out, self.d_out, self.d_in, self.d_in), order="F"
        )

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex).reshape(self.d_in, self.d_in)
        return np.einsum("abij,ij->ab", self.tensor, rho)

    def apply_extended(self, rho: np.ndarray, ref_dim: int) -> np.ndarray:
        """(id_R x Phi)(rho) for rho on R x in, returned on R x out."""
        r = ref_dim
        rho = np.asarray(rho, dtype=complex).reshape(r, self.d_in, r, self.d_in)
        out = np.einsum("abij,ricj->rabc", self.tensor, rho)
        # out indices: [r, out_row, out_col, r'] -> rearrange to (r,out_row),(r',out_col)
        out = out.transpose(0, 1, 3, 2).reshape(r * self.d_out, r * self.d_out)
        return out

    def choi(self) -> Operator:
        """J(Phi) = sum_ij |i><j| x Phi(|i><j|); Tr J = d_in."""
        j = self.tensor.transpose(2, 0, 3, 1).reshape(
            self.d_in * self.d_out, self.d_in * self.d_out
        )
        return Operator(j, (self.d_in, self.d_out))

    def cp_tp_report(self) -> tuple[float, float]:
        """(min Choi eigenvalue, max trace-preservation deviation)."""
        jmat = self.choi().mat
        min_eig = float(np.linalg.eigvalsh(hermitize(jmat)).min())
        tp = np.einsum("aaij->ij", self.tensor)
        tp_dev = float(np.max(np.abs(tp - np.eye(self.d_in))))
        return min_eig, tp_dev

    def validate(self) -> None:
        min_eig, tp_dev = self.cp_tp_report()
        if min_eig < -CP_TOL:
            raise ChannelBuildError(
                f"complete positivity violated: Choi min eigenvalue {min_eig:.3g} "
                f"(backend {self.backend}; truncation too small?)"
            )
        if tp_dev > TP_TOL:
            raise ChannelBuildError(
                f"trace preservation violated by {tp_dev:.3g} (backend {self.backend})"
            )


def channel_from_apply(apply: Callable[[np.ndarray], np.ndarray], d_in: int, d_out: int,
                       recipe: dict | None = None, backend: str = "symbolic",
                       check: bool = True) -> Channel:
    """Assemble the superoperator by feeding matrix units through ``apply``."""
    sup = np.zeros((d_out * d_out, d_in * d_in), dtype=complex)
    for j in range(d_in):
        for i in range(d_in):
            unit = np.zeros((d_in, d_in), dtype=complex)
            unit[i, j] = 1.0
            out = np.asarray(apply(unit), dtype=complex)
            sup[:, i + d_in * j] = out.reshape(-1, order="F")
    ch = Channel(sup, d_in, d_out, recipe or {}, backend)
    if check:
        ch.validate()
    return ch


def unitary_channel(u: Operator | np.ndarray, recipe: dict | None = None) -> Channel:
    mat = u.mat if isinstance(u, Operator) else np.asarray(u, dtype=complex)
    d = mat.shape[0]
    return channel_from_apply(
        lambda rho: mat @ rho @ mat.conj().T, d, d,
        recipe=recipe or {"kind": "unitary"},
    )


def superoperator_to_choi(ch: Channel) -> Operator:
    return ch.choi()


def choi_to_superoperator(choi: Operator) -> Channel:
    d_in, d_out = choi.dims
    tensor = choi.mat.reshape(d_in, d_out, d_in, d_out).transpose(1, 3, 0, 2)
    sup = tensor.reshape((d_out * d_out, d_in * d_in), order="F")
    return Channel(sup, d_in, d_out, {"kind": "from_choi"})


# ---------------------------------------------------------------------------
# Field-channel builders
# ---------------------------------------------------------------------------

def _as_density(state) -> np.ndarray:
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        n = np.linalg.norm(arr)
        if abs(n - 1.0) > 1e-10:
            raise ValueError(f"initial state norm {n:.6g} is not 1")
        return np.outer(arr, arr.conj())
    if abs(np.trace(arr) - 1.0) > 1e-10:
        raise ValueError("initial density matrix must have unit trace")
    return arr


@dataclass(frozen=True)
class _GateApplication:
    gate: UdwGate
    qubit: int


def _field_gate_sequence(kind: str, params: ModelParams, decode_form: str) -> tuple[list[_GateApplication], int, int]:
    """The gate program for a field channel: (applications, n_qubits, output qubit)."""
    if decode_form not in ("adjoint", "printed"):
        raise ValueError(f"unknown decode_form {decode_form!r}")

    def decode(gate: UdwGate) -> UdwGate:
        return gate.adjoint() if decode_form == "adjoint" else gate

    if kind == "FieldQST":
        return (
            [
                _GateApplication(udw_gate("QST", params), 0),
                _GateApplication(decode(udw_gate("QST", params)), 1),
            ],
            2,
            1,
        )
    if kind == "FieldCNOT1":
        # The x-Pi controlled unitary is already the field-to-qubit direction.
        return (
            [
                _GateApplication(udw_gate("Zphi", params), 0),
                _GateApplication(udw_gate("XPi", params), 1),
            ],
            2,
            1,
        )
    if kind == "FieldCNOT2q":
        return (
            [
                _GateApplication(udw_gate("ZPiXphi", params), 0),
                _GateApplication(decode(udw_gate("QST", params)), 1),
            ],
            2,
            1,
        )
    if kind == "FieldHadamard":
        return (
            [
                _GateApplication(udw_gate("Zphi", params), 0),
                _GateApplication(udw_gate("H", params), 0),
            ],
            1,
            0,
        )
    raise ValueError(f"unknown field channel kind {kind!r}")


def _symbolic_field_apply(apps: Sequence[_GateApplication], n_qubits: int, out_qubit: int,
                          bob_rho: np.ndarray | None):
    def apply(rho_a: np.ndarray) -> np.ndarray:
        if n_qubits == 2:
            joint = np.kron(rho_a, bob_rho)
        else:
            joint = rho_a
        state = CoherentJointState.from_qubit_density(joint, n_qubits)
        for app in apps:
            state = apply_gate(state, app.gate, app.qubit)
        rho_qubits = state.trace_out_field()
        full = Operator(rho_qubits, (2,) * n_qubits)
        if n_qubits == 1:
            return full.mat
        return partial_trace(full, keep=[out_qubit]).mat

    return apply


def _fock_field_apply(apps: Sequence[_GateApplication], n_qubits: int, out_qubit: int,
                      bob_rho: np.ndarray | None, params: ModelParams,
                      n_max: int | None):
    from .udw import fock_reach, payload_matrix

    beta_max = fock_reach(params, sum(app.gate.max_center() for app in apps))
    rep = fock_realize(params, n_max=n_max, beta_max=max(beta_max, 1e-9))
    n = rep.n_max
    # Factor layout: qubits in order, field last.
    dims = (2,) * n_qubits + (n,)
    embedded = []
    for app in apps:
        mat = np.zeros((int(np.prod(dims)),) * 2, dtype=complex)
        for t in app.gate.full_terms():
            factors = []
            for q in range(n_qubits):
                factors.append(t.qubit_op if q == app.qubit else np.eye(2, dtype=complex))
            factors.append(payload_matrix(t.payload, rep, params))
            term = factors[0]
            for f in factors[1:]:
                term = np.kron(term, f)
            mat += term
        embedded.append(mat)
    vac = np.zeros((n, n), dtype=complex)
    vac[0, 0] = 1.0

    def apply(rho_a: np.ndarray) -> np.ndarray:
        joint = np.kron(rho_a, bob_rho) if n_qubits == 2 else rho_a
        rho = np.kron(joint, vac)
        for mat in embedded:
            rho = mat @ rho @ mat.conj().T
        return partial_trace(Operator(rho, dims), keep=[out_qubit]).mat

    return apply


def build_channel(kind: str, params: ModelParams | None = None, bob_init=None,
                  frank_init=None, backend: str = "symbolic",
                  decode_form: str = "adjoint", n_max: int | None = None,
                  check: bool = True) -> Channel:
    """Build one of the channel family members.

    Field channels default Bob to |+_y>; the qubit-mediated references default
    Frank and Bob to |0>.  backend="both" cross-validates the symbolic build
    against the Fock oracle and raises BackendMismatchError beyond 1e-6.
    """
    if kind == "QubitQST":
        frank = KET0 if frank_init is None else frank_init
        bob = KET0 if bob_init is None else bob_init
        return qubit_mediated_channel("QST2", frank, bob)
    if kind == "QubitSWAP":
        frank = KET0 if frank_init is None else frank_init
        bob = KET0 if bob_init is None else bob_init
        return qubit_mediated_channel("SWAP3", frank, bob)
    if kind == "QubitCNOT1":
        frank = KET0 if frank_init is None else frank_init
        bob = KET0 if bob_init is None else bob_init
        return _qubit_cnot_mediated(frank, bob)
    if kind == "QubitCNOT2q":
        bob = PLUS_Y if bob_init is None else bob_init
        return _qubit_cnot_direct(bob)
    if kind == "QubitHadamard":
        return unitary_channel(build_gate("H"), recipe={"kind": "QubitHadamard"})

    if params is None:
        raise ValueError(f"channel kind {kind!r} requires model params")
    apps, n_qubits, out_qubit = _field_gate_sequence(kind, params, decode_form)
    bob_rho = None
    if n_qubits == 2:
        bob_rho = _as_density(PLUS_Y if bob_init is None else bob_init)
    recipe = {
        "kind": kind,
        "lambda_phi": params.lambda_phi,
        "gamma": params.gamma,
        "decode_form": decode_form,
        "bob": None if bob_rho is None else bob_rho.tolist(),
    }

    if backend == "both":
        sym = build_channel(kind, params, bob_init, frank_init, "symbolic",
                            decode_form, n_max, check)
        fock = build_channel(kind, params, bob_init, frank_init, "fock",
                             decode_form, n_max, check)
        dev = float(np.max(np.abs(sym.superop - fock.superop)))
        if dev > BACKEND_AGREEMENT_TOL:
            raise BackendMismatchError(
                f"{kind}: symbolic and Fock superoperators differ by {dev:.3g}"
            )
        sym.recipe["backend_agreement"] = dev
        return sym

    if backend == "symbolic":
        apply = _symbolic_field_apply(apps, n_qubits, out_qubit, bob_rho)
    elif backend == "fock":
        apply = _fock_field_apply(apps, n_qubits, out_qubit, bob_rho, params, n_max)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return channel_from_apply(apply, 2, 2, recipe=recipe, backend=backend, check=check)


def _qubit_cnot_mediated(frank_init, bob_init) -> Channel:
    """CNOT(A,F) followed by the canonical QST from F to B, tracing A and F."""
    frank = _as_density(frank_init)
    bob = _as_density(bob_init)
    dims = (2, 2, 2)
    from .gates import _embed

    cnot_af = _embed(build_gate("CNOT12").mat, (0, 1), dims)
    qst_fb = _embed(build_gate("QST").mat, (1, 2), dims)

    def apply(rho_a: np.ndarray) -> np.ndarray:
        rho = np.kron(rho_a, np.kron(frank, bob))
        rho = cnot_af @ rho @ cnot_af.conj().T
        rho = qst_fb @ rho @ qst_fb.conj().T
        return partial_trace(Operator(rho, dims), keep=[2]).mat

    return channel_from_apply(apply, 2, 2, recipe={"kind": "QubitCNOT1"})


def _qubit_cnot_direct(bob_init) -> Channel:
    """A single CNOT between qubits: control in, target out, control traced."""
    bob = _as_density(bob_init)
    cnot = build_gate("CNOT12").mat

    def apply(rho_a: np.ndarray) -> np.ndarray:
        rho = cnot @ np.kron(rho_a, bob) @ cnot.conj().T
        return partial_trace(Operator(rho, (2, 2)), keep=[1]).mat

    return channel_from_apply(apply, 2, 2, recipe={"kind": "QubitCNOT2q"})


def encode_only_state(params: ModelParams, rho_ca: np.ndarray) -> CoherentJointState:
    """Apply the single z-phi controlled unitary to (C, A, vacuum) and trace A.

    The returned symbolic state lives on qubit C and the field; this is the
    Schmidt rank-one construction whose extended output is always separable.
    """
    state = CoherentJointState.from_qubit_density(np.asarray(rho_ca, dtype=complex), 2)
    state = apply_gate(state, udw_gate("Zphi", params), 1)
    return state.trace_out_qubits([1])


def qst_output_state(params: ModelParams, state: CoherentKetState | CoherentJointState,
                     qubit: int = 1):
    """Exact symbolic output of the QST encode gate applied at the given qubit."""
    gate = udw_gate("QST", params)
    if isinstance(state, CoherentKetState):
        return apply_gate_to_ket(state, gate, qubit)
    return apply_gate(state, gate, qubit)
