"""Field-mediated unitaries as symbolic (projector x displacement) objects.

A :class:`UdwGate` is a sum of terms, each pairing a 2x2 qubit operator with
an ordered list of displacement generators on the field.  Gates realize either
as dense matrices on a truncated Fock space or as exact transformers on
coherent-state sums; the two backends cross-validate each other.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Sequence

import numpy as np

from .field import Displacement, FockRep, ModelParams, displacement_reduce, fock_realize, overlap
from .gates import projector
from .operators import Operator

UDW_GATE_KINDS = ("QST", "Zphi", "XPi", "ZPiXphi", "H", "S", "T")

Payload = tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class GateTerm:
    """One (qubit operator, field payload) term; payload leftmost applies last."""

    qubit_op: np.ndarray
    payload: Payload

    def reduced(self, params: ModelParams) -> Displacement:
        """Displacement-mode reduction of the payload (exact BCH bookkeeping)."""
        return displacement_reduce([params.displacement(g, c) for g, c in self.payload])

    def shift_reach(self, params: ModelParams) -> float:
        """Largest |center| change this term can apply under the params' pi_mode."""
        if params.pi_mode == "displacement":
            return abs(self.reduced(params).center)
        return sum(abs(c) * params.lambda_phi for g, c in self.payload if g == "phi")


@dataclass(frozen=True)
class UdwGate:
    kind: str
    params: ModelParams
    terms: tuple[GateTerm, ...]
    prefactor: Payload = ()

    def full_terms(self) -> list[GateTerm]:
        """Terms with the global field prefactor folded in (prefactor applies last)."""
        if not self.prefactor:
            return list(self.terms)
        return [GateTerm(t.qubit_op, self.prefactor + t.payload) for t in self.terms]

    def adjoint(self) -> "UdwGate":
        def negrev(p: Payload) -> Payload:
            return tuple((g, -c) for g, c in reversed(p))

        terms = tuple(
            GateTerm(t.qubit_op.conj().T, negrev(self.prefactor + t.payload))
            for t in self.terms
        )
        return UdwGate(self.kind + "_dagger", self.params, terms, ())

    def max_center(self) -> float:
        """Largest center-shift magnitude any single term applies."""
        return max(t.shift_reach(self.params) for t in self.full_terms())


def udw_gate(kind: str, params: ModelParams) -> UdwGate:
    """Construct a field-mediated gate in its defining projector pairing."""
    px = {mu: projector("x", mu).mat for mu in (+1, -1)}
    pz = {mu: projector("z", mu).mat for mu in (+1, -1)}
    if kind == "QST":
        # (P-x e^{-iPi} + P+x e^{+iPi})(P+z e^{+iphi} + P-z e^{-iphi})
        terms = tuple(
            GateTerm(px[mu] @ pz[mup], (("pi", float(mu)), ("phi", float(mup))))
            for mu in (+1, -1)
            for mup in (+1, -1)
        )
        return UdwGate(kind, params, terms)
    if kind == "Zphi":
        # |0><0| e^{-iphi} + |1><1| e^{+iphi}
        terms = tuple(GateTerm(pz[mu], (("phi", float(-mu)),)) for mu in (+1, -1))
        return UdwGate(kind, params, terms)
    if kind == "XPi":
        # |-><-| e^{-iPi} + |+><+| e^{+iPi}
        terms = tuple(GateTerm(px[mu], (("pi", float(mu)),)) for mu in (+1, -1))
        return UdwGate(kind, params, terms)
    if kind == "ZPiXphi":
        # e^{-iPi} (|1><1| e^{-iPi} + |0><0| e^{+iPi})(|-><-| e^{-iphi} + |+><+| e^{+iphi})
        terms = tuple(
            GateTerm(pz[mu] @ px[mup], (("pi", float(mu)), ("phi", float(mup))))
            for mu in (+1, -1)
            for mup in (+1, -1)
        )
        return UdwGate(kind, params, terms, prefactor=(("pi", -1.0),))
    if kind == "H":
        terms = tuple(GateTerm(px[mu], (("phi", float(-mu)),)) for mu in (+1, -1))
        return UdwGate(kind, params, terms)
    if kind == "S":
        # Momentum powers {0, 2}; both terms carry e^{+iphi}.
        terms = tuple(
            GateTerm(pz[mu], (("pi", float(-mu + 1)), ("phi", 1.0))) for mu in (+1, -1)
        )
        return UdwGate(kind, params, terms)
    if kind == "T":
        terms = tuple(
            GateTerm(pz[mu], (("pi", float(-mu + 1) / 2.0), ("phi", 1.0))) for mu in (+1, -1)
        )
        return UdwGate(kind, params, terms)
    raise ValueError(f"unknown UDW gate kind {kind!r}")


def qst_factors(params: ModelParams) -> tuple[UdwGate, UdwGate]:
    """The two controlled-unitary factors of the QST gate (x-Pi, z-phi)."""
    px = {mu: projector("x", mu).mat for mu in (+1, -1)}
    pz = {mu: projector("z", mu).mat for mu in (+1, -1)}
    x_factor = UdwGate(
        "QST_xPi", params,
        tuple(GateTerm(px[mu], (("pi", float(mu)),)) for mu in (+1, -1)),
    )
    z_factor = UdwGate(
        "QST_zphi", params,
        tuple(GateTerm(pz[mu], (("phi", float(mu)),)) for mu in (+1, -1)),
    )
    return x_factor, z_factor


# ---------------------------------------------------------------------------
# Fock realization
# ---------------------------------------------------------------------------

def realize(gate: UdwGate, backend: str = "fock", n_max: int | None = None,
            rep: FockRep | None = None, check_unitary: bool = True):
    """Realize a gate as a dense (qubit x Fock) operator or a symbolic transformer."""
    if backend == "symbolic":
        def transform(state, qubit: int = 0):
            return apply_gate(state, gate, qubit)

        return transform
    if backend != "fock":
        raise ValueError(f"unknown backend {backend!r}")
    if rep is None:
        rep = fock_realize(gate.params, n_max=n_max,
                           beta_max=max(fock_reach(gate.params, gate.max_center()), 1e-9))
    mat = gate_matrix(gate, rep)
    op = Operator(mat, (2, rep.n_max))
    if check_unitary:
        dev = float(np.max(np.abs(op.mat.conj().T @ op.mat - np.eye(op.dim))))
        if dev > 1e-10:
            raise ValueError(f"realized gate is not unitary (deviation {dev:.3g})")
    return op


def _code_lattice(extent: int) -> list[int]:
    """Odd multiples of alpha out to 2*extent - 1: the momentum eigenstates."""
    sites = list(range(-(2 * extent - 1), 2 * extent, 2))
    return sites


def fock_reach(params: ModelParams, shift_reach: float) -> float:
    """Largest |center| the truncated Fock space must resolve.

    In eigenphase mode the lattice operator itself references centers out to
    the last code-lattice site, which may exceed the displacement reach.
    """
    if params.pi_mode == "eigenphase" and params.gamma != 0.0:
        return max(shift_reach, (2 * params.pi_lattice_extent - 1) * params.lambda_phi)
    return shift_reach


@lru_cache(maxsize=256)
def _pi_code_correction(lambda_phi: float, gamma: float, coeff: float,
                        extent: int) -> np.ndarray:
    """Correction kernel W of the eigenphase momentum unitary.

    exp(i*coeff*Pi) is realized as the unitary completion of the phases
    exp(i*coeff*gamma*nu) on the Loewdin-orthogonalized code lattice
    {|nu*alpha> : nu odd}:  U = 1 + sum_ab |u_a> W[a,b] <u_b|  with
    W = G^{-1/2} (Lambda - 1) G^{-1/2}.
    """
    nus = np.array(_code_lattice(extent), dtype=float)
    diff = nus[:, None] - nus[None, :]
    gram = np.exp(-(lambda_phi**2) * diff**2 / 2.0)
    evals, evecs = np.linalg.eigh(gram)
    if evals.min() < 1e-13:
        raise ValueError(
            f"code lattice too overlapping at lambda_phi = {lambda_phi:.3g} "
            f"(extent {extent}); reduce pi_lattice_extent"
        )
    g_inv_half = (evecs / np.sqrt(evals)) @ evecs.T
    phases = np.exp(1.0j * coeff * gamma * nus)
    return g_inv_half @ np.diag(phases - 1.0) @ g_inv_half


def apply_payload_to_center(payload: Payload, params: ModelParams,
                            center: complex) -> list[tuple[complex, complex]]:
    """Act with the payload on a coherent ket: returns (amplitude, center) branches.

    phi entries displace along the encoding axis; pi entries either displace
    (displacement mode) or act as the code-lattice eigenphase unitary, whose
    off-code corrections appear as extra lattice-ket branches.
    """
    branches: list[tuple[complex, complex]] = [(1.0 + 0.0j, center)]
    for gen, coeff in reversed(payload):
        if gen == "phi" or params.pi_mode == "displacement":
            d = params.displacement(gen, coeff)
            branches = [
                (amp * ph, nc)
                for amp, c in branches
                for nc, ph in (_apply_displacement_to_center(d, c),)
            ]
            continue
        if gen != "pi":
            raise ValueError(f"unknown generator {gen!r}")
        if params.gamma == 0.0 or coeff == 0.0:
            continue
        extent = params.pi_lattice_extent
        w = _pi_code_correction(params.lambda_phi, params.gamma, float(coeff), extent)
        sites = _code_lattice(extent)
        new_branches: list[tuple[complex, complex]] = []
        for amp, c in branches:
            # U|c> = |c> + sum_a |u_a> (W g_c)[a],  g_c[b] = <u_b|c>.
            g_c = np.array([overlap(nu * params.alpha_phi, c) for nu in sites])
            corr = w @ g_c
            new_branches.append((amp, c))
            for a, nu in enumerate(sites):
                if abs(corr[a]) > 1e-16:
                    new_branches.append((amp * corr[a], nu * params.alpha_phi))
        branches = new_branches
    return branches


def payload_matrix(payload: Payload, rep: FockRep, params: ModelParams) -> np.ndarray:
    """Dense Fock matrix of the payload under the params' momentum mode."""
    mat = np.eye(rep.n_max, dtype=complex)
    for gen, coeff in payload:
        mat = mat @ generator_matrix(rep, params, gen, coeff)
    return mat


def generator_matrix(rep: FockRep, params: ModelParams, gen: str, coeff: float) -> np.ndarray:
    if gen == "phi":
        return rep.exp_unitary(coeff * rep.phi_op)
    if gen != "pi":
        raise ValueError(f"unknown generator {gen!r}")
    if params.pi_mode == "displacement":
        return rep.exp_unitary(coeff * rep.pi_op)
    if params.gamma == 0.0 or coeff == 0.0:
        return np.eye(rep.n_max, dtype=complex)
    sites = _code_lattice(params.pi_lattice_extent)
    vecs = np.stack([rep.coherent_vector(nu * params.alpha_phi) for nu in sites], axis=1)
    w = _pi_code_correction(params.lambda_phi, params.gamma, float(coeff),
                            params.pi_lattice_extent)
    return np.eye(rep.n_max, dtype=complex) + vecs @ w @ vecs.conj().T


def gate_matrix(gate: UdwGate, rep: FockRep) -> np.ndarray:
    n = rep.n_max
    mat = np.zeros((2 * n, 2 * n), dtype=complex)
    for t in gate.full_terms():
        mat += np.kron(t.qubit_op, payload_matrix(t.payload, rep, gate.params))
    return mat


# ---------------------------------------------------------------------------
# Symbolic coherent engine
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KetTerm:
    coeff: complex
    qubits: tuple[int, ...]
    center: complex


@dataclass(frozen=True)
class DyadTerm:
    coeff: complex
    kets: tuple[int, ...]
    bras: tuple[int, ...]
    fket: complex
    fbra: complex


def _round_key(z: complex, ndigits: int = 12) -> tuple[float, float]:
    return (round(z.real, ndigits), round(z.imag, ndigits))


@dataclass
class CoherentKetState:
    """A pure state: finite sum of qubit-basis kets with coherent field kets."""

    n_qubits: int
    terms: list[KetTerm] = field(default_factory=list)

    def merged(self, drop_tol: float = 1e-15) -> "CoherentKetState":
        acc: dict = {}
        for t in self.terms:
            key = (t.qubits, _round_key(t.center))
            if key in acc:
                old = acc[key]
                acc[key] = KetTerm(old.coeff + t.coeff, old.qubits, old.center)
            else:
                acc[key] = t
        scale = max((abs(t.coeff) for t in acc.values()), default=1.0)
        terms = [t for t in acc.values() if abs(t.coeff) > drop_tol * max(scale, 1.0)]
        return CoherentKetState(self.n_qubits, terms)

    def norm_sq(self) -> float:
        total = 0.0j
        for t1 in self.terms:
            for t2 in self.terms:
                if t1.qubits == t2.qubits:
                    total += np.conj(t2.coeff) * t1.coeff * overlap(t2.center, t1.center)
        return float(np.real(total))

    def to_joint(self) -> "CoherentJointState":
        terms = [
            DyadTerm(
                t1.coeff * np.conj(t2.coeff), t1.qubits, t2.qubits, t1.center, t2.center
            )
            for t1 in self.terms
            for t2 in self.terms
        ]
        return CoherentJointState(self.n_qubits, terms).merged()


@dataclass
class CoherentJointState:
    """A density operator: finite sum of (qubit dyad x coherent dyad) terms."""

    n_qubits: int
    terms: list[DyadTerm] = field(default_factory=list)

    @classmethod
    def from_qubit_density(cls, rho: np.ndarray, n_qubits: int,
                           field_center: complex = 0.0j) -> "CoherentJointState":
        d = 2**n_qubits
        rho = np.asarray(rho, dtype=complex).reshape(d, d)
        terms = []
        for i in range(d):
            for j in range(d):
                if rho[i, j] == 0:
                    continue
                kets = tuple((i >> (n_qubits - 1 - q)) & 1 for q in range(n_qubits))
                bras = tuple((j >> (n_qubits - 1 - q)) & 1 for q in range(n_qubits))
                terms.append(DyadTerm(rho[i, j], kets, bras, field_center, field_center))
        return cls(n_qubits, terms)

    def merged(self, drop_tol: float = 1e-15) -> "CoherentJointState":
        acc: dict = {}
        for t in self.terms:
            key = (t.kets, t.bras, _round_key(t.fket), _round_key(t.fbra))
            if key in acc:
                old = acc[key]
                acc[key] = replace(old, coeff=old.coeff + t.coeff)
            else:
                acc[key] = t
        scale = max((abs(t.coeff) for t in acc.values()), default=1.0)
        terms = [t for t in acc.values() if abs(t.coeff) > drop_tol * max(scale, 1.0)]
        return CoherentJointState(self.n_qubits, terms)

    def trace(self) -> complex:
        total = 0.0j
        for t in self.terms:
            if t.kets == t.bras:
                total += t.coeff * overlap(t.fbra, t.fket)
        return complex(total)

    def trace_out_field(self) -> np.ndarray:
        """Dense qubit density matrix after tracing the field factor."""
        d = 2**self.n_qubits
        rho = np.zeros((d, d), dtype=complex)
        for t in self.terms:
            i = sum(b << (self.n_qubits - 1 - q) for q, b in enumerate(t.kets))
            j = sum(b << (self.n_qubits - 1 - q) for q, b in enumerate(t.bras))
            rho[i, j] += t.coeff * overlap(t.fbra, t.fket)
        return rho

    def trace_out_qubits(self, drop: Sequence[int]) -> "CoherentJointState":
        """Trace the given qubit indices, keeping the field symbolic."""
        drop = sorted(set(drop))
        keep = [q for q in range(self.n_qubits) if q not in drop]
        terms = []
        for t in self.terms:
            if all(t.kets[q] == t.bras[q] for q in drop):
                terms.append(
                    DyadTerm(
                        t.coeff,
                        tuple(t.kets[q] for q in keep),
                        tuple(t.bras[q] for q in keep),
                        t.fket,
                        t.fbra,
                    )
                )
        return CoherentJointState(len(keep), terms).merged()

    def field_basis(self) -> list[tuple[tuple[int, ...], tuple[float, float]]]:
        basis = []
        seen = set()
        for t in self.terms:
            for q, c in ((t.kets, t.fket), (t.bras, t.fbra)):
                key = (q, _round_key(c))
                if key not in seen:
                    seen.add(key)
                    basis.append(key)
        return basis

    def gram_spectrum(self) -> np.ndarray:
        """Eigenvalues of the represented operator via the Gram-matrix trick.

        For rho = sum c_kl |u_k><u_l| over a finite nonorthogonal basis, the
        nonzero spectrum equals the spectrum of C @ G with G the Gram matrix.
        """
        basis = self.field_basis()
        index = {key: k for k, key in enumerate(basis)}
        m = len(basis)
        coeff = np.zeros((m, m), dtype=complex)
        for t in self.terms:
            k = index[(t.kets, _round_key(t.fket))]
            l = index[(t.bras, _round_key(t.fbra))]
            coeff[k, l] += t.coeff
        gram = np.zeros((m, m), dtype=complex)
        centers = [complex(*key[1]) for key in basis]
        for k, (qk, _) in enumerate(basis):
            for l, (ql, _) in enumerate(basis):
                if qk == ql:
                    gram[k, l] = overlap(centers[k], centers[l])
        evals = np.linalg.eigvals(coeff @ gram)
        return np.real(evals)


def _apply_displacement_to_center(d: Displacement, center: complex) -> tuple[complex, complex]:
    """D |c> = phase * |c + beta>; returns (new_center, phase)."""
    cross = 0.5 * (d.center * np.conj(center) - np.conj(d.center) * center)
    return center + d.center, d.phase * complex(np.exp(cross))


def apply_gate_to_ket(state: CoherentKetState, gate: UdwGate, qubit: int) -> CoherentKetState:
    params = gate.params
    terms = gate.full_terms()
    out: list[KetTerm] = []
    for term in state.terms:
        q_in = term.qubits[qubit]
        for t in terms:
            branches = apply_payload_to_center(t.payload, params, term.center)
            for q_out in (0, 1):
                amp = t.qubit_op[q_out, q_in]
                if amp == 0:
                    continue
                qubits = term.qubits[:qubit] + (q_out,) + term.qubits[qubit + 1:]
                for b_amp, center in branches:
                    out.append(KetTerm(term.coeff * amp * b_amp, qubits, center))
    return CoherentKetState(state.n_qubits, out).merged()


def apply_gate(state: CoherentJointState, gate: UdwGate, qubit: int) -> CoherentJointState:
    """Conjugate the represented density operator by the gate: rho -> U rho U^+."""
    params = gate.params
    terms = gate.full_terms()
    out: list[DyadTerm] = []
    for term in state.terms:
        k_in = term.kets[qubit]
        b_in = term.bras[qubit]
        for t_l in terms:
            ket_branches = apply_payload_to_center(t_l.payload, params, term.fket)
            for t_r in terms:
                bra_branches = apply_payload_to_center(t_r.payload, params, term.fbra)
                for k_out in (0, 1):
                    amp_l = t_l.qubit_op[k_out, k_in]
                    if amp_l == 0:
                        continue
                    kets = term.kets[:qubit] + (k_out,) + term.kets[qubit + 1:]
                    for b_out in (0, 1):
                        amp_r = t_r.qubit_op[b_out, b_in]
                        if amp_r == 0:
                            continue
                        bras = term.bras[:qubit] + (b_out,) + term.bras[qubit + 1:]
                        base = term.coeff * amp_l * np.conj(amp_r)
                        for la, fket in ket_branches:
                            for ra, fbra in bra_branches:
                                out.append(
                                    DyadTerm(base * la * np.conj(ra), kets, bras, fket, fbra)
                                )
    return CoherentJointState(state.n_qubits, out).merged()


# ---------------------------------------------------------------------------
# Coherent-state projectors and the field-mediated SWAP
# ---------------------------------------------------------------------------

PROJECTOR_KINDS = ("P+a", "P-a", "PZ", "PX", "Ppi/2+", "Ppi/2-")


def coherent_projector(kind: str, params: ModelParams, n_max: int | None = None,
                       naive: bool = False, rep: FockRep | None = None) -> Operator:
    """Coherent-subspace projectors, biorthogonal by default.

    The dual (Gram-inverse) construction makes P_{+a}|+a> = |+a> and
    P_{+a}|-a> = 0 exact at any overlap; the naive flag reproduces the bare
    dyad form, which only projects in the eps -> 0 limit.
    """
    eps = params.epsilon
    if eps > 0.99:
        raise ValueError(f"overlap eps = {eps:.4g} > 0.99: projectors ill-conditioned")
    if rep is None:
        rep = fock_realize(params, n_max=n_max, beta_max=max(params.lambda_phi, 1e-9))
    plus = rep.coherent_vector(params.alpha_phi)
    minus = rep.coherent_vector(-params.alpha_phi)
    basis = np.stack([plus, minus], axis=1)
    if naive:
        duals = basis
    else:
        gram = basis.conj().T @ basis
        duals = basis @ np.linalg.inv(gram)
    bra_p, bra_m = duals[:, 0].conj(), duals[:, 1].conj()
    dyad = {
        "pp": np.outer(plus, bra_p),
        "mm": np.outer(minus, bra_m),
        "mp": np.outer(minus, bra_p),
        "pm": np.outer(plus, bra_m),
    }
    if kind == "P+a":
        mat = dyad["pp"]
    elif kind == "P-a":
        mat = dyad["mm"]
    elif kind == "PZ":
        mat = dyad["pp"] - dyad["mm"]
    elif kind == "PX":
        mat = dyad["mp"] + dyad["pm"]
    elif kind == "Ppi/2+":
        mat = dyad["pp"] + dyad["mp"] + dyad["pm"] + dyad["mm"]
    elif kind == "Ppi/2-":
        mat = dyad["pp"] - dyad["mp"] - dyad["pm"] + dyad["mm"]
    else:
        raise ValueError(f"unknown projector kind {kind!r}")
    return Operator(mat, (rep.n_max,))


@dataclass(frozen=True)
class SwapStage:
    """One stage of the field-mediated SWAP: qubit projectors paired with field payloads.

    Each entry pairs a 2x2 qubit operator with either a displacement payload
    ("disp", payload) or a coherent projector ("proj", kind).
    """

    entries: tuple[tuple[np.ndarray, str, object], ...]

    def matrix(self, params: ModelParams, rep: FockRep) -> np.ndarray:
        n = rep.n_max
        mat = np.zeros((2 * n, 2 * n), dtype=complex)
        for qop, tag, spec in self.entries:
            if tag == "disp":
                fmat = payload_matrix(spec, rep, params)
            elif tag == "proj":
                fmat = (
                    np.eye(n, dtype=complex)
                    if spec == "I"
                    else coherent_projector(spec, params, rep=rep).mat
                )
            else:
                raise ValueError(f"unknown stage entry tag {tag!r}")
            mat += np.kron(qop, fmat)
        return mat


def udw_swap(variant: str, params: ModelParams) -> list[SwapStage]:
    """Three-stage field-mediated SWAP: flip, middle CNOT-back, flip."""
    p0 = projector("z", +1).mat
    p1 = projector("z", -1).mat
    pxp = projector("x", +1).mat
    pxm = projector("x", -1).mat
    flip_stage = SwapStage(((p0, "proj", "I"), (p1, "proj", "PX")))
    middle = SwapStage(((pxp, "proj", "I"), (pxm, "proj", "PZ")))
    if variant == "exp-encode":
        first = SwapStage(((p0, "disp", (("phi", -1.0),)), (p1, "disp", (("phi", 1.0),))))
    elif variant == "plus-alpha-init":
        first = flip_stage
    else:
        raise ValueError(f"unknown SWAP variant {variant!r}")
    # Printed order: [flip][middle][first], first applied first.
    return [first, middle, flip_stage]


def udw_swap_fidelity(params: ModelParams, variant: str = "plus-alpha-init",
                      psi=None, n_max: int | None = None) -> float:
    """End-to-end qubit<->field exchange fidelity for the SWAP sequence.

    The qubit starts in psi, the field in |+alpha>; after the three stages the
    qubit should hold the field's logical |0> and the field should hold psi in
    the coherent basis.
    """
    if psi is None:
        psi = np.array([0.6, 0.8j], dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    rep = fock_realize(params, n_max=n_max, beta_max=max(2.5 * params.lambda_phi, 1e-9))
    stages = udw_swap(variant, params)
    plus = rep.coherent_vector(params.alpha_phi)
    minus = rep.coherent_vector(-params.alpha_phi)
    state = np.kron(psi, plus)
    for stage in stages:
        state = stage.matrix(params, rep) @ state
    state = state / np.linalg.norm(state)
    target = np.kron(np.array([1.0, 0.0], dtype=complex), psi[0] * plus + psi[1] * minus)
    target = target / np.linalg.norm(target)
    return float(abs(np.vdot(target, state)) ** 2)
