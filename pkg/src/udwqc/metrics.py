"""Coherent information, n=1 capacity, and diamond distance.

The diamond distance is computed by maximizing the trace norm of the extended
channel difference over pure bipartite inputs: a seeded Haar-random coarse
scan followed by derivative-free refinement of the best candidates.  An
analytic oracle for unitary channel pairs calibrates the optimizer.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .channels import Channel
from .operators import Operator, entropy_of_eigenvalues, hermitize, trace_norm_hermitian


@dataclass
class DiamondResult:
    value: float
    argmax_state: np.ndarray
    starts_used: int
    converged: bool
    seed: int | None = None

    def __float__(self) -> float:
        return self.value


@dataclass
class SweepRow:
    params: dict
    metric: str
    value: float
    backend: str
    seed: int | None = None
    flag: str = "ok"
    extra: dict = dc_field(default_factory=dict)


# ---------------------------------------------------------------------------
# Coherent information and capacity
# ---------------------------------------------------------------------------

def coherent_information(ch: Channel, rho_in: np.ndarray) -> float:
    """I_c = S(Phi(rho)) - S((id_R x Phi)(phi_rho)) with phi_rho a purification."""
    rho_in = np.asarray(rho_in, dtype=complex).reshape(ch.d_in, ch.d_in)
    if abs(np.trace(rho_in) - 1.0) > 1e-9 or np.max(np.abs(rho_in - rho_in.conj().T)) > 1e-9:
        raise ValueError("input is not a valid density matrix")
    evals, evecs = np.linalg.eigh(hermitize(rho_in))
    keep = evals > 1e-14
    probs = evals[keep]
    vecs = evecs[:, keep]
    rank = int(probs.size)
    # Purification |phi> = sum_k sqrt(p_k) |k>_R |v_k>.
    phi = np.zeros((rank, ch.d_in), dtype=complex)
    for k in range(rank):
        phi[k] = np.sqrt(probs[k]) * vecs[:, k]
    rho_joint = np.einsum("ri,sj->risj", phi, phi.conj()).reshape(
        rank * ch.d_in, rank * ch.d_in
    )
    out_joint = ch.apply_extended(rho_joint, ref_dim=rank)
    out = ch.apply(rho_in)
    s_out = entropy_of_eigenvalues(np.linalg.eigvalsh(hermitize(out)))
    s_joint = entropy_of_eigenvalues(np.linalg.eigvalsh(hermitize(out_joint)))
    return float(s_out - s_joint)


def encode_only_coherent_information(params) -> float:
    """Coherent information of the single controlled-unitary (encode-only) map.

    The reference qubit is maximally entangled with the sender; the sender is
    encoded onto the field by one z-phi controlled unitary and traced away.
    A Schmidt rank-one unitary makes the extended output separable, so the
    value never exceeds zero.  Entropies are evaluated exactly on the
    coherent-term Gram spectrum; no truncation enters.
    """
    from .channels import encode_only_state
    from .operators import entropy_of_eigenvalues

    bell = np.zeros((4, 4), dtype=complex)
    for i in (0, 3):
        for j in (0, 3):
            bell[i, j] = 0.5
    joint = encode_only_state(params, bell)  # reference qubit (x) field
    field_only = joint.trace_out_qubits([0])
    s_out = entropy_of_eigenvalues(field_only.gram_spectrum())
    s_joint = entropy_of_eigenvalues(joint.gram_spectrum())
    return float(s_out - s_joint)


def capacity_n1(ch: Channel, refine: bool = False) -> float:
    """Coherent information at the maximally entangled input (n=1 capacity proxy).

    With refine=True the input is also maximized over Schmidt-diagonal states
    (qubit channels only) and the larger value is reported.
    """
    d = ch.d_in
    rho_me = np.eye(d, dtype=complex) / d
    value = coherent_information(ch, rho_me)
    if refine:
        if d != 2:
            raise ValueError("refinement is implemented for qubit inputs only")

        def neg(theta: float) -> float:
            rho = np.diag([np.cos(theta) ** 2, np.sin(theta) ** 2]).astype(complex)
            return -coherent_information(ch, rho)

        res = minimize_scalar(neg, bounds=(1e-6, np.pi / 2 - 1e-6), method="bounded")
        value = max(value, -float(res.fun))
    return value


# ---------------------------------------------------------------------------
# Diamond distance
# ---------------------------------------------------------------------------

def _objective_factory(delta_tensor: np.ndarray, d_in: int, d_out: int):
    def objective(psi: np.ndarray) -> float:
        m = psi.reshape(d_in, d_in)
        out = np.einsum("ri,sj,abij->rasb", m, m.conj(), delta_tensor)
        out = out.reshape(d_in * d_out, d_in * d_out)
        return trace_norm_hermitian(out)

    return objective


def _batch_objective(delta_tensor: np.ndarray, d_in: int, d_out: int, psis: np.ndarray) -> np.ndarray:
    ms = psis.reshape(-1, d_in, d_in)
    out = np.einsum("nri,nsj,abij->nrasb", ms, ms.conj(), delta_tensor)
    out = out.reshape(-1, d_in * d_out, d_in * d_out)
    out = 0.5 * (out + np.conj(np.swapaxes(out, 1, 2)))
    evals = np.linalg.eigvalsh(out)
    return np.abs(evals).sum(axis=1)


def diamond_distance(ch1: Channel, ch2: Channel, n_coarse: int = 20000,
                     top_k: int = 20, seed: int = 0, step_tol: float = 1e-10,
                     max_iter: int = 5000) -> DiamondResult:
    """Max over pure bipartite states of ||(id x (Phi1 - Phi2))(psi)||_1.

    Deterministic for a fixed seed: Haar-random coarse sampling, then
    Nelder-Mead refinement of the top candidates on the real parametrization
    of the unit sphere.
    """
    if (ch1.d_in, ch1.d_out) != (ch2.d_in, ch2.d_out):
        raise ValueError("channel dimensions do not match")
    d_in, d_out = ch1.d_in, ch1.d_out
    delta = ch1.tensor - ch2.tensor
    dim = d_in * d_in
    rng = np.random.default_rng(seed)
    samples = rng.standard_normal((n_coarse, dim)) + 1j * rng.standard_normal((n_coarse, dim))
    samples /= np.linalg.norm(samples, axis=1, keepdims=True)
    values = _batch_objective(delta, d_in, d_out, samples)
    order = np.argsort(values)[::-1][:top_k]

    objective = _objective_factory(delta, d_in, d_out)

    def neg_from_real(x: np.ndarray) -> float:
        psi = x[:dim] + 1j * x[dim:]
        n = np.linalg.norm(psi)
        if n < 1e-12:
            return 0.0
        return -objective(psi / n)

    best_val = float(values[order[0]]) if len(order) else 0.0
    best_psi = samples[order[0]] if len(order) else samples[0]
    converged = True
    for idx in order:
        x0 = np.concatenate([samples[idx].real, samples[idx].imag])
        res = minimize(
            neg_from_real, x0, method="Nelder-Mead",
            options={"xatol": step_tol, "fatol": 1e-13, "maxiter": max_iter,
                     "maxfev": 4 * max_iter},
        )
        if not res.success:
            converged = False
        if -res.fun > best_val:
            best_val = -float(res.fun)
            psi = res.x[:dim] + 1j * res.x[dim:]
            best_psi = psi / np.linalg.norm(psi)
    return DiamondResult(best_val, best_psi, starts_used=len(order),
                         converged=converged, seed=seed)


def unitary_diamond_oracle(u, v) -> float:
    """Diamond distance between two unitary channels from the eigenvalue hull.

    2 sqrt(1 - nu^2) with nu the distance from the origin to the convex hull
    of the eigenvalues of V^+ U (zero when the hull contains the origin).
    """
    umat = u.mat if isinstance(u, Operator) else np.asarray(u, dtype=complex)
    vmat = v.mat if isinstance(v, Operator) else np.asarray(v, dtype=complex)
    for name, mat in (("U", umat), ("V", vmat)):
        dev = float(np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0]))))
        if dev > 1e-10:
            raise ValueError(f"{name} is not unitary (deviation {dev:.3g})")
    w = vmat.conj().T @ umat
    eigs = np.linalg.eigvals(w)
    eigs = eigs / np.abs(eigs)
    angles = np.sort(np.angle(eigs))
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * np.pi]]))
    max_gap = float(gaps.max())
    if max_gap <= np.pi:
        nu = 0.0
    else:
        arc = 2 * np.pi - max_gap
        nu = float(np.cos(arc / 2.0))
    return float(2.0 * np.sqrt(max(0.0, 1.0 - nu * nu)))


# ---------------------------------------------------------------------------
# Parameter sweeps
# ---------------------------------------------------------------------------

def sweep_capacity(lambdas, gamma: float = np.pi / 4.0, bob_init=None,
                   backend: str = "symbolic", seed: int | None = None) -> list[SweepRow]:
    from .channels import build_channel
    from .field import make_model

    rows = []
    for lam in lambdas:
        ch = build_channel("FieldQST", make_model(lam, gamma, warn_constraint=False),
                           bob_init=bob_init, backend=backend)
        rows.append(
            SweepRow({"lambda_phi": float(lam), "gamma": float(gamma)}, "capacity",
                     capacity_n1(ch), backend, seed)
        )
    return rows


DIAMOND_PAIRS = ("qst", "cnot1", "cnot2q", "hadamard")


def build_diamond_pair(pair: str, params, bob_init=None, backend: str = "symbolic",
                       decode_form: str = "adjoint") -> tuple[Channel, Channel]:
    from .channels import build_channel

    if pair == "qst":
        return (
            build_channel("FieldQST", params, bob_init=bob_init, backend=backend,
                          decode_form=decode_form),
            build_channel("QubitQST"),
        )
    if pair == "cnot1":
        return (
            build_channel("FieldCNOT1", params, bob_init=bob_init, backend=backend),
            build_channel("QubitCNOT1"),
        )
    if pair == "cnot2q":
        return (
            build_channel("FieldCNOT2q", params, bob_init=bob_init, backend=backend,
                          decode_form=decode_form),
            build_channel("QubitCNOT2q", bob_init=bob_init),
        )
    if pair == "hadamard":
        return (
            build_channel("FieldHadamard", params, backend=backend),
            build_channel("QubitHadamard"),
        )
    raise ValueError(f"unknown diamond pair {pair!r}")


def sweep_diamond(pair: str, lambdas, gamma: float = np.pi / 4.0, bob_init=None,
                  backend: str = "symbolic", seed: int = 0, n_coarse: int = 20000,
                  top_k: int = 20, decode_form: str = "adjoint") -> list[SweepRow]:
    from .field import make_model

    rows = []
    for k, lam in enumerate(lambdas):
        params = make_model(lam, gamma, warn_constraint=False)
        ch1, ch2 = build_diamond_pair(pair, params, bob_init, backend, decode_form)
        point_seed = (seed + 1000003 * k) % (2**63)
        res = diamond_distance(ch1, ch2, n_coarse=n_coarse, top_k=top_k, seed=point_seed)
        rows.append(
            SweepRow({"lambda_phi": float(lam), "gamma": float(gamma)}, "diamond",
                     res.value, backend, seed,
                     extra={"starts": res.starts_used, "converged": res.converged})
        )
    return rows


def sweep(metric: str, grid, pair: str = "qst", gamma: float = np.pi / 4.0,
          bob_init=None, backend: str = "symbolic", seed: int = 0,
          **kwargs) -> list[SweepRow]:
    """One row per grid point for the named metric; seeds derive per point."""
    grid = list(grid)
    if not grid:
        raise ValueError("sweep grid must be nonempty")
    if metric == "capacity":
        return sweep_capacity(grid, gamma=gamma, bob_init=bob_init,
                              backend=backend, seed=seed)
    if metric == "diamond":
        return sweep_diamond(pair, grid, gamma=gamma, bob_init=bob_init,
                             backend=backend, seed=seed, **kwargs)
    raise ValueError(f"unknown sweep metric {metric!r}")
