"""Bosonic-dephasing reformulation of the field channel.

The coupling-and-smearing data is repackaged as a dephasing strength, which
gives closed forms for the dephased overlap and the cross-talk noise factor,
an effective coupling that folds cross-talk into the bare coupling, and the
environment-dephasing null result.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.integrate import quad

from .field import ModelParams, default_smear_norm, fock_realize, make_model
from .metrics import SweepRow, capacity_n1
from .operators import Operator, partial_trace


class DomainError(ValueError):
    """The as-printed effective-coupling expression went imaginary."""

    def __init__(self, radicand: float, message: str):
        super().__init__(message)
        self.radicand = radicand


@dataclass(frozen=True)
class NoiseParams:
    """Dephasing strength, coherent amplitude, cross-talk multiple, environment rate."""

    gamma_phi: float = 1.0
    alpha_sq: float = 1.0
    b: float = 0.0
    gamma_E: float = 0.0
    smear_norm: float = dc_field(default_factory=default_smear_norm)

    def __post_init__(self):
        if self.gamma_phi < 0 or self.b < 0 or self.gamma_E < 0:
            raise ValueError("noise rates must be nonnegative")
        if self.alpha_sq <= 0:
            raise ValueError("alpha_sq must be positive")
        if self.smear_norm <= 0:
            raise ValueError("smear_norm must be positive")

    @property
    def gamma_n(self) -> float:
        """Cross-talk dephasing rate b^2 * gamma_phi."""
        return self.b**2 * self.gamma_phi


def dephased_overlap(p: NoiseParams) -> float:
    """|<+sqrt(g)a|-sqrt(g)a>| = exp(-2 gamma_phi |alpha|^2)."""
    return float(np.exp(-2.0 * p.gamma_phi * p.alpha_sq))


def crosstalk_factor(p: NoiseParams, method: str = "closed") -> float:
    """Coherent-state inner product after cross-talk dephasing.

    closed:      exp(-2 g a / (1 + 4 a b^2 g)) / sqrt(1 + 4 a b^2 g)
    quadrature:  Gaussian average of exp(-2 a (phi + sqrt(g))^2) with the
                 kick phi ~ N(0, b^2 g); agrees with the closed form to 1e-8.
    """
    g, a = p.gamma_phi, p.alpha_sq
    if method == "closed":
        x = 1.0 + 4.0 * a * p.b**2 * g
        return float(np.exp(-2.0 * g * a / x) / np.sqrt(x))
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    var = p.gamma_n
    if var == 0.0:
        return dephased_overlap(p)

    def integrand(phi: float) -> float:
        weight = np.exp(-0.5 * phi**2 / var) / np.sqrt(2.0 * np.pi * var)
        return weight * np.exp(-2.0 * a * (phi + np.sqrt(g)) ** 2)

    value, abserr = quad(integrand, -np.inf, np.inf, epsabs=1e-12, epsrel=1e-12)
    if abserr > 1e-9:
        raise RuntimeError(f"cross-talk quadrature did not converge (abserr {abserr:.3g})")
    return float(value)


def effective_coupling(lambda_phi: float, p: NoiseParams, sign: str = "as-printed") -> float:
    """Cross-talk folded into the coupling: the lambda that reproduces the noisy overlap.

    The as-printed variant carries a minus sign before the log term and can
    go imaginary; quadrature-matched uses the sign and prefactor obtained by
    equating exp(-2 l^2 a / K) to the closed-form cross-talk factor.  A
    negative radicand raises DomainError naming the radicand.
    """
    if lambda_phi <= 0:
        raise ValueError("lambda_phi must be positive")
    k = p.smear_norm
    a = p.alpha_sq
    x = 4.0 * p.b**2 * a * lambda_phi**2 / k
    if sign == "as-printed":
        radicand = lambda_phi**2 / (1.0 + x) - (k / (2.0 * a)) * np.log1p(x)
    elif sign == "quadrature-matched":
        radicand = lambda_phi**2 / (1.0 + x) + (k / (4.0 * a)) * np.log1p(x)
    else:
        raise ValueError(f"unknown sign variant {sign!r}")
    if radicand < 0.0:
        raise DomainError(
            float(radicand),
            f"effective coupling undefined: radicand {radicand:.6g} < 0 "
            f"(lambda_phi={lambda_phi}, b={p.b}, sign={sign})",
        )
    return float(np.sqrt(radicand))


# ---------------------------------------------------------------------------
# Environment dephasing
# ---------------------------------------------------------------------------

def dephasing_mask(n_max: int, gamma_e: float, form: str = "quadratic") -> np.ndarray:
    """Fock-basis suppression factors for number-operator environment dephasing.

    quadratic (default) is the Gaussian characteristic function
    exp(-gamma_E (n-m)^2 / 2); "sqrt" reproduces the printed
    exp(-(1/2)(n-m)^2 sqrt(gamma_E)) reading.
    """
    n = np.arange(n_max)
    diff = n[:, None] - n[None, :]
    if form == "quadratic":
        return np.exp(-0.5 * gamma_e * diff.astype(float) ** 2)
    if form == "sqrt":
        return np.exp(-0.5 * diff.astype(float) ** 2 * np.sqrt(gamma_e))
    raise ValueError(f"unknown dephasing form {form!r}")


@dataclass
class DephasingReport:
    gamma_e: float
    insert_point: str
    form: str
    capacity_clean: float
    capacity_dephased: float
    diagonal_deviation: float

    @property
    def capacity_difference(self) -> float:
        return abs(self.capacity_dephased - self.capacity_clean)


def _field_qst_capacity_with_mask(params: ModelParams, gamma_e: float,
                                  insert_point: str, form: str,
                                  bob_init=None) -> tuple[float, float]:
    """Fock-backend FieldQST capacity with the dephasing map inserted.

    Returns (capacity, max deviation of the field diagonals at insertion).
    """
    from .channels import PLUS_Y, _as_density, _field_gate_sequence, _GateApplication, channel_from_apply
    from .udw import fock_reach, payload_matrix

    apps, n_qubits, out_qubit = _field_gate_sequence("FieldQST", params, "adjoint")
    bob_rho = _as_density(PLUS_Y if bob_init is None else bob_init)
    beta_max = fock_reach(params, sum(app.gate.max_center() for app in apps))
    rep = fock_realize(params, beta_max=max(beta_max, 1e-9))
    n = rep.n_max
    dims = (2, 2, n)
    embedded = []
    for app in apps:
        mat = np.zeros((4 * n, 4 * n), dtype=complex)
        for t in app.gate.full_terms():
            factors = [
                t.qubit_op if q == app.qubit else np.eye(2, dtype=complex)
                for q in range(2)
            ]
            factors.append(payload_matrix(t.payload, rep, params))
            term = factors[0]
            for f in factors[1:]:
                term = np.kron(term, f)
            mat += term
        embedded.append(mat)
    mask = dephasing_mask(n, gamma_e, form)
    vac = np.zeros((n, n), dtype=complex)
    vac[0, 0] = 1.0
    diag_dev = 0.0

    def apply_mask(rho: np.ndarray) -> np.ndarray:
        nonlocal diag_dev
        tensor = rho.reshape(2, 2, n, 2, 2, n)
        before = np.einsum("abnabn->n", tensor).copy()
        tensor = tensor * mask[None, None, :, None, None, :]
        after = np.einsum("abnabn->n", tensor)
        diag_dev = max(diag_dev, float(np.max(np.abs(before - after))))
        return tensor.reshape(4 * n, 4 * n)

    def apply(rho_a: np.ndarray) -> np.ndarray:
        rho = np.kron(np.kron(rho_a, bob_rho), vac)
        rho = embedded[0] @ rho @ embedded[0].conj().T
        if insert_point == "post_encode":
            rho = apply_mask(rho)
        rho = embedded[1] @ rho @ embedded[1].conj().T
        if insert_point == "pre_trace":
            rho = apply_mask(rho)
        return partial_trace(Operator(rho, dims), keep=[out_qubit]).mat

    ch = channel_from_apply(apply, 2, 2, recipe={"kind": "FieldQST+dephasing"},
                            backend="fock")
    return capacity_n1(ch), diag_dev


def environment_dephasing_check(gamma_e: float, params: ModelParams,
                                insert_point: str = "pre_trace",
                                form: str = "quadratic",
                                bob_init=None) -> DephasingReport:
    """Insert number-operator dephasing on the field and report the capacity shift.

    The environment acts on the final state of the field, immediately before
    the field is traced out; there the map only suppresses Fock off-diagonals
    the trace never sees, so the capacity change vanishes identically.  The
    post_encode insertion point is also available and does disturb transfer.
    """
    if insert_point not in ("pre_trace", "post_encode"):
        raise ValueError(f"unknown insert_point {insert_point!r}")
    cap_noisy, diag_dev = _field_qst_capacity_with_mask(
        params, gamma_e, insert_point, form, bob_init
    )
    cap_clean, _ = _field_qst_capacity_with_mask(params, 0.0, insert_point, form, bob_init)
    return DephasingReport(gamma_e, insert_point, form, cap_clean, cap_noisy, diag_dev)


# ---------------------------------------------------------------------------
# Noisy capacity sweeps
# ---------------------------------------------------------------------------

def noisy_capacity(lambdas, b: float, noise: NoiseParams | None = None,
                   gamma: float = np.pi / 4.0, sign: str = "as-printed",
                   bob_init=None, backend: str = "symbolic") -> list[SweepRow]:
    """capacity_n1 of FieldQST at the effective coupling lambda_{phi,b}.

    Points where the effective coupling is undefined are emitted with the
    domain-error flag rather than dropped.
    """
    from .channels import build_channel

    base = noise or NoiseParams()
    rows = []
    for lam in lambdas:
        p = NoiseParams(gamma_phi=base.gamma_phi, alpha_sq=base.alpha_sq, b=b,
                        gamma_E=base.gamma_E, smear_norm=base.smear_norm)
        try:
            lam_eff = effective_coupling(float(lam), p, sign=sign) if b > 0 else float(lam)
        except DomainError as err:
            rows.append(SweepRow({"lambda_phi": float(lam), "b": b}, "capacity",
                                 float("nan"), backend, flag="domain-error",
                                 extra={"lambda_eff": float("nan"),
                                        "radicand": err.radicand}))
            continue
        ch = build_channel("FieldQST", make_model(lam_eff, gamma, warn_constraint=False),
                           bob_init=bob_init, backend=backend)
        rows.append(SweepRow({"lambda_phi": float(lam), "b": b}, "capacity",
                             capacity_n1(ch), backend,
                             extra={"lambda_eff": lam_eff}))
    return rows
