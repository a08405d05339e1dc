"""Coherent-state qubit encoding of a single effective field mode.

Two realizations of the same algebra live here.  The exact engine reduces
products of displacement operators to a single displacement times an
accumulated phase (the vertex-operator algebra); the truncated-Fock engine
builds the same operators as dense matrices and serves as an independent
oracle for everything computed symbolically.

Conventions: exp(i*phi) displaces the mode by alpha_phi = i*lambda_phi and
exp(i*Pi) by alpha_pi = -lambda_pi, so that the cross phase picked up when a
momentum displacement crosses a phi displacement equals +gamma.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .operators import Operator

TAIL_TOL = 1e-14
GUARD_LEVELS = 8


def overlap(beta: complex, alpha: complex) -> complex:
    """Inner product <beta|alpha> of two coherent states."""
    return complex(
        np.exp(-0.5 * abs(alpha) ** 2 - 0.5 * abs(beta) ** 2 + np.conj(beta) * alpha)
    )


@dataclass(frozen=True)
class Displacement:
    """A displacement with its accumulated product phase (unit modulus)."""

    center: complex
    phase: complex = 1.0 + 0.0j

    def __post_init__(self):
        if abs(abs(self.phase) - 1.0) > 1e-12:
            raise ValueError(f"phase modulus {abs(self.phase):.6g} is not 1")

    def compose_after(self, other: "Displacement") -> "Displacement":
        """The single displacement equal to ``self`` applied after ``other``."""
        cross = 0.5 * (self.center * np.conj(other.center) - np.conj(self.center) * other.center)
        return Displacement(
            self.center + other.center,
            self.phase * other.phase * complex(np.exp(cross)),
        )

    def inverse(self) -> "Displacement":
        return Displacement(-self.center, np.conj(self.phase))

    def vacuum_ev(self) -> complex:
        """<0| D |0> for the reduced displacement."""
        return self.phase * complex(np.exp(-0.5 * abs(self.center) ** 2))


def displacement_reduce(seq: Sequence[Displacement]) -> Displacement:
    """Reduce an operator product D1*D2*... (leftmost applied last) to one displacement.

    The accumulated phase is the product of the pairwise factors
    exp((b_i b_j^* - b_i^* b_j)/2) over i < j in list order.
    """
    out = Displacement(0.0j)
    for d in seq:
        # Fold from the left: out = out * d, with d acting first.
        out = out.compose_after(d)
    return out


@dataclass(frozen=True)
class ModelParams:
    """Couplings, constraint phase, and derived encoding constants.

    pi_mode selects how gates apply exp(i*x*Pi).  "eigenphase" (default)
    enacts the constraint Pi|nu alpha> = nu*gamma|nu alpha> exactly, with no
    center shift: the momentum operator acts as a unitary phase on the
    orthogonalized coherent lattice {nu * i*lambda_phi}.  "displacement"
    keeps the physical displacement by -lambda_pi, whose real-axis center
    offsets feed O(gamma) parasitic phases into later phi displacements.
    """

    lambda_phi: float
    lambda_pi: float
    gamma: float
    smear_norm: float
    omega: float = 1.0
    pi_mode: str = "eigenphase"
    pi_lattice_extent: int = 1

    def __post_init__(self):
        if self.lambda_phi < 0 or self.lambda_pi < 0:
            raise ValueError("couplings must be nonnegative")
        if self.smear_norm <= 0:
            raise ValueError("smear_norm must be positive")
        if abs(self.gamma - self.lambda_phi * self.lambda_pi) > 1e-12:
            raise ValueError("gamma must equal lambda_phi * lambda_pi")
        if self.pi_mode not in ("eigenphase", "displacement"):
            raise ValueError(f"unknown pi_mode {self.pi_mode!r}")
        if self.pi_lattice_extent < 1:
            raise ValueError("pi_lattice_extent must be at least 1")

    @property
    def alpha_phi(self) -> complex:
        return 1.0j * self.lambda_phi

    @property
    def alpha_pi(self) -> complex:
        return -self.lambda_pi + 0.0j

    @property
    def epsilon(self) -> float:
        """Residual overlap |<+alpha|-alpha>| = exp(-2 lambda_phi^2)."""
        return float(np.exp(-2.0 * self.lambda_phi**2))

    @property
    def constraint_ratio(self) -> float:
        """gamma^2 / <0|Pi^2|0> = lambda_phi^2; large values justify the eigenphase."""
        return self.lambda_phi**2

    def displacement(self, generator: str, coeff: float) -> Displacement:
        """The displacement realizing exp(i*coeff*phi) or exp(i*coeff*Pi)."""
        if generator == "phi":
            return Displacement(coeff * self.alpha_phi)
        if generator == "pi":
            return Displacement(coeff * self.alpha_pi)
        raise ValueError(f"unknown generator {generator!r}")


def default_smear_norm(sigma: float = 1.0) -> float:
    """The Gaussian-smearing constant sqrt((2*pi)^3) * sigma."""
    return float((2.0 * np.pi) ** 1.5 * sigma)


def make_model(
    lambda_phi: float,
    gamma: float = np.pi / 4.0,
    smear_norm: float | None = None,
    omega: float = 1.0,
    pi_mode: str = "eigenphase",
    pi_lattice_extent: int = 1,
    warn_constraint: bool = True,
) -> ModelParams:
    """Build model parameters from the coupling and the constraint phase.

    lambda_pi is derived as gamma / lambda_phi.  A warning is issued when the
    constraint ratio gamma^2/<0|Pi^2|0> falls below 10, where the
    displacement-mode momentum action deviates strongly from the eigenphase
    idealization.
    """
    if lambda_phi < 0:
        raise ValueError("lambda_phi must be nonnegative")
    if lambda_phi == 0.0:
        if gamma != 0.0:
            raise ValueError("lambda_phi = 0 requires gamma = 0")
        lambda_pi = 0.0
    else:
        lambda_pi = gamma / lambda_phi
    params = ModelParams(
        lambda_phi=float(lambda_phi),
        lambda_pi=float(lambda_pi),
        gamma=float(gamma),
        smear_norm=default_smear_norm() if smear_norm is None else float(smear_norm),
        omega=float(omega),
        pi_mode=pi_mode,
        pi_lattice_extent=int(pi_lattice_extent),
    )
    if warn_constraint and lambda_phi > 0 and gamma != 0.0 and params.constraint_ratio < 10.0:
        warnings.warn(
            f"constraint ratio {params.constraint_ratio:.3g} < 10; "
            "the momentum eigenphase approximation is weak at this coupling",
            stacklevel=2,
        )
    return params


# ---------------------------------------------------------------------------
# Truncated-Fock realization
# ---------------------------------------------------------------------------

def coherent_tail(n: int, abs_beta_sq: float) -> float:
    """Poisson tail mass sum_{k>n} e^{-|b|^2} |b|^{2k} / k!."""
    if abs_beta_sq == 0.0:
        return 0.0
    # Accumulate the head in log space to stay stable for large |b|^2.
    log_term = -abs_beta_sq
    head = math.exp(log_term)
    for k in range(1, n + 1):
        log_term += math.log(abs_beta_sq / k)
        head += math.exp(log_term)
    return max(0.0, 1.0 - head)


def adaptive_n_max(beta_max: float, tail_tol: float = TAIL_TOL, guard: int = GUARD_LEVELS) -> int:
    """Smallest truncation with coherent-state tail below tail_tol, plus guard levels."""
    mu = float(beta_max) ** 2
    n = 2
    while coherent_tail(n, mu) >= tail_tol:
        n += 1
        if n > 4096:
            raise ValueError(f"truncation beyond 4096 levels needed for |beta| = {beta_max}")
    return n + guard


@dataclass(frozen=True)
class FockRep:
    """Dense single-mode operators on a truncated Fock space."""

    n_max: int
    lambda_phi: float
    lambda_pi: float
    a: np.ndarray = field(repr=False, default=None)
    phi_op: np.ndarray = field(repr=False, default=None)
    pi_op: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError("n_max must be at least 2")
        a = np.diag(np.sqrt(np.arange(1, self.n_max, dtype=float)), k=1).astype(complex)
        adag = a.conj().T
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "phi_op", self.lambda_phi * (a + adag))
        object.__setattr__(self, "pi_op", 1.0j * self.lambda_pi * (adag - a))

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.n_max, dtype=complex)
        v[0] = 1.0
        return v

    def coherent_vector(self, beta: complex) -> np.ndarray:
        """Closed-form coherent state e^{-|b|^2/2} sum b^n/sqrt(n!) |n>."""
        n = np.arange(self.n_max)
        log_fact = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1, self.n_max)))))
        if beta == 0:
            v = np.zeros(self.n_max, dtype=complex)
            v[0] = 1.0
            return v
        amp = np.exp(-0.5 * abs(beta) ** 2 + n * np.log(complex(beta)) - 0.5 * log_fact)
        return amp.astype(complex)

    def exp_unitary(self, generator: np.ndarray) -> np.ndarray:
        """exp(i*G) for Hermitian G via eigendecomposition."""
        evals, evecs = np.linalg.eigh(0.5 * (generator + generator.conj().T))
        return (evecs * np.exp(1.0j * evals)) @ evecs.conj().T

    def displacement_matrix(self, generator: str, coeff: float) -> np.ndarray:
        """Matrix for exp(i*coeff*phi) or exp(i*coeff*Pi)."""
        if generator == "phi":
            return self.exp_unitary(coeff * self.phi_op)
        if generator == "pi":
            return self.exp_unitary(coeff * self.pi_op)
        raise ValueError(f"unknown generator {generator!r}")

    def displacement_of(self, beta: complex) -> np.ndarray:
        """Matrix for the abstract displacement D(beta) = exp(beta a^+ - beta^* a)."""
        adag = self.a.conj().T
        gen_h = -1.0j * (beta * adag - np.conj(beta) * self.a)  # i*G = beta a^+ - beta^* a
        return self.exp_unitary(gen_h)


def fock_realize(params: ModelParams, n_max: int | None = None, beta_max: float | None = None) -> FockRep:
    """Build the truncated-Fock realization, checking the coherent fidelity contract.

    When n_max is given explicitly it must accommodate the largest reachable
    displacement; otherwise the adaptive rule picks it.
    """
    if beta_max is None:
        beta_max = params.lambda_phi + params.lambda_pi
    required = adaptive_n_max(beta_max)
    if n_max is None:
        n_max = required
    elif n_max < required:
        raise ValueError(
            f"n_max = {n_max} too small for |beta| up to {beta_max:.3g}; need at least {required}"
        )
    return FockRep(n_max=n_max, lambda_phi=params.lambda_phi, lambda_pi=params.lambda_pi)


def fock_operator(rep: FockRep) -> Operator:
    """The identity wrapped with the Fock factor dimension, for bookkeeping."""
    return Operator(np.eye(rep.n_max, dtype=complex), (rep.n_max,))
