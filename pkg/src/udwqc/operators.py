"""Dense complex-matrix algebra with tensor-factor bookkeeping.

Everything downstream (gates, channels, metrics) is built on the
:class:`Operator` value type: a square complex matrix together with the
ordered list of tensor-factor dimensions whose product is the matrix
dimension.  Carrying the factor dimensions explicitly is what makes partial
traces over mixed qubit/Fock factors unambiguous.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
EIGENVALUE_CLAMP = 1e-10


@dataclass(frozen=True)
class Operator:
    """A square complex matrix with ordered tensor-factor dimensions."""

    mat: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        d = int(np.prod(self.dims))
        if mat.shape != (d, d):
            raise ValueError(
                f"matrix shape {mat.shape} does not match factor dims {self.dims}"
            )

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def from_mat(cls, mat: np.ndarray, dims: Sequence[int] | None = None) -> "Operator":
        mat = np.asarray(mat, dtype=complex)
        if dims is None:
            dims = (mat.shape[0],)
        return cls(mat, tuple(dims))

    def is_unitary(self, tol: float = 1e-12) -> bool:
        d = self.dim
        return float(np.max(np.abs(self.mat.conj().T @ self.mat - np.eye(d)))) < tol

    def is_density(self, tol: float = HERMITICITY_TOL) -> bool:
        if float(np.max(np.abs(self.mat - self.mat.conj().T))) >= tol:
            return False
        if abs(np.trace(self.mat) - 1.0) >= TRACE_TOL * 10 + tol:
            return False
        evals = np.linalg.eigvalsh(hermitize(self.mat))
        return bool(evals.min() >= -EIGENVALUE_CLAMP)

    def dagger(self) -> "Operator":
        return Operator(self.mat.conj().T, self.dims)


@dataclass(frozen=True)
class Spectrum:
    """Eigen-decomposition of a Hermitian operator, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitize(mat: np.ndarray) -> np.ndarray:
    """Symmetrize away the tiny anti-Hermitian part numerical traces produce."""
    return 0.5 * (mat + mat.conj().T)


def kron(a: Operator, b: Operator) -> Operator:
    """Kronecker product; factor dims concatenate."""
    return Operator(np.kron(a.mat, b.mat), a.dims + b.dims)


def kron_all(ops: Iterable[Operator]) -> Operator:
    ops = list(ops)
    out = ops[0]
    for op in ops[1:]:
        out = kron(out, op)
    return out


def partial_trace(a: Operator, keep: Sequence[int]) -> Operator:
    """Trace out all factors not in ``keep``; kept factors stay in original order.

    Raises ValueError for an empty keep-set (use a scalar trace instead).
    """
    keep = sorted(set(int(k) for k in keep))
    n = len(a.dims)
    if not keep:
        raise ValueError("empty keep-set: use numpy.trace for the scalar trace")
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} factors")
    dims = a.dims
    tensor = a.mat.reshape(dims + dims)
    # Contract each traced factor's ket index with its bra index.
    traced = [i for i in range(n) if i not in keep]
    for count, i in enumerate(traced):
        # After each trace two axes disappear; recompute the axis positions.
        offset = i - count
        nleft = n - count
        tensor = np.trace(tensor, axis1=offset, axis2=offset + nleft)
    kept_dims = tuple(dims[k] for k in keep)
    d = int(np.prod(kept_dims))
    return Operator(tensor.reshape(d, d), kept_dims)


def trace_norm(a: Operator | np.ndarray) -> float:
    """Sum of singular values (Schatten 1-norm)."""
    mat = a.mat if isinstance(a, Operator) else np.asarray(a)
    return float(np.linalg.svd(mat, compute_uv=False).sum())


def trace_norm_hermitian(mat: np.ndarray) -> float:
    """Trace norm of a Hermitian matrix via its eigenvalues (faster than SVD)."""
    return float(np.abs(np.linalg.eigvalsh(hermitize(mat))).sum())


def hermitian_spectrum(a: Operator | np.ndarray) -> Spectrum:
    mat = a.mat if isinstance(a, Operator) else np.asarray(a)
    evals, evecs = np.linalg.eigh(hermitize(mat))
    order = np.argsort(evals)[::-1]
    return Spectrum(evals[order], evecs[:, order])


def entropy(rho: Operator | np.ndarray, check: bool = True) -> float:
    """Von Neumann entropy in bits, with 0*log(0) = 0.

    Eigenvalues in [-1e-10, 0) are clamped to zero; a density-invariant
    violation beyond tolerance raises ValueError.
    """
    mat = rho.mat if isinstance(rho, Operator) else np.asarray(rho)
    if check:
        if float(np.max(np.abs(mat - mat.conj().T))) > 1e-8:
            raise ValueError("entropy input is not Hermitian")
        if abs(np.trace(mat) - 1.0) > 1e-8:
            raise ValueError(f"entropy input has trace {np.trace(mat):.6g}, expected 1")
    evals = np.linalg.eigvalsh(hermitize(mat))
    if check and evals.min() < -1e-8:
        raise ValueError(f"entropy input has negative eigenvalue {evals.min():.3g}")
    evals = np.where((evals > -EIGENVALUE_CLAMP) & (evals < 0.0), 0.0, evals)
    evals = evals[evals > 0.0]
    return float(-(evals * np.log2(evals)).sum())


def entropy_of_eigenvalues(evals: np.ndarray) -> float:
    """Entropy in bits of a probability-like eigenvalue list (tiny negatives clamped)."""
    evals = np.real(np.asarray(evals))
    evals = np.where((evals > -EIGENVALUE_CLAMP) & (evals < 0.0), 0.0, evals)
    evals = evals[evals > 0.0]
    return float(-(evals * np.log2(evals)).sum())
