"""Dense complex linear algebra shared by the simulator and coherence modules.

Everything here works on plain numpy arrays (complex128).  Matrices are
square unless noted.  Tolerances are module constants so the test suite and
the CLI agree on what "equal" means.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_CLAMP = 1e-10
RECON_TOL = 1e-9
UNITARY_TOL = 1e-10
# eigenvalues below this are treated as exact zeros by the coherence code
ZERO_EIG_TOL = 1e-12
DEFAULT_MAX_DIM = 4096


class DimensionLimitError(RuntimeError):
    """Raised when a joint dimension exceeds the configured maximum."""


def check_dimension(dim: int, max_dim: int = DEFAULT_MAX_DIM) -> int:
    if dim > max_dim:
        raise DimensionLimitError(f"dimension limit exceeded: {dim} > {max_dim}")
    return dim


def as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"shape {m.shape} is not square")
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError("non-finite entries")
    return m


def tensor_product(a, b, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
    """Kronecker product with the joint-dimension guard applied."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    check_dimension(a.shape[0] * b.shape[0], max_dim)
    return np.kron(a, b)


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m, dtype=complex)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    u = as_matrix(u)
    eye = np.eye(u.shape[0])
    return bool(np.max(np.abs(u @ u.conj().T - eye)) <= tol)


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues sorted descending; eigenvector columns aligned with them.

    Ties keep the order numpy produced, so repeated calls on the same matrix
    give identical output.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eigensystem(m, tol: float = HERMITIAN_TOL) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix with deterministic ordering."""
    m = as_matrix(m)
    if not is_hermitian(m, tol):
        raise ValueError("not hermitian")
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    order = np.argsort(-w, kind="stable")
    return EigenSystem(w[order], v[:, order])


def psd_sqrt(rho, clamp: float = PSD_CLAMP) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues in [-clamp, 0) are clamped to zero; anything below -clamp is
    rejected as genuinely negative.
    """
    es = hermitian_eigensystem(rho)
    w = es.eigenvalues
    if w.min() < -clamp:
        raise ValueError("not PSD")
    root = (es.eigenvectors * np.sqrt(np.clip(w, 0.0, None))) @ es.eigenvectors.conj().T
    return (root + root.conj().T) / 2.0


def trace_product(a, b) -> complex:
    """tr(a @ b) without forming the product matrix."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0] or a.shape[0] != b.shape[1]:
        raise ValueError(f"shape mismatch {a.shape} x {b.shape}")
    return complex(np.einsum("ij,ji->", a, b))


def is_density_matrix(rho, tol: float = 1e-8) -> bool:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    if not is_hermitian(rho, tol):
        return False
    if abs(np.trace(rho).real - 1.0) > tol:
        return False
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
    return bool(w.min() >= -tol)
