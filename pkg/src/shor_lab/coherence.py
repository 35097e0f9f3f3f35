"""Metric-adjusted skew information and the channels the simulator measures.

The quantifier family is indexed by an operator monotone function f with
f(0) > 0 and x f(1/x) = f(x).  Three evaluation routes exist on purpose:
the spectral double sum (any f, any state), the closed pure-state form
(f-independent), and the Wigner-Yanase trace form.  They are cross-checked
against each other in the verification suite, so none of them may be
expressed in terms of another.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import pi
from typing import Callable, List, Optional, Sequence

import numpy as np

from . import numerics, shor
from .numerics import ZERO_EIG_TOL


@dataclass(frozen=True)
class OperatorMonotoneFunction:
    """A metric-defining function f together with its boundary value f(0).

    Validation runs at construction: positivity of f(0), the symmetry
    x f(1/x) = f(x) on a logarithmic grid, and monotonicity.
    """

    name: str
    fn: Callable[[float], float]
    f0: float

    def __post_init__(self):
        if not self.f0 > 0.0:
            raise ValueError(f"index: f(0)={self.f0} must be positive")
        grid = np.logspace(-6.0, 6.0, 25)
        vals = np.array([float(self.fn(x)) for x in grid])
        sym = np.array([x * float(self.fn(1.0 / x)) for x in grid])
        scale = np.maximum(1.0, np.abs(vals))
        if np.max(np.abs(vals - sym) / scale) > 1e-10:
            raise ValueError(f"index: {self.name} violates x f(1/x) = f(x)")
        if np.any(np.diff(vals) < -1e-12 * scale[1:]):
            raise ValueError(f"index: {self.name} is not nondecreasing")

    def __call__(self, x: float) -> float:
        return float(self.fn(x))


def wy_function() -> OperatorMonotoneFunction:
    """Wigner-Yanase: f(x) = ((1 + sqrt(x)) / 2)^2, f(0) = 1/4."""
    return OperatorMonotoneFunction("wy", lambda x: ((1.0 + np.sqrt(x)) / 2.0) ** 2, 0.25)


def sld_function() -> OperatorMonotoneFunction:
    """Symmetric logarithmic derivative metric: f(x) = (1 + x) / 2, f(0) = 1/2."""
    return OperatorMonotoneFunction("sld", lambda x: (1.0 + x) / 2.0, 0.5)


def morozova_chentsov(f: OperatorMonotoneFunction, x: float, y: float) -> float:
    """c_f(x, y) = 1 / (y f(x/y)) with the continuous boundary extension
    c_f(x, 0) = 1 / (x f(0)).  Eigenvalues at or below the zero threshold
    count as exact zeros; c_f(0, 0) is undefined."""
    x = 0.0 if x <= ZERO_EIG_TOL else float(x)
    y = 0.0 if y <= ZERO_EIG_TOL else float(y)
    if x == 0.0 and y == 0.0:
        raise ValueError("undefined")
    if y == 0.0:
        return 1.0 / (x * f.f0)
    if x == 0.0:
        return 1.0 / (y * f.f0)
    return 1.0 / (y * f(x / y))


# ---------------------------------------------------------------------------
# channels


class QuantumChannel:
    """Linear map on d x d matrices, extended off the state manifold."""

    dim: int

    def apply(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def kraus_operators(self) -> List[np.ndarray]:
        raise NotImplementedError

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.dim, self.dim):
            raise ValueError(f"shape {x.shape} != ({self.dim}, {self.dim})")
        return x


class KrausChannel(QuantumChannel):
    def __init__(self, ops: Sequence[np.ndarray]):
        ops = [numerics.as_matrix(k) for k in ops]
        if not ops:
            raise ValueError("index: empty Kraus list")
        self.dim = ops[0].shape[0]
        total = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(total - np.eye(self.dim))) > 1e-9:
            raise ValueError("not completely positive trace preserving")
        self.ops = ops

    def apply(self, x):
        x = self._check(x)
        return sum(k @ x @ k.conj().T for k in self.ops)

    def kraus_operators(self):
        return list(self.ops)


class UnitaryChannel(QuantumChannel):
    def __init__(self, u: np.ndarray):
        u = numerics.as_matrix(u)
        if not numerics.is_unitary(u):
            raise ValueError("not unitary")
        self.dim = u.shape[0]
        self.u = u

    def apply(self, x):
        x = self._check(x)
        return self.u @ x @ self.u.conj().T

    def kraus_operators(self):
        return [self.u]


class MeasurementChannel(QuantumChannel):
    """Von Neumann measurement in the computational basis: X -> diag(X)."""

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError(f"index: dim={dim}")
        self.dim = dim

    def apply(self, x):
        x = self._check(x)
        return np.diag(np.diagonal(x)).astype(complex)

    def kraus_operators(self):
        ops = []
        for i in range(self.dim):
            p = np.zeros((self.dim, self.dim), dtype=complex)
            p[i, i] = 1.0
            ops.append(p)
        return ops


class DepolarizingChannel(QuantumChannel):
    """X -> lam V X V^dag + (1 - lam) tr(X) I / d.

    The tr(X) coefficient extends the map linearly off the state manifold,
    so identity and square-root arguments are well defined.  lam may be
    negative down to -1/(d^2 - 1).
    """

    def __init__(self, dim: int, lam: float, v: Optional[np.ndarray] = None):
        if dim < 2:
            raise ValueError(f"index: dim={dim}")
        lo = -1.0 / (dim**2 - 1)
        if not lo - 1e-15 <= lam <= 1.0 + 1e-15:
            raise ValueError(f"index: lam={lam} outside [{lo}, 1]")
        if v is None:
            v = np.eye(dim, dtype=complex)
        v = numerics.as_matrix(v)
        if v.shape[0] != dim:
            raise ValueError(f"shape {v.shape} != ({dim}, {dim})")
        if not numerics.is_unitary(v):
            raise ValueError("not unitary")
        self.dim = dim
        self.lam = float(lam)
        self.v = v

    def apply(self, x):
        x = self._check(x)
        mixed = np.trace(x) / self.dim * np.eye(self.dim)
        return self.lam * (self.v @ x @ self.v.conj().T) + (1.0 - self.lam) * mixed

    def kraus_operators(self):
        raise ValueError("no finite Kraus form configured")


class ComposedChannel(QuantumChannel):
    """Channels applied in sequence, first element first."""

    def __init__(self, parts: Sequence[QuantumChannel]):
        parts = list(parts)
        if not parts:
            raise ValueError("index: empty composition")
        self.dim = parts[0].dim
        if any(p.dim != self.dim for p in parts):
            raise ValueError("shape mismatch in composition")
        self.parts = parts

    def apply(self, x):
        x = self._check(x)
        for p in self.parts:
            x = p.apply(x)
        return x

    def kraus_operators(self):
        ops = [np.eye(self.dim, dtype=complex)]
        for p in self.parts:
            ops = [k2 @ k1 for k2 in p.kraus_operators() for k1 in ops]
        return ops


def measurement_channel(d: int) -> MeasurementChannel:
    return MeasurementChannel(d)


def shor_unitary_channel(inst: shor.ShorInstance) -> UnitaryChannel:
    """Conjugation by the full algorithm unitary: modular exponentiation
    followed by the inverse Fourier transform on the first register."""
    f_dag = numerics.tensor_product(shor.inverse_qft(inst.Q), np.eye(inst.b_dim))
    return UnitaryChannel(f_dag @ shor.modexp_unitary(inst))


def depolarizing_channel(d: int, lam: float,
                         v: Optional[np.ndarray] = None) -> DepolarizingChannel:
    return DepolarizingChannel(d, lam, v)


def ramp_phases(Q: int, divisor: int = 1) -> np.ndarray:
    """Dephasing-gate phases theta_x = pi x / (divisor * Q).

    divisor 1 moves every outcome peak one step up; divisor 6 detunes the
    peaks by a sixth of a bin, which keeps a provable success floor.
    """
    return pi * np.arange(Q) / (divisor * Q)


def noisy_shor_channel(inst: shor.ShorInstance, lam: float,
                       phases: Sequence[float]) -> ComposedChannel:
    """Depolarizing noise around the modular-exponentiation step.

    The noise unitary is W tensor I with W = diag(exp(i theta_x)); the same
    depolarizing map acts before and after modular exponentiation, then the
    inverse Fourier transform closes the pipeline.
    """
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (inst.Q,):
        raise ValueError(f"shape {phases.shape} != ({inst.Q},)")
    w = np.diag(np.exp(1j * phases))
    v = numerics.tensor_product(w, np.eye(inst.b_dim))
    dep = DepolarizingChannel(inst.d, lam, v)
    u = UnitaryChannel(shor.modexp_unitary(inst))
    f_dag = UnitaryChannel(numerics.tensor_product(shor.inverse_qft(inst.Q),
                                                   np.eye(inst.b_dim)))
    return ComposedChannel([dep, u, dep, f_dag])


def noisy_outcome_distribution(inst: shor.ShorInstance, lam: float,
                               phases: Sequence[float],
                               alpha: Optional[Sequence[complex]] = None) -> np.ndarray:
    """First-register distribution of the noisy pipeline output."""
    if alpha is None:
        spec = shor.Hadamard()
    else:
        spec = shor.Amplitudes.of(alpha)
    psi = shor.prepare_initial(inst, spec)
    rho = np.outer(psi, psi.conj())
    out = noisy_shor_channel(inst, lam, phases).apply(rho)
    return shor.outcome_distribution(inst, out)


# ---------------------------------------------------------------------------
# quantifiers


def _state_eigensystem(rho) -> numerics.EigenSystem:
    rho = numerics.as_matrix(rho)
    if not numerics.is_density_matrix(rho):
        raise ValueError("not a state")
    es = numerics.hermitian_eigensystem(rho)
    lam = np.where(es.eigenvalues < ZERO_EIG_TOL, 0.0, es.eigenvalues)
    return numerics.EigenSystem(lam, es.eigenvectors)


def _cf_weights(f: OperatorMonotoneFunction, lam: np.ndarray) -> np.ndarray:
    """c_f(lam_i, lam_j) (lam_i - lam_j)^2 with zero weight on pairs of
    equal eigenvalues, including the doubly-degenerate zero pair."""
    n = len(lam)
    w = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if lam[i] == lam[j]:
                continue
            w[i, j] = morozova_chentsov(f, lam[i], lam[j]) * (lam[i] - lam[j]) ** 2
    return w


def skew_information(rho, k, f: OperatorMonotoneFunction) -> float:
    """Metric-adjusted skew information of rho with respect to the operator k:
    (f(0)/2) sum_ij c_f(lam_i, lam_j) (lam_i - lam_j)^2 |<i|k|j>|^2."""
    es = _state_eigensystem(rho)
    k = numerics.as_matrix(k)
    if k.shape[0] != es.eigenvectors.shape[0]:
        raise ValueError(f"shape {k.shape}")
    kt = es.eigenvectors.conj().T @ k @ es.eigenvectors
    w = _cf_weights(f, es.eigenvalues)
    return float(f.f0 / 2.0 * np.sum(w * np.abs(kt) ** 2))


def pure_channel_coherence(psi, phi: QuantumChannel) -> float:
    """Skew information of a pure state with respect to a channel, summed
    over its Kraus operators; independent of the metric function f."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (phi.dim,):
        raise ValueError(f"shape {psi.shape}")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("not normalized")
    total = 0.0
    for k in phi.kraus_operators():
        kpsi = k @ psi
        kdpsi = k.conj().T @ psi
        mean = np.vdot(psi, kpsi)
        total += 0.5 * (np.vdot(kpsi, kpsi).real + np.vdot(kdpsi, kdpsi).real)
        total -= abs(mean) ** 2
    return float(total)


def _pure_coherence_affine(psi: np.ndarray, phi: QuantumChannel) -> float:
    # pure-state value through the channel action alone; agrees with the
    # Kraus sum but stays defined for channels without one
    proj = np.outer(psi, psi.conj())
    phi_eye = phi.apply(np.eye(phi.dim, dtype=complex))
    a = np.vdot(psi, phi_eye @ psi).real
    b = np.vdot(psi, phi.apply(proj) @ psi).real
    return float(0.5 * (1.0 + a) - b)


def channel_coherence(rho, phi: QuantumChannel, f: OperatorMonotoneFunction) -> float:
    """Spectral evaluation of the channel form of the skew information:
    (f(0)/2) sum_ij c_f(lam_i, lam_j) (lam_i - lam_j)^2 <i|phi(|j><j|)|i>.

    Pure inputs are delegated to the pure-state form, which the full sum
    reduces to when a single eigenvalue is 1.
    """
    es = _state_eigensystem(rho)
    lam, vecs = es.eigenvalues, es.eigenvectors
    if lam[0] >= 1.0 - 1e-12:
        psi = vecs[:, 0]
        try:
            return pure_channel_coherence(psi, phi)
        except ValueError:
            return _pure_coherence_affine(psi, phi)
    w = _cf_weights(f, lam)
    n = len(lam)
    overlap = np.zeros((n, n))
    for j in range(n):
        if np.all(w[:, j] == 0.0):
            continue
        sigma = phi.apply(np.outer(vecs[:, j], vecs[:, j].conj()))
        overlap[:, j] = np.einsum("ai,ab,bi->i", vecs.conj(), sigma, vecs).real
    return float(f.f0 / 2.0 * np.sum(w * overlap))


def wy_channel_coherence(rho, phi: QuantumChannel) -> float:
    """Wigner-Yanase trace form: (1 + tr(rho phi(I)))/2 - tr(sqrt(rho) phi(sqrt(rho)))."""
    rho = numerics.as_matrix(rho)
    if not numerics.is_density_matrix(rho):
        raise ValueError("not a state")
    root = numerics.psd_sqrt(rho)
    phi_eye = phi.apply(np.eye(phi.dim, dtype=complex))
    a = numerics.trace_product(rho, phi_eye).real
    b = numerics.trace_product(root, phi.apply(root)).real
    return float(0.5 * (1.0 + a) - b)
