"""Order-finding instances and the exact state-vector pipeline.

An instance fixes the modulus N, the base x, the first-register dimension Q
and the work-register representation.  The work register can hold the full
2^ceil(log2 N) computational space ("full") or just the r-element orbit
{x^a mod N} that the algorithm ever touches ("compact").  Compact is the
default because density-matrix work scales with the joint dimension d.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, pi
from typing import Optional, Sequence, Union

import numpy as np

from . import numerics

B_FULL = "full"
B_COMPACT = "compact"


class NotCoprimeError(ValueError):
    """gcd(x, N) > 1; the gcd is already a classical factor of N."""

    def __init__(self, x: int, N: int, factor: int):
        super().__init__(f"not coprime: gcd({x}, {N}) = {factor}")
        self.factor = factor


def _is_composite(n: int) -> bool:
    if n < 4:
        return False
    return any(n % p == 0 for p in range(2, int(n**0.5) + 1))


def find_order(x: int, N: int) -> int:
    """Multiplicative order of x mod N by direct iteration."""
    if N < 2 or not 1 < x < N:
        raise ValueError(f"index out of range: x={x}, N={N}")
    g = gcd(x, N)
    if g != 1:
        raise NotCoprimeError(x, N, g)
    r, acc = 1, x % N
    while acc != 1:
        acc = (acc * x) % N
        r += 1
    return r


@dataclass(frozen=True)
class ShorInstance:
    N: int
    x: int
    r: int
    Q: int
    b_mode: str
    b_dim: int
    d: int
    orbit: tuple
    t: Optional[int] = None
    m: Optional[int] = None

    @classmethod
    def create(cls, N: int, x: int, t: Optional[int] = None,
               Q: Optional[int] = None, b_mode: str = B_COMPACT,
               max_dim: int = numerics.DEFAULT_MAX_DIM) -> "ShorInstance":
        """Build an instance either from a register size t (Q = 2^t) or from
        an explicit Q.  N must be an odd composite with x coprime to it."""
        if N % 2 == 0 or not _is_composite(N):
            raise ValueError(f"index: N={N} must be an odd composite")
        r = find_order(x, N)
        if Q is None:
            if t is None:
                raise ValueError("index: need t or Q")
            if t < 1:
                raise ValueError(f"index: t={t}")
            Q = 2**t
        elif Q < 2:
            raise ValueError(f"index: Q={Q}")
        if b_mode not in (B_FULL, B_COMPACT):
            raise ValueError(f"index: b_mode={b_mode!r}")
        b_dim = r if b_mode == B_COMPACT else 2 ** (N - 1).bit_length()
        d = numerics.check_dimension(Q * b_dim, max_dim)
        orbit = []
        v = 1
        for _ in range(r):
            orbit.append(v)
            v = (v * x) % N
        m = Q // r if Q % r == 0 else None
        return cls(N=N, x=x, r=r, Q=Q, b_mode=b_mode, b_dim=b_dim, d=d,
                   orbit=tuple(orbit), t=t, m=m)

    @property
    def exact_mode(self) -> bool:
        """Whether r divides Q, which the grouped closed forms require."""
        return self.m is not None

    def b_index(self, v: int) -> int:
        """Work-register basis index holding the value v."""
        if self.b_mode == B_COMPACT:
            return self.orbit.index(v)
        return v

    @property
    def one_index(self) -> int:
        return self.b_index(1)


def modexp_permutation(inst: ShorInstance) -> np.ndarray:
    """Index map P of the modular-exponentiation gate: basis state i is sent
    to basis state P[i].

    Joint index convention is i = j * b_dim + b with j the first register.
    In full mode, work-register states outside the orbit are left fixed.
    """
    perm = np.empty(inst.d, dtype=np.int64)
    if inst.b_mode == B_COMPACT:
        for j in range(inst.Q):
            for a in range(inst.r):
                perm[j * inst.b_dim + a] = j * inst.b_dim + (a + j) % inst.r
    else:
        orbit = set(inst.orbit)
        xj = [pow(inst.x, j, inst.N) for j in range(inst.Q)]
        for j in range(inst.Q):
            for v in range(inst.b_dim):
                w = (xj[j] * v) % inst.N if v in orbit else v
                perm[j * inst.b_dim + v] = j * inst.b_dim + w
    return perm


def modexp_unitary(inst: ShorInstance) -> np.ndarray:
    """Dense matrix of the modular-exponentiation permutation (on request;
    the pipeline itself only uses the index map)."""
    perm = modexp_permutation(inst)
    u = np.zeros((inst.d, inst.d), dtype=complex)
    u[perm, np.arange(inst.d)] = 1.0
    return u


def apply_permutation(perm: np.ndarray, psi: np.ndarray) -> np.ndarray:
    out = np.empty_like(psi)
    out[perm] = psi
    return out


def inverse_qft(Q: int) -> np.ndarray:
    """Inverse Fourier matrix, entries exp(-2 pi i j k / Q) / sqrt(Q)."""
    idx = np.arange(Q)
    return np.exp(-2j * pi * np.outer(idx, idx) / Q) / np.sqrt(Q)


def order_eigenvector(inst: ShorInstance, s: int) -> np.ndarray:
    """Work-register eigenvector u_s of multiplication by x, with eigenvalue
    exp(2 pi i s / r)."""
    if not 0 <= s < inst.r:
        raise ValueError(f"index: s={s}")
    u = np.zeros(inst.b_dim, dtype=complex)
    for a, v in enumerate(inst.orbit):
        u[inst.b_index(v)] = np.exp(-2j * pi * a * s / inst.r)
    return u / np.sqrt(inst.r)


# ---------------------------------------------------------------------------
# initial-state descriptors


@dataclass(frozen=True)
class Hadamard:
    """Uniform first-register superposition, amplitudes 1/sqrt(Q)."""


@dataclass(frozen=True)
class LocalUnitary:
    """Product state from t copies of e^{i a} cos(theta)|0> + e^{i b} sin(theta)|1>.

    All three angles live in [0, pi/2].
    """

    alpha_phase: float
    beta_phase: float
    theta: float

    def __post_init__(self):
        for name in ("alpha_phase", "beta_phase", "theta"):
            val = getattr(self, name)
            if not 0.0 <= val <= pi / 2 + 1e-12:
                raise ValueError(f"index: {name}={val} outside [0, pi/2]")


@dataclass(frozen=True)
class Amplitudes:
    """Explicit first-register amplitude vector (must be normalized)."""

    values: tuple

    @classmethod
    def of(cls, values: Sequence[complex]) -> "Amplitudes":
        return cls(tuple(complex(v) for v in values))


@dataclass(frozen=True)
class PseudoPure:
    """(1 - epsilon) |phi><phi| + epsilon I / d around a pure inner state."""

    epsilon: float
    inner: Union[Hadamard, LocalUnitary, Amplitudes]

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"index: epsilon={self.epsilon} outside [0, 1]")


InitialState = Union[Hadamard, LocalUnitary, Amplitudes, PseudoPure]


def local_unitary_amplitudes(alpha_phase: float, beta_phase: float,
                             theta: float, t: int) -> np.ndarray:
    """First-register amplitudes of the t-fold product state.

    alpha_j = (e^{i a} cos theta)^{z_j} (e^{i b} sin theta)^{t - z_j} with
    z_j the number of zero bits in the t-bit expansion of j.
    """
    LocalUnitary(alpha_phase, beta_phase, theta)  # angle validation
    c = np.exp(1j * alpha_phase) * np.cos(theta)
    s = np.exp(1j * beta_phase) * np.sin(theta)
    Q = 2**t
    alpha = np.empty(Q, dtype=complex)
    for j in range(Q):
        ones = bin(j).count("1")
        alpha[j] = c ** (t - ones) * s**ones
    return alpha


def initial_amplitudes(inst: ShorInstance, spec: InitialState) -> np.ndarray:
    """First-register amplitude vector for a pure initial-state descriptor."""
    if isinstance(spec, Hadamard):
        return np.full(inst.Q, 1.0 / np.sqrt(inst.Q), dtype=complex)
    if isinstance(spec, LocalUnitary):
        if inst.t is None:
            raise ValueError("index: product-state amplitudes need t")
        return local_unitary_amplitudes(spec.alpha_phase, spec.beta_phase,
                                        spec.theta, inst.t)
    if isinstance(spec, Amplitudes):
        alpha = np.asarray(spec.values, dtype=complex)
        if alpha.shape != (inst.Q,):
            raise ValueError(f"shape {alpha.shape} != ({inst.Q},)")
        if abs(np.linalg.norm(alpha) - 1.0) > 1e-10:
            raise ValueError("not normalized")
        return alpha
    raise ValueError(f"index: unknown initial state {spec!r}")


def prepare_initial(inst: ShorInstance, spec: InitialState) -> np.ndarray:
    """Joint initial state: a vector for pure descriptors, a density matrix
    for the pseudo-pure descriptor."""
    if isinstance(spec, PseudoPure):
        psi = prepare_initial(inst, spec.inner)
        eye = np.eye(inst.d) / inst.d
        return (1.0 - spec.epsilon) * np.outer(psi, psi.conj()) + spec.epsilon * eye
    alpha = initial_amplitudes(inst, spec)
    psi = np.zeros((inst.Q, inst.b_dim), dtype=complex)
    psi[:, inst.one_index] = alpha
    return psi.reshape(inst.d)


def run_pure_pipeline(inst: ShorInstance, alpha: Sequence[complex]) -> np.ndarray:
    """Final joint state: modular exponentiation on |alpha>|1> followed by the
    inverse Fourier transform on the first register."""
    alpha = np.asarray(alpha, dtype=complex)
    if alpha.shape != (inst.Q,):
        raise ValueError(f"shape {alpha.shape} != ({inst.Q},)")
    if abs(np.linalg.norm(alpha) - 1.0) > 1e-10:
        raise ValueError("not normalized")
    mid = np.zeros((inst.Q, inst.b_dim), dtype=complex)
    for j in range(inst.Q):
        v = pow(inst.x, j, inst.N)
        mid[j, inst.b_index(v)] = alpha[j]
    out = inverse_qft(inst.Q) @ mid
    return out.reshape(inst.d)


def outcome_distribution(inst: ShorInstance, state: np.ndarray) -> np.ndarray:
    """First-register measurement distribution P(k), tracing out the work
    register.  Accepts a joint vector or a joint density matrix."""
    state = np.asarray(state, dtype=complex)
    if state.shape == (inst.d,):
        if abs(np.linalg.norm(state) - 1.0) > 1e-8:
            raise ValueError("not normalized")
        p = np.abs(state.reshape(inst.Q, inst.b_dim)) ** 2
        return p.sum(axis=1)
    if state.shape == (inst.d, inst.d):
        diag = np.diagonal(state).real
        if abs(diag.sum() - 1.0) > 1e-8:
            raise ValueError("not normalized")
        return diag.reshape(inst.Q, inst.b_dim).sum(axis=1)
    raise ValueError(f"shape {state.shape}")


def continued_fraction_order(k: int, Q: int, N: int) -> Optional[int]:
    """Denominator of the best order candidate recovered from outcome k.

    Scans the convergents of k/Q and returns the largest denominator below N
    whose convergent approximates k/Q to better than 1/(2Q).  k = 0 carries
    no information and yields None.
    """
    if not 0 <= k < Q:
        raise ValueError(f"index: k={k}")
    if k == 0:
        return None
    num, den = k, Q
    h_prev, h_curr = 0, 1
    q_prev, q_curr = 1, 0
    best = None
    while den:
        a = num // den
        num, den = den, num - a * den
        h_prev, h_curr = h_curr, a * h_curr + h_prev
        q_prev, q_curr = q_curr, a * q_curr + q_prev
        # |k/Q - h/q| < 1/(2Q)  <=>  2 |k q - h Q| < q
        if q_curr < N and 2 * abs(k * q_curr - h_curr * Q) < q_curr:
            if best is None or q_curr > best:
                best = q_curr
    return best


def exact_peaks(inst: ShorInstance) -> list:
    """Outcomes k = s Q / r with gcd(s, r) = 1; these determine r exactly."""
    if inst.m is None:
        raise ValueError("exact mode required: r does not divide Q")
    return [s * inst.m for s in range(inst.r) if gcd(s, inst.r) == 1]


def success_probability(inst: ShorInstance, dist: Sequence[float],
                        mode: str = "exact") -> float:
    """Probability that classical post-processing recovers the order r.

    "exact" sums the distribution over the outcomes s Q / r with s coprime
    to r (requires r | Q).  "cf" sums over every outcome whose
    continued-fraction candidate equals r.
    """
    dist = np.asarray(dist, dtype=float)
    if dist.shape != (inst.Q,):
        raise ValueError(f"shape {dist.shape} != ({inst.Q},)")
    if mode == "exact":
        return float(sum(dist[k] for k in exact_peaks(inst)))
    if mode == "cf":
        return float(sum(dist[k] for k in range(inst.Q)
                         if continued_fraction_order(k, inst.Q, inst.N) == inst.r))
    raise ValueError(f"index: mode={mode!r}")
