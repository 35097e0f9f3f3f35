"""Brute-force reference values for the verification suite.

Everything here recomputes its target from first principles: explicit sums
over basis states, explicit commutators, a Schur-based matrix square root.
Nothing is shared with the closed-form module, and the simulator pipeline
is not reused, so an agreement between the two routes is meaningful.
"""
from __future__ import annotations

import cmath
from math import gcd, pi
from typing import NamedTuple, Optional, Sequence

import numpy as np
import scipy.linalg

from .shor import ShorInstance, continued_fraction_order


def random_amplitudes(Q: int, seed: int, complex_valued: bool = False,
                      nonnegative: bool = False) -> np.ndarray:
    """Unit-norm Gaussian amplitude vector from a fixed seed.

    With ``nonnegative`` the entries are the magnitudes of the same draw,
    giving a strictly positive profile with identical moduli.
    """
    rng = np.random.default_rng(seed)
    alpha = rng.standard_normal(Q)
    if complex_valued:
        alpha = alpha + 1j * rng.standard_normal(Q)
    if nonnegative:
        alpha = np.abs(alpha)
    alpha = alpha.astype(complex)
    return alpha / np.linalg.norm(alpha)


def brute_final_amplitudes(inst: ShorInstance, alpha: Sequence[complex]) -> np.ndarray:
    """Final-state amplitudes <k, v|phi_3> by direct summation over j with
    x^j = v (mod N).  Shape (Q, b_dim)."""
    alpha = list(alpha)
    if len(alpha) != inst.Q:
        raise ValueError(f"shape ({len(alpha)},) != ({inst.Q},)")
    xj = [pow(inst.x, j, inst.N) for j in range(inst.Q)]
    amps = np.zeros((inst.Q, inst.b_dim), dtype=complex)
    scale = 1.0 / cmath.sqrt(inst.Q)
    for k in range(inst.Q):
        for v in inst.orbit:
            total = 0.0 + 0.0j
            for j in range(inst.Q):
                if xj[j] == v:
                    total += alpha[j] * cmath.exp(-2j * pi * j * k / inst.Q)
            amps[k, inst.b_index(v)] = scale * total
    return amps


def brute_outcome_distribution(inst: ShorInstance, alpha: Sequence[complex]) -> np.ndarray:
    """P(k) = sum_v |<k, v|phi_3>|^2 by explicit enumeration."""
    amps = brute_final_amplitudes(inst, alpha)
    dist = np.empty(inst.Q)
    for k in range(inst.Q):
        dist[k] = sum(abs(amps[k, b]) ** 2 for b in range(inst.b_dim))
    return dist


def brute_state_coherence(inst: ShorInstance, alpha: Sequence[complex]) -> float:
    """1 - sum_i |<i|phi_3>|^4 over the whole joint basis."""
    amps = brute_final_amplitudes(inst, alpha)
    fourth = sum(abs(amps[k, b]) ** 4
                 for k in range(inst.Q) for b in range(inst.b_dim))
    return float(1.0 - fourth)


def brute_overlap_decoherence(inst: ShorInstance, alpha: Sequence[complex]) -> float:
    """1 - |<phi_1|phi_3>|^2 with the overlap taken entry by entry."""
    alpha = list(alpha)
    amps = brute_final_amplitudes(inst, alpha)
    one = inst.b_index(1)
    overlap = sum(complex(alpha[k]).conjugate() * amps[k, one]
                  for k in range(inst.Q))
    return float(1.0 - abs(overlap) ** 2)


def brute_wy_coherence(rho: np.ndarray, kraus: Sequence[np.ndarray]) -> float:
    """Wigner-Yanase channel coherence as (1/2) sum_l tr([sqrt(rho), K_l]
    [sqrt(rho), K_l]^dag), with the square root from the Schur method."""
    rho = np.asarray(rho, dtype=complex)
    root = scipy.linalg.sqrtm(rho)
    root = (root + root.conj().T) / 2.0
    total = 0.0
    for k in kraus:
        k = np.asarray(k, dtype=complex)
        comm = root @ k - k @ root
        total += 0.5 * np.trace(comm @ comm.conj().T).real
    return float(total)


class SuccessSplit(NamedTuple):
    cf: float
    exact: Optional[float]


def brute_success_probability(inst: ShorInstance, state: np.ndarray) -> SuccessSplit:
    """Order-recovery probability of a final state, reported two ways: the
    continued-fraction sum over every outcome, and (when r | Q) the sum over
    the exact peaks k = s Q / r with gcd(s, r) = 1."""
    state = np.asarray(state, dtype=complex)
    dist = np.empty(inst.Q)
    if state.shape == (inst.d,):
        for k in range(inst.Q):
            dist[k] = sum(abs(state[k * inst.b_dim + b]) ** 2
                          for b in range(inst.b_dim))
    elif state.shape == (inst.d, inst.d):
        for k in range(inst.Q):
            dist[k] = sum(state[k * inst.b_dim + b, k * inst.b_dim + b].real
                          for b in range(inst.b_dim))
    else:
        raise ValueError(f"shape {state.shape}")
    cf_total = sum(dist[k] for k in range(inst.Q)
                   if continued_fraction_order(k, inst.Q, inst.N) == inst.r)
    exact_total = None
    if inst.m is not None:
        exact_total = sum(dist[s * inst.m] for s in range(inst.r)
                          if gcd(s, inst.r) == 1)
    return SuccessSplit(float(cf_total), None if exact_total is None else float(exact_total))
