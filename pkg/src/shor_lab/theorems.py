"""Closed-form coherence, decoherence, and success-probability expressions.

Everything in this module is an arithmetic formula; no state vectors are
built here.  The verification suite compares these values against the
simulator pipeline and the brute-force oracle, so this module must not
import either evaluation route.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, pi, sqrt
from typing import Optional, Sequence

import numpy as np

from .coherence import OperatorMonotoneFunction
from .shor import ShorInstance


def euler_phi(r: int) -> int:
    """Count of s in [1, r) coprime to r, with phi(1) = 1."""
    if r < 1:
        raise ValueError(f"index: r={r}")
    if r == 1:
        return 1
    return sum(1 for s in range(1, r) if gcd(s, r) == 1)


def amplitude_groups(inst: ShorInstance, alpha: Sequence[complex]) -> np.ndarray:
    """Residue-class amplitude sums A[a, k] = sum_b alpha_{a+br} w^{-brk},
    w = exp(2 pi i / Q).  Shape (r, Q); requires r | Q."""
    if inst.m is None:
        raise ValueError("exact mode required: r does not divide Q")
    alpha = np.asarray(alpha, dtype=complex)
    if alpha.shape != (inst.Q,):
        raise ValueError(f"shape {alpha.shape} != ({inst.Q},)")
    b = np.arange(inst.m)
    k = np.arange(inst.Q)
    twiddle = np.exp(-2j * pi * np.outer(b, k) * inst.r / inst.Q)
    groups = np.empty((inst.r, inst.Q), dtype=complex)
    for a in range(inst.r):
        groups[a] = alpha[a::inst.r] @ twiddle
    return groups


def coherence_closed_form(inst: ShorInstance, alpha: Sequence[complex]) -> float:
    """Final-state coherence relative to the computational-basis measurement:
    1 - sum_{a,k} |A[a,k]|^4 / Q^2."""
    groups = amplitude_groups(inst, alpha)
    return float(1.0 - np.sum(np.abs(groups) ** 4) / inst.Q**2)


def decoherence_closed_form(inst: ShorInstance, alpha: Sequence[complex],
                            conjugate: bool = True) -> float:
    """Initial-state decoherence under the algorithm unitary:
    1 - |sum_k conj(alpha_k) A[0,k]|^2 / Q.

    With conjugate=False the overlap sum uses alpha_k itself; the two
    variants agree whenever alpha is real.
    """
    alpha = np.asarray(alpha, dtype=complex)
    groups = amplitude_groups(inst, alpha)
    weights = alpha.conj() if conjugate else alpha
    overlap = np.dot(weights, groups[0])
    return float(1.0 - abs(overlap) ** 2 / inst.Q)


def collision_probability(dist: Sequence[float]) -> float:
    """sum_k P(k)^2 of an outcome distribution."""
    dist = np.asarray(dist, dtype=float)
    return float(np.sum(dist**2))


def collision_bounds(inst: ShorInstance, alpha: Sequence[complex]) -> tuple:
    """(1 - C, r (1 - C)): the collision probability of the outcome
    distribution is sandwiched between these two values."""
    c = coherence_closed_form(inst, alpha)
    return (1.0 - c, inst.r * (1.0 - c))


def success_lower_bound(inst: ShorInstance, alpha: Sequence[complex]) -> float:
    """4 Q min_j |alpha_j|^2 phi(r) / (r pi^2); a strict floor on the
    success probability when every amplitude is nonzero and nonnegative."""
    alpha = np.asarray(alpha, dtype=complex)
    if alpha.shape != (inst.Q,):
        raise ValueError(f"shape {alpha.shape} != ({inst.Q},)")
    min_prob = float(np.min(np.abs(alpha) ** 2))
    return 4.0 * inst.Q * min_prob * euler_phi(inst.r) / (inst.r * pi**2)


def success_squared_upper_bound(inst: ShorInstance, alpha: Sequence[complex]) -> float:
    """r (1 - C) phi(r)^2; the squared success probability stays strictly
    below this."""
    c = coherence_closed_form(inst, alpha)
    return float(inst.r * (1.0 - c) * euler_phi(inst.r) ** 2)


@dataclass(frozen=True)
class LocalUnitaryForms:
    coherence: float
    decoherence: float
    min_prob: float
    success_lower: float


def local_unitary_forms(inst: ShorInstance, alpha_phase: float, beta_phase: float,
                        theta: float) -> LocalUnitaryForms:
    """Closed forms for the t-fold product-state family, plus the regime
    value of min_j |alpha_j|^2 (sin^2t, cos^2t, or 1/Q at the midpoint)."""
    from .shor import local_unitary_amplitudes

    if inst.t is None:
        raise ValueError("index: product-state forms need t")
    alpha = local_unitary_amplitudes(alpha_phase, beta_phase, theta, inst.t)
    c = coherence_closed_form(inst, alpha)
    d = decoherence_closed_form(inst, alpha)
    if theta < pi / 4:
        min_prob = float(np.sin(theta) ** (2 * inst.t))
    elif theta > pi / 4:
        min_prob = float(np.cos(theta) ** (2 * inst.t))
    else:
        min_prob = 1.0 / inst.Q
    bound = 4.0 * inst.Q * min_prob * euler_phi(inst.r) / (inst.r * pi**2)
    return LocalUnitaryForms(c, d, min_prob, bound)


def _mixing_bracket(f: OperatorMonotoneFunction, d: int, eps: float) -> float:
    """d/(eps f(u/eps)) + d/(u f(eps/u)) with u = d - (d-1) eps; the
    two-eigenvalue kernel shared by every uniform-mixing closed form.
    Singular at eps = 0."""
    u = d - (d - 1) * eps
    return d / (eps * f(u / eps)) + d / (u * f(eps / u))


@dataclass(frozen=True)
class PseudoPureForms:
    coherence_generic: float
    decoherence_generic: float
    coherence_wy: float
    decoherence_wy: float


def pseudo_pure_forms(inst: ShorInstance, alpha: Sequence[complex], eps: float,
                      f: OperatorMonotoneFunction) -> PseudoPureForms:
    """Coherence/decoherence of the uniformly mixed initial state
    (1 - eps)|phi><phi| + eps I/d, in generic-f and Wigner-Yanase form.

    At eps = 0 the generic bracket is singular and the pure values are
    returned directly.
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"index: eps={eps} outside [0, 1]")
    c_pure = coherence_closed_form(inst, alpha)
    d_pure = decoherence_closed_form(inst, alpha)
    d = inst.d
    wy_pref = (sqrt(1.0 - (d - 1) * eps / d) - sqrt(eps / d)) ** 2
    if eps == 0.0:
        return PseudoPureForms(c_pure, d_pure, c_pure, d_pure)
    bracket = _mixing_bracket(f, d, eps)
    pref = f.f0 * (1.0 - eps) ** 2 / 2.0 * bracket
    return PseudoPureForms(pref * c_pure, pref * d_pure,
                           wy_pref * c_pure, wy_pref * d_pure)


def pseudo_pure_success(inst: ShorInstance, p_pure: float, eps: float) -> float:
    """(1 - eps) P + eps phi(r) / Q: success probability of the mixed
    pipeline in terms of the pure-pipeline success P."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"index: eps={eps} outside [0, 1]")
    return (1.0 - eps) * p_pure + eps * euler_phi(inst.r) / inst.Q


@dataclass(frozen=True)
class NoisyForms:
    coherence_generic: float
    coherence_wy: float
    decoherence: float


def noisy_forms(inst: ShorInstance, lam: float,
                f: OperatorMonotoneFunction) -> NoisyForms:
    """Closed forms for the depolarizing pipeline with the divisor-1 phase
    ramp: output coherence in generic-f and Wigner-Yanase form, plus the
    input decoherence under the whole noisy channel.

    |lam| = 1 makes the generic bracket singular; the pure-output value
    1 - 1/r^2 is returned there.
    """
    d, r, Q = inst.d, inst.r, inst.Q
    if not -1.0 / (d**2 - 1) - 1e-15 <= lam <= 1.0 + 1e-15:
        raise ValueError(f"index: lam={lam}")
    c_out_pure = 1.0 - 1.0 / r**2
    lam2 = lam * lam
    eps = 1.0 - lam2
    wy_pref = (sqrt(1.0 - (d - 1) * eps / d) - sqrt(eps / d)) ** 2
    if eps == 0.0:
        c_generic = c_out_pure
    else:
        c_generic = f.f0 * lam2**2 / 2.0 * c_out_pure * _mixing_bracket(f, d, eps)
    c_wy = wy_pref * c_out_pure
    dec = lam2 * (1.0 / d - 1.0 / Q) + (d - 1.0) / d
    return NoisyForms(c_generic, c_wy, dec)


def noisy_success_lower_bound(inst: ShorInstance, lam: float) -> float:
    """27 lam^2 phi(r) / (16 r pi^2) + (1 - lam^2) phi(r) / Q: success floor
    of the noisy pipeline under the divisor-6 phase ramp."""
    phi_r = euler_phi(inst.r)
    return (27.0 * lam**2 * phi_r / (16.0 * inst.r * pi**2)
            + (1.0 - lam**2) * phi_r / inst.Q)


def decoherence_success_gap(inst: ShorInstance, lam: float) -> float:
    """gamma(lam) = lam^2 (1/d - 1/r) + 1 - 1/d - 1/Q: the exact gap between
    the noisy-channel decoherence and the peak outcome probability under the
    divisor-1 phase ramp."""
    d, r, Q = inst.d, inst.r, inst.Q
    return lam**2 * (1.0 / d - 1.0 / r) + 1.0 - 1.0 / d - 1.0 / Q


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class TheoremReport:
    """Outcome of a single verification check.

    kind is one of "equality", "lower_bound", "upper_bound", "relation".
    margin is tolerance - |lhs - rhs| for equalities and the strict
    inequality slack otherwise; positive margin means the check passed,
    except for informational "relation" records whose pass flag is set by
    the caller.
    """

    name: str
    kind: str
    lhs: float
    rhs: float
    margin: float
    tolerance: float
    passed: bool
    context: dict = field(default_factory=dict)

    @classmethod
    def equality(cls, name: str, lhs: float, rhs: float, tolerance: float,
                 **context) -> "TheoremReport":
        delta = abs(lhs - rhs)
        return cls(name, "equality", float(lhs), float(rhs),
                   float(tolerance - delta), float(tolerance),
                   bool(delta <= tolerance), context)

    @classmethod
    def lower_bound(cls, name: str, lhs: float, rhs: float,
                    strict: bool = True, **context) -> "TheoremReport":
        """lhs must exceed rhs; no tolerance slack is applied."""
        margin = float(lhs - rhs)
        ok = margin > 0.0 if strict else margin >= 0.0
        return cls(name, "lower_bound", float(lhs), float(rhs), margin, 0.0,
                   bool(ok), context)

    @classmethod
    def upper_bound(cls, name: str, lhs: float, rhs: float,
                    strict: bool = True, **context) -> "TheoremReport":
        """lhs must stay below rhs; no tolerance slack is applied."""
        margin = float(rhs - lhs)
        ok = margin > 0.0 if strict else margin >= 0.0
        return cls(name, "upper_bound", float(lhs), float(rhs), margin, 0.0,
                   bool(ok), context)

    @classmethod
    def relation(cls, name: str, passed: bool, lhs: float, rhs: float,
                 margin: float, tolerance: float = 0.0, **context) -> "TheoremReport":
        return cls(name, "relation", float(lhs), float(rhs), float(margin),
                   float(tolerance), bool(passed), context)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "context": self.context,
        }
