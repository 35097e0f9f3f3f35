"""End-to-end verification suite.

Every closed form is evaluated three ways where possible: the arithmetic
expression, the simulator pipeline, and the brute-force oracle.  Each check
becomes one TheoremReport.  Strict bounds pass only with a positive margin;
equalities pass within their named tolerance.  All randomness is derived
from the caller's seed so a rerun reproduces the same reports bit for bit.
"""
from __future__ import annotations

from math import gcd, pi, sqrt
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import coherence, numerics, oracle, shor, theorems
from .theorems import TheoremReport

DEFAULT_TOLERANCES: Dict[str, float] = {
    "equality": 1e-10,
    "exact": 1e-12,
    "cross": 1e-8,
    "unitary": 1e-10,
    "trace": 1e-10,
    "unital": 1e-13,
    "normalization": 1e-10,
    "reconstruction": 1e-10,
}

MIXED_EPSILONS = tuple(round(0.1 * i, 1) for i in range(11))
CROSS_EPSILONS = (0.1, 0.25, 0.5, 0.9)
FLOOR_LAMBDAS = (0.0, 0.3, 0.6, 1.0)


def cross_lambdas(d: int) -> tuple:
    return (-1.0 / (d**2 - 1), 0.0, 0.3, 0.8, 0.99, 1.0)


def theta_grid(points: int = 9) -> np.ndarray:
    return np.linspace(0.0, pi / 2, points)


class _AlphaRecord:
    """One tested amplitude vector with every derived quantity attached."""

    def __init__(self, inst: shor.ShorInstance, label: str, alpha: np.ndarray):
        self.label = label
        self.alpha = alpha
        self.closed_c = theorems.coherence_closed_form(inst, alpha)
        self.closed_d = theorems.decoherence_closed_form(inst, alpha)
        self.oracle_c = oracle.brute_state_coherence(inst, alpha)
        self.oracle_d = oracle.brute_overlap_decoherence(inst, alpha)
        self.dist = shor.outcome_distribution(inst, shor.run_pure_pipeline(inst, alpha))
        self.collision = theorems.collision_probability(self.dist)
        self.success = shor.success_probability(inst, self.dist, mode="exact")
        self.min_prob = float(np.min(np.abs(alpha) ** 2))


def _aggregate_equality(name: str, deltas: Sequence[float], tol: float,
                        labels: Sequence[str], **context) -> TheoremReport:
    worst = int(np.argmax(deltas))
    return TheoremReport.relation(
        name, max(deltas) <= tol, float(max(deltas)), tol,
        float(tol - max(deltas)), tol,
        count=len(deltas), worst=labels[worst], **context)


def _aggregate_bound(name: str, margins: Sequence[float],
                     labels: Sequence[str], strict: bool = True,
                     slack: float = 0.0, **context) -> TheoremReport:
    worst = int(np.argmin(margins))
    m = float(margins[worst])
    ok = m > 0.0 if strict else m >= -slack
    return TheoremReport.relation(name, ok, m, 0.0, m, slack,
                                  count=len(margins), worst=labels[worst], **context)


def run_suite(inst: shor.ShorInstance, seed: int = 0, n_random: int = 100,
              tolerances: Optional[Dict[str, float]] = None) -> List[TheoremReport]:
    if not inst.exact_mode:
        raise ValueError("exact mode required: r does not divide Q")
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    Q, r, d = inst.Q, inst.r, inst.d
    phi_r = theorems.euler_phi(r)
    reports: List[TheoremReport] = []
    norm_dev = 0.0

    def track(dist: np.ndarray) -> np.ndarray:
        nonlocal norm_dev
        norm_dev = max(norm_dev, abs(float(np.sum(dist)) - 1.0))
        return dist

    # ----- amplitude families -------------------------------------------
    uniform = np.full(Q, 1.0 / np.sqrt(Q), dtype=complex)
    basis = np.zeros(Q, dtype=complex)
    basis[0] = 1.0
    rec_uniform = _AlphaRecord(inst, "uniform", uniform)
    rec_basis = _AlphaRecord(inst, "basis", basis)
    reals = [_AlphaRecord(inst, f"real[{i}]",
                          oracle.random_amplitudes(Q, seed + i))
             for i in range(n_random)]
    cplx = [_AlphaRecord(inst, f"complex[{i}]",
                         oracle.random_amplitudes(Q, seed + 1000 + i,
                                                  complex_valued=True))
            for i in range(n_random)]
    mags = [_AlphaRecord(inst, f"mag[{i}]",
                         oracle.random_amplitudes(Q, seed + i, nonnegative=True))
            for i in range(n_random)]
    thetas = theta_grid()
    prods = []
    if inst.t is not None:
        prods = [_AlphaRecord(inst, f"theta[{th:.4f}]",
                              shor.local_unitary_amplitudes(0.0, 0.0, th, inst.t))
                 for th in thetas]
    everything = [rec_uniform, rec_basis] + reals + cplx + mags + prods
    for rec in everything:
        track(rec.dist)

    # ----- uniform-input closed forms -----------------------------------
    reports.append(TheoremReport.equality(
        "uniform-coherence-value", rec_uniform.closed_c, 1.0 - 1.0 / r**2,
        tol["equality"]))
    reports.append(TheoremReport.equality(
        "uniform-decoherence-value", rec_uniform.closed_d, 1.0 - 1.0 / Q,
        tol["equality"]))
    reports.append(TheoremReport.equality(
        "uniform-coherence-vs-oracle", rec_uniform.closed_c, rec_uniform.oracle_c,
        tol["equality"]))
    reports.append(TheoremReport.equality(
        "uniform-decoherence-vs-oracle", rec_uniform.closed_d, rec_uniform.oracle_d,
        tol["equality"]))

    # ----- closed forms against the oracle, family by family ------------
    for name, group in (("real", reals), ("magnitude", mags),
                        ("product", prods)):
        if not group:
            continue
        reports.append(_aggregate_equality(
            f"coherence-closed-form-{name}",
            [abs(rec.closed_c - rec.oracle_c) for rec in group],
            tol["equality"], [rec.label for rec in group], seed=seed))
        reports.append(_aggregate_equality(
            f"decoherence-closed-form-{name}",
            [abs(rec.closed_d - rec.oracle_d) for rec in group],
            tol["equality"], [rec.label for rec in group], seed=seed))
    reports.append(_aggregate_equality(
        "coherence-closed-form-complex",
        [abs(rec.closed_c - rec.oracle_c) for rec in cplx],
        tol["equality"], [rec.label for rec in cplx], seed=seed))
    reports.append(_aggregate_equality(
        "decoherence-conjugated-complex",
        [abs(rec.closed_d - rec.oracle_d) for rec in cplx],
        tol["equality"], [rec.label for rec in cplx], seed=seed))
    # the unconjugated overlap variant drifts for complex amplitudes; this
    # is recorded, never asserted
    drift = [abs(theorems.decoherence_closed_form(inst, rec.alpha, conjugate=False)
                 - rec.oracle_d) for rec in cplx]
    reports.append(TheoremReport.relation(
        "decoherence-unconjugated-drift", True, float(max(drift)), 0.0,
        float(max(drift)), 0.0, recorded=True, count=len(drift)))

    # ----- collision-probability sandwich -------------------------------
    reports.append(_aggregate_bound(
        "collision-chain-lower",
        [rec.collision - (1.0 - rec.closed_c) for rec in everything],
        [rec.label for rec in everything], strict=False, slack=tol["exact"]))
    reports.append(_aggregate_bound(
        "collision-chain-upper",
        [r * (1.0 - rec.closed_c) - rec.collision for rec in everything],
        [rec.label for rec in everything], strict=False, slack=tol["exact"]))
    reports.append(TheoremReport.equality(
        "collision-upper-saturation", rec_uniform.collision,
        r * (1.0 - rec_uniform.closed_c), tol["exact"]))
    reports.append(TheoremReport.equality(
        "collision-lower-saturation", rec_basis.collision,
        1.0 - rec_basis.closed_c, tol["exact"]))

    # ----- success-probability bounds -----------------------------------
    kernel_floor = 4.0 * Q**2 / pi**2
    j = np.arange(Q)
    kernel_margins, kernel_pairs = [], []
    for s in range(r):
        for k in range(Q):
            delta = s / r - k / Q
            if abs(delta) < 1.0 / (2 * Q):
                val = abs(np.sum(np.exp(2j * pi * j * delta))) ** 2
                kernel_margins.append(val - kernel_floor)
                kernel_pairs.append(f"(s={s},k={k})")
    reports.append(_aggregate_bound("peak-kernel-floor", kernel_margins,
                                    kernel_pairs, floor=kernel_floor))

    reports.append(TheoremReport.equality(
        "uniform-success-value", rec_uniform.success, phi_r / r, tol["exact"]))
    reports.append(TheoremReport.lower_bound(
        "success-floor-uniform", rec_uniform.success,
        theorems.success_lower_bound(inst, uniform)))
    # the floor's derivation replaces each residue-class sum by its smallest
    # term, which needs every phase in the class aligned; asserted only for
    # nonnegative profiles, signed draws are recorded below
    aligned = [rec for rec in [rec_uniform] + mags + prods
               if rec.min_prob > 1e-15]
    reports.append(_aggregate_bound(
        "success-floor-nonnegative",
        [rec.success - theorems.success_lower_bound(inst, rec.alpha)
         for rec in aligned],
        [rec.label for rec in aligned]))
    signed = [rec for rec in reals + cplx if rec.min_prob > 1e-15]
    signed_margins = [rec.success - theorems.success_lower_bound(inst, rec.alpha)
                      for rec in signed]
    worst_signed = int(np.argmin(signed_margins))
    reports.append(TheoremReport.relation(
        "success-floor-signed-drift", True,
        float(signed_margins[worst_signed]), 0.0,
        float(signed_margins[worst_signed]), 0.0, recorded=True,
        count=len(signed_margins),
        violations=int(sum(m <= 0.0 for m in signed_margins)),
        worst=signed[worst_signed].label, seed=seed))
    reports.append(_aggregate_bound(
        "success-squared-ceiling",
        [theorems.success_squared_upper_bound(inst, rec.alpha) - rec.success**2
         for rec in everything],
        [rec.label for rec in everything]))
    reports.append(TheoremReport.upper_bound(
        "success-squared-ceiling-uniform", rec_uniform.success**2,
        theorems.success_squared_upper_bound(inst, uniform)))

    # ----- uniformly mixed initial states -------------------------------
    algo = coherence.shor_unitary_channel(inst)
    meas = coherence.measurement_channel(d)
    wy = coherence.wy_function()
    sld = coherence.sld_function()
    meas_kraus = meas.kraus_operators()
    algo_kraus = algo.kraus_operators()

    mixed_success, mixed_dist = [], []
    random0 = reals[0].alpha if reals else uniform
    for eps in MIXED_EPSILONS:
        for rec_label, alpha, p_pure in (("uniform", uniform, rec_uniform.success),
                                         ("real[0]", random0, reals[0].success if reals else rec_uniform.success)):
            rho1 = shor.prepare_initial(inst, shor.PseudoPure(eps, shor.Amplitudes.of(alpha)))
            rho3 = algo.apply(rho1)
            dist = track(shor.outcome_distribution(inst, rho3))
            got = shor.success_probability(inst, dist, mode="exact")
            want = theorems.pseudo_pure_success(inst, p_pure, eps)
            mixed_success.append((f"eps={eps},{rec_label}", abs(got - want)))
            pure_dist = rec_uniform.dist if rec_label == "uniform" else reals[0].dist
            mixed_dist.append((f"eps={eps},{rec_label}",
                               float(np.max(np.abs(dist - ((1.0 - eps) * pure_dist + eps / Q))))))
    reports.append(_aggregate_equality(
        "mixed-success-identity", [v for _, v in mixed_success], tol["exact"],
        [l for l, _ in mixed_success]))
    reports.append(_aggregate_equality(
        "mixed-distribution-identity", [v for _, v in mixed_dist], tol["exact"],
        [l for l, _ in mixed_dist]))

    psi1 = shor.prepare_initial(inst, shor.Hadamard())
    rho1_pure = np.outer(psi1, psi1.conj())
    checks = {key: [] for key in (
        "pseudo-pure-coherence-wy-spectral", "pseudo-pure-coherence-sld-spectral",
        "pseudo-pure-coherence-wy-trace", "pseudo-pure-coherence-wy-reduction",
        "pseudo-pure-coherence-wy-oracle",
        "pseudo-pure-decoherence-wy-spectral", "pseudo-pure-decoherence-sld-spectral",
        "pseudo-pure-decoherence-wy-trace", "pseudo-pure-decoherence-wy-reduction",
        "pseudo-pure-decoherence-wy-oracle")}
    for eps in CROSS_EPSILONS:
        rho1 = shor.prepare_initial(inst, shor.PseudoPure(eps, shor.Hadamard()))
        rho3 = algo.apply(rho1)
        forms_wy = theorems.pseudo_pure_forms(inst, uniform, eps, wy)
        forms_sld = theorems.pseudo_pure_forms(inst, uniform, eps, sld)
        lbl = f"eps={eps}"
        checks["pseudo-pure-coherence-wy-spectral"].append(
            (lbl, abs(forms_wy.coherence_generic
                      - coherence.channel_coherence(rho3, meas, wy))))
        checks["pseudo-pure-coherence-sld-spectral"].append(
            (lbl, abs(forms_sld.coherence_generic
                      - coherence.channel_coherence(rho3, meas, sld))))
        checks["pseudo-pure-coherence-wy-trace"].append(
            (lbl, abs(forms_wy.coherence_generic
                      - coherence.wy_channel_coherence(rho3, meas))))
        checks["pseudo-pure-coherence-wy-reduction"].append(
            (lbl, abs(forms_wy.coherence_generic - forms_wy.coherence_wy)))
        checks["pseudo-pure-coherence-wy-oracle"].append(
            (lbl, abs(forms_wy.coherence_wy
                      - oracle.brute_wy_coherence(rho3, meas_kraus))))
        checks["pseudo-pure-decoherence-wy-spectral"].append(
            (lbl, abs(forms_wy.decoherence_generic
                      - coherence.channel_coherence(rho1, algo, wy))))
        checks["pseudo-pure-decoherence-sld-spectral"].append(
            (lbl, abs(forms_sld.decoherence_generic
                      - coherence.channel_coherence(rho1, algo, sld))))
        checks["pseudo-pure-decoherence-wy-trace"].append(
            (lbl, abs(forms_wy.decoherence_generic
                      - coherence.wy_channel_coherence(rho1, algo))))
        checks["pseudo-pure-decoherence-wy-reduction"].append(
            (lbl, abs(forms_wy.decoherence_generic - forms_wy.decoherence_wy)))
        checks["pseudo-pure-decoherence-wy-oracle"].append(
            (lbl, abs(forms_wy.decoherence_wy
                      - oracle.brute_wy_coherence(rho1, algo_kraus))))
    for name, pairs in checks.items():
        level = tol["exact"] if name.endswith("reduction") else tol["cross"]
        reports.append(_aggregate_equality(name, [v for _, v in pairs], level,
                                           [l for l, _ in pairs]))

    # ----- depolarizing pipeline ----------------------------------------
    ramp1 = coherence.ramp_phases(Q, 1)
    ramp6 = coherence.ramp_phases(Q, 6)
    noisy_checks = {key: [] for key in (
        "noisy-coherence-wy-spectral", "noisy-coherence-sld-spectral",
        "noisy-coherence-wy-trace", "noisy-coherence-wy-reduction",
        "noisy-decoherence-trace", "noisy-decoherence-spectral")}
    gap_deltas, gap_labels = [], []
    peaks = [k for k in range(Q) if (k - 1) % inst.m == 0]
    for lam in cross_lambdas(d):
        chan = coherence.noisy_shor_channel(inst, lam, ramp1)
        sigma3 = chan.apply(rho1_pure)
        dist = track(shor.outcome_distribution(inst, sigma3))
        forms_wy = theorems.noisy_forms(inst, lam, wy)
        forms_sld = theorems.noisy_forms(inst, lam, sld)
        lbl = f"lam={lam:.6g}"
        noisy_checks["noisy-coherence-wy-spectral"].append(
            (lbl, abs(forms_wy.coherence_generic
                      - coherence.channel_coherence(sigma3, meas, wy))))
        noisy_checks["noisy-coherence-sld-spectral"].append(
            (lbl, abs(forms_sld.coherence_generic
                      - coherence.channel_coherence(sigma3, meas, sld))))
        noisy_checks["noisy-coherence-wy-trace"].append(
            (lbl, abs(forms_wy.coherence_generic
                      - coherence.wy_channel_coherence(sigma3, meas))))
        noisy_checks["noisy-coherence-wy-reduction"].append(
            (lbl, abs(forms_wy.coherence_generic - forms_wy.coherence_wy)))
        noisy_checks["noisy-decoherence-trace"].append(
            (lbl, abs(forms_wy.decoherence
                      - coherence.wy_channel_coherence(rho1_pure, chan))))
        noisy_checks["noisy-decoherence-spectral"].append(
            (lbl, abs(forms_wy.decoherence
                      - coherence.channel_coherence(rho1_pure, chan, wy))))
        gamma = theorems.decoherence_success_gap(inst, lam)
        for k in peaks:
            gap_deltas.append(abs(forms_wy.decoherence - dist[k] - gamma))
            gap_labels.append(f"lam={lam:.6g},k={k}")
    for name, pairs in noisy_checks.items():
        level = tol["exact"] if name.endswith("reduction") else tol["cross"]
        reports.append(_aggregate_equality(name, [v for _, v in pairs], level,
                                           [l for l, _ in pairs]))

    unit = theorems.noisy_forms(inst, 1.0, wy)
    zero = theorems.noisy_forms(inst, 0.0, wy)
    endpoint_unit = max(abs(unit.coherence_wy - (1.0 - 1.0 / r**2)),
                        abs(unit.coherence_generic - (1.0 - 1.0 / r**2)),
                        abs(unit.decoherence - (1.0 - 1.0 / Q)))
    endpoint_zero = max(abs(zero.coherence_wy), abs(zero.coherence_generic),
                        abs(zero.decoherence - (1.0 - 1.0 / d)))
    reports.append(TheoremReport.equality(
        "noisy-endpoint-unit", endpoint_unit, 0.0, tol["equality"]))
    reports.append(TheoremReport.equality(
        "noisy-endpoint-zero", endpoint_zero, 0.0, tol["equality"]))

    shifted_floor = 27.0 * Q**2 / (16.0 * pi**2)
    shifted_margins, shifted_pairs = [], []
    for s in range(r):
        for k in range(Q):
            delta = s / r - k / Q
            if abs(delta) < 1.0 / (2 * Q):
                val = abs(np.sum(np.exp(2j * pi * j * (delta + 1.0 / (6 * Q))))) ** 2
                shifted_margins.append(val - shifted_floor)
                shifted_pairs.append(f"(s={s},k={k})")
    reports.append(_aggregate_bound("shifted-peak-kernel-floor", shifted_margins,
                                    shifted_pairs, floor=shifted_floor))

    floor_margins, floor_labels = [], []
    zero_delta = None
    for lam in FLOOR_LAMBDAS:
        dist = track(coherence.noisy_outcome_distribution(inst, lam, ramp6))
        got = shor.success_probability(inst, dist, mode="exact")
        bound = theorems.noisy_success_lower_bound(inst, lam)
        if lam == 0.0:
            # the floor is saturated exactly at lam = 0: pure uniform noise
            zero_delta = abs(got - bound)
        else:
            floor_margins.append(got - bound)
            floor_labels.append(f"lam={lam:.6g}")
    reports.append(_aggregate_bound("noisy-success-floor", floor_margins,
                                    floor_labels))
    reports.append(TheoremReport.equality(
        "noisy-success-floor-saturation", zero_delta, 0.0, tol["exact"]))

    reports.append(_aggregate_equality(
        "gap-identity", gap_deltas, tol["equality"], gap_labels,
        peaks=[int(k) for k in peaks]))
    lam_dense = np.linspace(-1.0 / (d**2 - 1), 1.0, 41)
    gammas = [theorems.decoherence_success_gap(inst, lam) for lam in lam_dense]
    gap_lo, gap_hi = 1.0 - 1.0 / r - 1.0 / Q, 1.0 - 1.0 / d - 1.0 / Q
    range_ok = (min(gammas) >= gap_lo - tol["exact"]
                and max(gammas) <= gap_hi + tol["exact"]
                and abs(theorems.decoherence_success_gap(inst, 1.0) - gap_lo) <= tol["exact"]
                and abs(theorems.decoherence_success_gap(inst, 0.0) - gap_hi) <= tol["exact"])
    reports.append(TheoremReport.relation(
        "gap-range", range_ok, float(min(gammas)), float(max(gammas)),
        float(min(min(gammas) - gap_lo, gap_hi - max(gammas))), tol["exact"],
        lower=gap_lo, upper=gap_hi))

    # ----- infrastructure ------------------------------------------------
    f_dag = shor.inverse_qft(Q)
    u_mod = shor.modexp_unitary(inst)
    big = numerics.tensor_product(f_dag, np.eye(inst.b_dim)) @ u_mod
    unit_dev = 0.0
    for op in (f_dag, u_mod, big, np.diag(np.exp(1j * ramp1))):
        eye = np.eye(op.shape[0])
        unit_dev = max(unit_dev, float(np.max(np.abs(op @ op.conj().T - eye))))
    reports.append(TheoremReport.equality(
        "operators-unitary", unit_dev, 0.0, tol["unitary"]))

    rng = np.random.default_rng(seed + 2000)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    herm = (g + g.conj().T) / 2.0
    rho_rand = herm @ herm.conj().T
    rho_rand = rho_rand / np.trace(rho_rand).real
    test_states = [rho1_pure,
                   shor.prepare_initial(inst, shor.PseudoPure(0.3, shor.Hadamard())),
                   rho_rand]
    dep = coherence.depolarizing_channel(
        d, 0.3, numerics.tensor_product(np.diag(np.exp(1j * ramp1)), np.eye(inst.b_dim)))
    noisy = coherence.noisy_shor_channel(inst, 0.3, ramp1)
    trace_dev = 0.0
    for state in test_states:
        for chan in (meas, algo, dep, noisy):
            out = chan.apply(state)
            trace_dev = max(trace_dev, abs(np.trace(out).real - 1.0),
                            float(np.max(np.abs(np.trace(out).imag))))
    reports.append(TheoremReport.equality(
        "channels-trace-preserving", trace_dev, 0.0, tol["trace"]))

    eye_d = np.eye(d, dtype=complex)
    unital_dev = 0.0
    for lam in cross_lambdas(d):
        chan = coherence.depolarizing_channel(
            d, lam, numerics.tensor_product(np.diag(np.exp(1j * ramp1)), np.eye(inst.b_dim)))
        unital_dev = max(unital_dev, float(np.max(np.abs(chan.apply(eye_d) - eye_d))))
    reports.append(TheoremReport.equality(
        "depolarizing-unital", unital_dev, 0.0, tol["unital"]))

    recon_dev = 0.0
    for mat in (herm, test_states[1]):
        es = numerics.hermitian_eigensystem(mat)
        recon_dev = max(recon_dev, float(np.max(np.abs(es.reconstruct() - mat))))
    reports.append(TheoremReport.equality(
        "eigensystem-reconstruction", recon_dev, 0.0, tol["reconstruction"]))

    reports.append(TheoremReport.equality(
        "distribution-normalization", norm_dev, 0.0, tol["normalization"]))
    return reports
