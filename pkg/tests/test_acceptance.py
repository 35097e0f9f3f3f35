"""Release gate: twelve acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (visible with -s or in the -v
listing through the test name) and then asserts, so the gate verdict is
readable at a glance.  Tolerances are pinned here on purpose; loosening
them is a release decision, not a test edit.
"""
from math import gcd, pi

import json

import numpy as np

from shor_lab import cli, coherence, numerics, oracle, shor, theorems

INST = shor.ShorInstance.create(15, 7, t=4)
ALT = shor.ShorInstance.create(15, 4, t=4)
UNIFORM = np.full(16, 0.25, dtype=complex)

EQ_TOL = 1e-10
EXACT_TOL = 1e-12
CROSS_TOL = 1e-8


def _verdict(name, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} {name}"
    if detail:
        line += f"  [{detail}]"
    print(line)
    assert ok, line


def _success(inst, alpha):
    dist = shor.outcome_distribution(inst, shor.run_pure_pipeline(inst, alpha))
    return shor.success_probability(inst, dist, mode="exact")


def _families(n=100, seed=0):
    reals = [oracle.random_amplitudes(16, seed + i) for i in range(n)]
    cplx = [oracle.random_amplitudes(16, seed + 1000 + i, complex_valued=True)
            for i in range(n)]
    mags = [oracle.random_amplitudes(16, seed + i, nonnegative=True)
            for i in range(n)]
    prods = [shor.local_unitary_amplitudes(0.0, 0.0, th, 4)
             for th in np.linspace(0.0, pi / 2, 9)]
    return reals, cplx, mags, prods


def test_criterion_01_closed_forms_on_both_instances():
    worst = 0.0
    for inst in (INST, ALT):
        for alpha in (UNIFORM, oracle.random_amplitudes(inst.Q, 1),
                      oracle.random_amplitudes(inst.Q, 2, complex_valued=True)):
            worst = max(worst,
                        abs(theorems.coherence_closed_form(inst, alpha)
                            - oracle.brute_state_coherence(inst, alpha)),
                        abs(theorems.decoherence_closed_form(inst, alpha)
                            - oracle.brute_overlap_decoherence(inst, alpha)))
    # canonical uniform values
    worst = max(worst,
                abs(theorems.coherence_closed_form(INST, UNIFORM) - (1 - 1 / 16)),
                abs(theorems.decoherence_closed_form(INST, UNIFORM) - (1 - 1 / 16)),
                abs(theorems.coherence_closed_form(ALT, UNIFORM) - 0.75))
    _verdict("criterion-01 closed forms vs brute force, both instances",
             worst <= EQ_TOL, f"worst delta {worst:.3e}")


def test_criterion_02_random_and_product_state_forms():
    reals, cplx, _, prods = _families()
    worst = 0.0
    for alpha in reals + prods:
        worst = max(worst,
                    abs(theorems.coherence_closed_form(INST, alpha)
                        - oracle.brute_state_coherence(INST, alpha)),
                    abs(theorems.decoherence_closed_form(INST, alpha)
                        - oracle.brute_overlap_decoherence(INST, alpha)))
    drift = 0.0
    for alpha in cplx:
        worst = max(worst,
                    abs(theorems.coherence_closed_form(INST, alpha)
                        - oracle.brute_state_coherence(INST, alpha)),
                    abs(theorems.decoherence_closed_form(INST, alpha)
                        - oracle.brute_overlap_decoherence(INST, alpha)))
        drift = max(drift, abs(theorems.decoherence_closed_form(
            INST, alpha, conjugate=False)
            - oracle.brute_overlap_decoherence(INST, alpha)))
    print(f"note: unconjugated overlap drifts up to {drift:.3e} "
          "on complex draws (recorded, not asserted)")
    _verdict("criterion-02 closed forms on 100 seeds + product grid",
             worst <= EQ_TOL, f"worst delta {worst:.3e}")


def test_criterion_03_collision_probability_sandwich():
    reals, cplx, mags, prods = _families()
    worst = 0.0
    for alpha in [UNIFORM] + reals + cplx + mags + prods:
        dist = shor.outcome_distribution(INST, shor.run_pure_pipeline(INST, alpha))
        coll = theorems.collision_probability(dist)
        low, high = theorems.collision_bounds(INST, alpha)
        worst = max(worst, low - coll, coll - high)
    basis = np.zeros(16, dtype=complex)
    basis[0] = 1.0
    dist_u = shor.outcome_distribution(INST, shor.run_pure_pipeline(INST, UNIFORM))
    dist_b = shor.outcome_distribution(INST, shor.run_pure_pipeline(INST, basis))
    sat = max(abs(theorems.collision_probability(dist_u)
                  - theorems.collision_bounds(INST, UNIFORM)[1]),
              abs(theorems.collision_probability(dist_b)
                  - theorems.collision_bounds(INST, basis)[0]))
    _verdict("criterion-03 collision sandwich with both saturations",
             worst <= EXACT_TOL and sat <= EXACT_TOL,
             f"worst excess {worst:.3e}, saturation delta {sat:.3e}")


def test_criterion_04_success_floor():
    # kernel bound at every near-peak pair
    j = np.arange(16)
    kernel_margin = min(
        abs(np.sum(np.exp(2j * pi * j * (s / 4 - k / 16)))) ** 2
        - 4.0 * 16**2 / pi**2
        for s in range(4) for k in range(16)
        if abs(s / 4 - k / 16) < 1.0 / 32)
    # strict floor over every tested profile inside the aligned-phase premise
    _, _, mags, prods = _families()
    margins = []
    for alpha in [UNIFORM] + mags + [p for p in prods
                                     if np.min(np.abs(p) ** 2) > 1e-15]:
        margins.append(_success(INST, alpha)
                       - theorems.success_lower_bound(INST, alpha))
    # canonical uniform case: success 0.5 against a floor of 2/pi^2
    u_succ = _success(INST, UNIFORM)
    u_bound = theorems.success_lower_bound(INST, UNIFORM)
    pinned = (abs(u_succ - 0.5) <= EXACT_TOL
              and abs(u_bound - 2.0 / pi**2) <= EXACT_TOL)
    # signed counterexample stays on record
    bad = oracle.random_amplitudes(16, 88)
    gap = _success(INST, bad) - theorems.success_lower_bound(INST, bad)
    print(f"note: signed draw seed 88 undercuts the floor by {gap:.3e} "
          "(outside the aligned-phase premise, recorded)")
    _verdict("criterion-04 success floor, kernel + aligned profiles",
             kernel_margin > 0.0 and min(margins) > 0.0 and pinned and gap < 0.0,
             f"kernel margin {kernel_margin:.3e}, worst margin {min(margins):.3e}")


def test_criterion_05_success_squared_ceiling():
    reals, cplx, mags, prods = _families()
    margins = [theorems.success_squared_upper_bound(INST, alpha)
               - _success(INST, alpha) ** 2
               for alpha in [UNIFORM] + reals + cplx + mags + prods]
    canonical = abs(theorems.success_squared_upper_bound(INST, UNIFORM) - 1.0)
    uniform_sq = abs(_success(INST, UNIFORM) ** 2 - 0.25)
    _verdict("criterion-05 squared success stays under r(1-C)phi^2",
             min(margins) > 0.0 and canonical <= EXACT_TOL
             and uniform_sq <= EXACT_TOL,
             f"worst margin {min(margins):.3e}")


def test_criterion_06_uniformly_mixed_success_identity():
    algo = coherence.shor_unitary_channel(INST)
    p_pure = _success(INST, UNIFORM)
    worst = 0.0
    for eps in [round(0.1 * i, 1) for i in range(11)]:
        rho1 = shor.prepare_initial(INST, shor.PseudoPure(eps, shor.Hadamard()))
        dist = shor.outcome_distribution(INST, algo.apply(rho1))
        got = shor.success_probability(INST, dist, mode="exact")
        worst = max(worst, abs(got - theorems.pseudo_pure_success(INST, p_pure, eps)))
    pinned = abs(theorems.pseudo_pure_success(INST, 0.5, 0.5) - 0.3125)
    _verdict("criterion-06 mixed-state success identity over the eps grid",
             worst <= EXACT_TOL and pinned <= EXACT_TOL,
             f"worst delta {worst:.3e}")


def test_criterion_07_pseudo_pure_coherence_cross_checks():
    algo = coherence.shor_unitary_channel(INST)
    meas = coherence.measurement_channel(INST.d)
    wy, sld = coherence.wy_function(), coherence.sld_function()
    worst_cross, worst_red = 0.0, 0.0
    for eps in (0.1, 0.25, 0.5, 0.9):
        rho1 = shor.prepare_initial(INST, shor.PseudoPure(eps, shor.Hadamard()))
        rho3 = algo.apply(rho1)
        fw = theorems.pseudo_pure_forms(INST, UNIFORM, eps, wy)
        fs = theorems.pseudo_pure_forms(INST, UNIFORM, eps, sld)
        worst_cross = max(
            worst_cross,
            abs(fw.coherence_generic - coherence.channel_coherence(rho3, meas, wy)),
            abs(fs.coherence_generic - coherence.channel_coherence(rho3, meas, sld)),
            abs(fw.coherence_generic - coherence.wy_channel_coherence(rho3, meas)),
            abs(fw.decoherence_generic - coherence.channel_coherence(rho1, algo, wy)),
            abs(fs.decoherence_generic - coherence.channel_coherence(rho1, algo, sld)),
            abs(fw.decoherence_generic - coherence.wy_channel_coherence(rho1, algo)),
            abs(fw.coherence_wy - oracle.brute_wy_coherence(rho3, meas.kraus_operators())),
            abs(fw.decoherence_wy - oracle.brute_wy_coherence(rho1, algo.kraus_operators())))
        worst_red = max(worst_red,
                        abs(fw.coherence_generic - fw.coherence_wy),
                        abs(fw.decoherence_generic - fw.decoherence_wy))
    _verdict("criterion-07 pseudo-pure closed forms vs spectral/trace/oracle",
             worst_cross <= CROSS_TOL and worst_red <= EXACT_TOL,
             f"worst cross {worst_cross:.3e}, worst reduction {worst_red:.3e}")


def test_criterion_08_noisy_coherence_cross_checks():
    meas = coherence.measurement_channel(INST.d)
    wy, sld = coherence.wy_function(), coherence.sld_function()
    ramp = coherence.ramp_phases(16)
    psi1 = shor.prepare_initial(INST, shor.Hadamard())
    rho1 = np.outer(psi1, psi1.conj())
    worst = 0.0
    for lam in (-1.0 / (INST.d**2 - 1), 0.0, 0.3, 0.8, 0.99):
        chan = coherence.noisy_shor_channel(INST, lam, ramp)
        sigma3 = chan.apply(rho1)
        fw = theorems.noisy_forms(INST, lam, wy)
        fs = theorems.noisy_forms(INST, lam, sld)
        worst = max(
            worst,
            abs(fw.coherence_generic - coherence.channel_coherence(sigma3, meas, wy)),
            abs(fs.coherence_generic - coherence.channel_coherence(sigma3, meas, sld)),
            abs(fw.coherence_generic - coherence.wy_channel_coherence(sigma3, meas)),
            abs(fw.coherence_generic - fw.coherence_wy),
            abs(fw.decoherence - coherence.wy_channel_coherence(rho1, chan)),
            abs(fw.decoherence - coherence.channel_coherence(rho1, chan, wy)))
    unit = theorems.noisy_forms(INST, 1.0, wy)
    zero = theorems.noisy_forms(INST, 0.0, wy)
    ends = max(abs(unit.coherence_wy - (1 - 1 / 16)),
               abs(unit.decoherence - (1 - 1 / 16)),
               abs(zero.coherence_wy), abs(zero.coherence_generic),
               abs(zero.decoherence - (1 - 1 / 64)))
    _verdict("criterion-08 depolarizing pipeline closed forms across lambda",
             worst <= CROSS_TOL and ends <= EQ_TOL,
             f"worst cross {worst:.3e}, endpoint delta {ends:.3e}")


def test_criterion_09_noisy_success_floor():
    ramp6 = coherence.ramp_phases(16, 6)
    j = np.arange(16)
    kernel_margin = min(
        abs(np.sum(np.exp(2j * pi * j * (s / 4 - k / 16 + 1 / 96)))) ** 2
        - 27.0 * 16**2 / (16.0 * pi**2)
        for s in range(4) for k in range(16)
        if abs(s / 4 - k / 16) < 1.0 / 32)
    margins = []
    for lam in (0.3, 0.6, 1.0):
        dist = coherence.noisy_outcome_distribution(INST, lam, ramp6)
        margins.append(shor.success_probability(INST, dist, mode="exact")
                       - theorems.noisy_success_lower_bound(INST, lam))
    dist0 = coherence.noisy_outcome_distribution(INST, 0.0, ramp6)
    saturation = abs(shor.success_probability(INST, dist0, mode="exact")
                     - theorems.noisy_success_lower_bound(INST, 0.0))
    _verdict("criterion-09 detuned noisy floor, strict above lam=0",
             kernel_margin > 0.0 and min(margins) > 0.0
             and saturation <= EXACT_TOL,
             f"kernel margin {kernel_margin:.3e}, worst margin {min(margins):.3e}, "
             f"lam=0 saturation {saturation:.3e}")


def test_criterion_10_decoherence_success_gap():
    ramp = coherence.ramp_phases(16)
    wy = coherence.wy_function()
    psi1 = shor.prepare_initial(INST, shor.Hadamard())
    rho1 = np.outer(psi1, psi1.conj())
    worst = 0.0
    for lam in (-1.0 / (INST.d**2 - 1), 0.0, 0.3, 0.8, 0.99, 1.0):
        dist = shor.outcome_distribution(
            INST, coherence.noisy_shor_channel(INST, lam, ramp).apply(rho1))
        dec = theorems.noisy_forms(INST, lam, wy).decoherence
        gamma = theorems.decoherence_success_gap(INST, lam)
        for k in (1, 5, 9, 13):
            worst = max(worst, abs(dec - dist[k] - gamma))
    lo, hi = 1 - 1 / 4 - 1 / 16, 1 - 1 / 64 - 1 / 16
    grid = [theorems.decoherence_success_gap(INST, lam)
            for lam in np.linspace(-1.0 / (INST.d**2 - 1), 1.0, 41)]
    in_range = (min(grid) >= lo - EXACT_TOL and max(grid) <= hi + EXACT_TOL
                and abs(theorems.decoherence_success_gap(INST, 1.0) - lo) <= EXACT_TOL
                and abs(theorems.decoherence_success_gap(INST, 0.0) - hi) <= EXACT_TOL)
    _verdict("criterion-10 gap identity at shifted peaks + range",
             worst <= EQ_TOL and in_range, f"worst delta {worst:.3e}")


def test_criterion_11_infrastructure_properties():
    f_dag = shor.inverse_qft(16)
    u_mod = shor.modexp_unitary(INST)
    big = numerics.tensor_product(f_dag, np.eye(4)) @ u_mod
    unit_dev = max(float(np.max(np.abs(op @ op.conj().T - np.eye(op.shape[0]))))
                   for op in (f_dag, u_mod, big))
    ramp = coherence.ramp_phases(16)
    v = numerics.tensor_product(np.diag(np.exp(1j * ramp)), np.eye(4))
    rho = shor.prepare_initial(INST, shor.PseudoPure(0.3, shor.Hadamard()))
    trace_dev, unital_dev = 0.0, 0.0
    for chan in (coherence.measurement_channel(64),
                 coherence.shor_unitary_channel(INST),
                 coherence.depolarizing_channel(64, 0.3, v),
                 coherence.noisy_shor_channel(INST, 0.3, ramp)):
        out = chan.apply(rho)
        trace_dev = max(trace_dev, abs(np.trace(out).real - 1.0))
    for lam in (-1.0 / 4095, 0.0, 0.5, 1.0):
        dep = coherence.depolarizing_channel(64, lam, v)
        unital_dev = max(unital_dev, float(np.max(np.abs(
            dep.apply(np.eye(64, dtype=complex)) - np.eye(64)))))
    es = numerics.hermitian_eigensystem(rho)
    recon_dev = float(np.max(np.abs(es.reconstruct() - rho)))
    dist = shor.outcome_distribution(INST, shor.run_pure_pipeline(
        INST, oracle.random_amplitudes(16, 4, complex_valued=True)))
    norm_dev = abs(float(dist.sum()) - 1.0)
    _verdict("criterion-11 unitarity/trace/unital/reconstruction invariants",
             unit_dev <= 1e-10 and trace_dev <= 1e-10
             and unital_dev <= 1e-13 and recon_dev <= 1e-10
             and norm_dev <= 1e-10,
             f"unitary {unit_dev:.1e}, trace {trace_dev:.1e}, "
             f"unital {unital_dev:.1e}, recon {recon_dev:.1e}")


def test_criterion_12_reports_are_byte_identical(tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"N": 15, "x": 7, "t": 4, "seed": 5}),
                   encoding="utf-8")
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    code_a = cli.main(["verify", "--config", str(cfg), "--out", str(first),
                       "--format", "json"])
    code_b = cli.main(["verify", "--config", str(cfg), "--out", str(second),
                       "--format", "json"])
    identical = first.read_bytes() == second.read_bytes()
    payload = json.loads(first.read_text(encoding="utf-8"))
    _verdict("criterion-12 verification reports reproduce byte for byte",
             code_a == 0 and code_b == 0 and identical and payload["all_pass"],
             f"{len(payload['checks'])} checks, exit {code_a}")
