import numpy as np
import pytest

from shor_lab import shor, verification

INST = shor.ShorInstance.create(15, 7, t=4)


def test_suite_passes_on_canonical_instance():
    reports = verification.run_suite(INST, seed=0)
    assert all(rep.passed for rep in reports)
    names = [rep.name for rep in reports]
    assert len(names) == len(set(names))
    for key in ("uniform-coherence-value", "collision-chain-upper",
                "success-floor-nonnegative", "noisy-success-floor",
                "gap-identity", "distribution-normalization"):
        assert key in names


def test_suite_is_deterministic():
    a = verification.run_suite(INST, seed=3, n_random=10)
    b = verification.run_suite(INST, seed=3, n_random=10)
    assert [rep.to_dict() for rep in a] == [rep.to_dict() for rep in b]


def test_suite_seed_moves_the_random_checks():
    a = verification.run_suite(INST, seed=0, n_random=10)
    b = verification.run_suite(INST, seed=123, n_random=10)
    pick = {rep.name: rep for rep in a}
    other = {rep.name: rep for rep in b}
    # the worst signed-draw margin varies continuously with the draws
    assert (pick["success-floor-signed-drift"].margin
            != other["success-floor-signed-drift"].margin)
    # seed-independent checks stay identical
    assert pick["uniform-coherence-value"].lhs == other["uniform-coherence-value"].lhs


def test_suite_records_signed_floor_violations_without_failing():
    reports = {rep.name: rep for rep in verification.run_suite(INST, seed=0)}
    drift = reports["success-floor-signed-drift"]
    assert drift.passed and drift.context["recorded"]
    assert drift.context["violations"] >= 1
    assert drift.margin < 0.0
    strict = reports["success-floor-nonnegative"]
    assert strict.passed and strict.margin > 0.0


def test_suite_requires_exact_mode():
    loose = shor.ShorInstance.create(15, 7, Q=10)
    with pytest.raises(ValueError):
        verification.run_suite(loose)


def test_suite_honors_tolerance_overrides():
    reports = verification.run_suite(INST, seed=0, n_random=5,
                                     tolerances={"cross": 1e-18})
    assert any(not rep.passed for rep in reports)
