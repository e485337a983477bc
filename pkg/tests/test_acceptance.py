"""Acceptance gate: every criterion at its stated tolerance.

Each test runs one criterion from dp3.verification and prints a pass/fail
line per check.  Criterion 5 (truncation-defect slope of the stated law
2K+1-|Re sigma|) is expected RED: the mathematically derived defect law is
2K-1-(K+1)|Re sigma| (see the accompanying diagnostic checks, which pin
the derived law to within 0.2); the stated exponent is the first omitted
middle-column term of u itself, which never dominates the equation defect.
"""

import time

import pytest

from dp3 import verification as ver

SEED = 0


def _run(name):
    t0 = time.perf_counter()
    recs = ver.CHECKS[name](SEED)
    dt = time.perf_counter() - t0
    for r in recs:
        print(
            f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: "
            f"{r.measured:.3e} (tol {r.tolerance:.3e}, {r.provenance})"
        )
    return recs, dt


def test_criterion_01_manifold_dependency():
    recs, dt = _run("manifold")
    assert all(r.passed for r in recs)
    assert dt < 1.0


def test_criterion_02_w_identities():
    recs, dt = _run("w-identities")
    assert all(r.passed for r in recs)
    assert dt < 1.0


def test_criterion_03_coefficient_oracles():
    recs, dt = _run("coefficients")
    assert all(r.passed for r in recs)
    assert dt < 10.0


def test_criterion_04_genfun_equivalence():
    recs, dt = _run("genfun")
    assert all(r.passed for r in recs)
    assert dt < 10.0


def test_criterion_05_defect_slopes_as_stated():
    # expected RED: the stated slope law conflicts with the derived one
    recs, dt = _run("defect-slopes")
    assert dt < 30.0
    stated = [r for r in recs if "as specified" in r.name]
    diagnostics = [r for r in recs if "diagnostic" in r.name]
    # the derived-law diagnostics must hold; they pin the actual defect law
    assert all(r.passed for r in diagnostics)
    # the criterion as stated (an honest failure documented in the ledger)
    assert all(r.passed for r in stated), (
        "criterion 5 as stated: the measured defect slope follows "
        "2K-1-(K+1)|Re sigma|, not 2K+1-|Re sigma|"
    )


def test_criterion_06_backlund_roundtrip():
    recs, dt = _run("lattice")
    rt = [r for r in recs if "round-trip" in r.name]
    assert rt and all(r.passed for r in rt)
    assert dt < 30.0


def test_criterion_07_integration_closure():
    recs, dt = _run("closure")
    assert all(r.passed for r in recs)
    assert dt < 60.0


def test_criterion_08_backlund_covariance():
    recs, dt = _run("covariance")
    assert all(r.passed for r in recs)
    assert dt < 10.0


def test_criterion_09_log_constants():
    recs, dt = _run("log-constants")
    assert all(r.passed for r in recs)
    assert dt < 1.0


def test_criterion_10_reference_roots():
    recs, dt = _run("roots")
    assert all(r.passed for r in recs)
    assert dt < 5.0


def test_criterion_11_pole_census():
    recs, dt = _run("pole-census")
    assert all(r.passed for r in recs)
    assert dt < 120.0


def test_criterion_12_lattice_identities():
    recs, dt = _run("lattice")
    lat = [r for r in recs if "lattice identity" in r.name]
    assert len(lat) == 5
    assert all(r.passed for r in lat)
    assert dt < 30.0


def test_criterion_13_limit_oracle():
    recs, dt = _run("limit-oracle")
    assert all(r.passed for r in recs)
    assert dt < 1.0


def test_criterion_14_uniform_consistency():
    recs, dt = _run("uniform")
    assert all(r.passed for r in recs)
    assert dt < 5.0
