"""Acceptance suite: one test per verified claim, one printed line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
pass/fail lines.  Each criterion re-runs the relevant verification with its
pinned tolerance; nothing here depends on state from other tests.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

import qig.verify as verify
from qig.metric_family import f_eval, family_a
from qig.ode_classifier import singularities
from qig.state_space import TracelessObservable, su2_bracket


def _criterion(num: int, description: str, passed: bool, detail: str = ""):
    status = "PASS" if passed else "FAIL"
    line = f"criterion {num:02d} [{status}] {description}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert passed, line


def test_criterion_01_su2_structure():
    e = [TracelessObservable.from_coeffs(v) for v in np.eye(3)]
    table_ok = all(
        np.array_equal(su2_bracket(e[i], e[j]).coeffs, e[k].coeffs)
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)))
    rng = np.random.default_rng(0)
    jacobi_dev = 0.0
    for _ in range(100):
        a, b, c = (TracelessObservable.from_coeffs(rng.uniform(-3, 3, 3))
                   for _ in range(3))
        total = (su2_bracket(a, su2_bracket(b, c)).coeffs
                 + su2_bracket(b, su2_bracket(c, a)).coeffs
                 + su2_bracket(c, su2_bracket(a, b)).coeffs)
        jacobi_dev = max(jacobi_dev, float(np.max(np.abs(total))))
    _criterion(1, "rotation-algebra commutator table exact, Jacobi <= 1e-13",
               table_ok and jacobi_dev < 1e-13, f"jacobi_dev={jacobi_dev:.2e}")


@pytest.fixture(scope="module")
def fconstancy_report():
    return verify.suite_fconstancy(seed=0)


@pytest.fixture(scope="module")
def commutators_report():
    return verify.suite_commutators(seed=0)


def test_criterion_02_gradient_cross_validation(fconstancy_report):
    dev = fconstancy_report["details"]["gradient_cross_validation"]
    _criterion(2, "closed-form gradients equal metric-raised gradients "
                  "to 1e-10 at 1000 points for six specs",
               dev < 1e-10, f"max_dev={dev:.2e}")


def test_criterion_03_commutator_law(commutators_report):
    rep = commutators_report
    worst = max(d["max_error"] for d in rep["per_spec"].values())
    control = rep["rld_best_constant_mismatch"]
    _criterion(3, "[Y_i, Y_j] = F X_k to 1e-6 for the constant-F catalog; "
                  "rld fails by > 1e-2",
               rep["passed"], f"max_error={worst:.2e}, rld_gap={control:.2e}")


def test_criterion_04_ode_roundtrip(fconstancy_report):
    d = fconstancy_report["details"]
    ok = d["roundtrip_dev"] < 1e-6 and d["ode_residual"] < 1e-8
    _criterion(4, "branch solutions classify back to their constant "
                  "(1e-6) with ODE residual < 1e-8",
               ok, f"roundtrip={d['roundtrip_dev']:.2e}, "
                   f"residual={d['ode_residual']:.2e}")


def test_criterion_05_family_identifications(fconstancy_report):
    d = fconstancy_report["details"]
    dev = max(d["family_a(1)_vs_bh"], d["family_a(0.25)_vs_wy"])
    _criterion(5, "one-parameter family reduces to the known metrics at "
                  "A=1 and A=1/4 to 1e-12", dev < 1e-12, f"max_dev={dev:.2e}")


def test_criterion_06_non_monotonicity_above_one():
    rep = verify.suite_monotone(seed=0)
    d = rep["details"]
    scalar_ok = d["scalar_counterexample_gap_A4"] > 0.0
    limit_ok = abs(d["derivative_limit_A4"] - (-1.0)) < 1e-4
    scan_ok = (d["family_a(2)"]["violated"] and d["family_a(4)"]["violated"]
               and not d["bures_helstrom"]["violated"]
               and not d["wigner_yanase"]["violated"]
               and not d["bkm"]["violated"])
    _criterion(6, "A > 1 violates operator monotonicity (scalar "
                  "counterexample, derivative limit -1, matrix scan); "
                  "monotone trio clean",
               scalar_ok and limit_ok and scan_ok,
               f"limit={d['derivative_limit_A4']:.6f}")


def test_criterion_07_negative_branch_poles():
    rep = verify.suite_poles()
    poles = singularities(1.0, 0.0, max_count=2)
    pinned = (abs(poles.t_values[0] - 0.20788) < 1e-4
              and abs(poles.t_values[1] - 0.00898) < 1e-4)
    _criterion(7, "tangent-branch poles located to 1e-10 with 1e6 blow-up "
                  "and PoleError on metric evaluation",
               rep["passed"] and pinned,
               f"t0={poles.t_values[0]:.6f}, t1={poles.t_values[1]:.6f}")


def test_criterion_08_action_axioms():
    rep = verify.suite_actions(seed=0, samples=200)
    worst = max(v for v in rep["details"].values())
    _criterion(8, "identity/compatibility axioms and transitivity to 1e-10 "
                  "over 200 random triples", rep["passed"],
               f"max_dev={worst:.2e}")


def test_criterion_09_generator_matching():
    rep = verify.suite_generators(seed=0)
    _criterion(9, "action derivatives at t=0 match fundamental and "
                  "(rescaled) gradient fields to 1e-6", rep["passed"],
               f"max_dev={rep['max_dev']:.2e}")


def test_criterion_10_flow_orbit_equivalence():
    rep = verify.suite_flows()
    d = rep["details"]
    _criterion(10, "RK4 gradient flows match exact orbits to 1e-6; "
                   "RK4 order ratio in [8, 32]", rep["passed"],
               f"rk4_ratio={d['rk4_order_ratio']:.1f}")


def test_criterion_11_determinism_and_budget():
    def run_all():
        t0 = time.perf_counter()
        out = subprocess.run(
            [sys.executable, "-m", "qig.cli", "verify", "all", "--seed", "0"],
            capture_output=True, text=True,
            env={"PATH": "/usr/bin:/bin", "QIG_THREADS": "1"})
        return out.stdout, time.perf_counter() - t0, out.returncode

    out1, dt1, rc1 = run_all()
    out2, dt2, rc2 = run_all()
    identical = out1 == out2 and len(out1) > 0
    passed_flag = rc1 == 0 and rc2 == 0
    within_budget = max(dt1, dt2) < 60.0
    _criterion(11, "verify-all output byte-identical across runs, "
                   "all suites pass, wall time < 60 s single-threaded",
               identical and passed_flag and within_budget,
               f"times={dt1:.1f}s/{dt2:.1f}s")
    report = json.loads(out1)
    assert report["passed"] is True
    assert sorted(report["suites"]) == sorted(verify.SUITES)
