"""Acceptance criteria, one test each, printing a PASS/FAIL line.

Trend criteria compare finite-t ratios against asymptotic targets with no
known rate; they report the measured sequence so drift is visible.
"""
import math
import time

import numpy as np
import pytest

from eisenqe.domain import fundamental_domain, mu_measure, parse_region, staircase_cover
from eisenqe.eisenstein import residue_at_one, scattering_state
from eisenqe.measures import (
    SigmaSchedule,
    limit_target,
    luo_sarnak_ratio,
    nu_measure,
    parseval_check,
    phi_log_derivative_ratio,
    quantum_measure,
    sweep,
)
from eisenqe.verify import (
    check_bessel_moment,
    check_dual_method,
    check_functional_equation,
    check_phi_unitarity,
    check_ramanujan,
    check_xi_symmetry,
)
from eisenqe.zeros import default_table, scattering_poles

A = parse_region("0,0.5,1,2")


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail

    return emit


def _strictly_closer(ratios):
    gaps = [abs(r - 1.0) for r in ratios]
    return all(b < a for a, b in zip(gaps[:-1], gaps[1:]))


def test_01_dual_method(report):
    start = time.perf_counter()
    r = check_dual_method(np.random.default_rng(1), count=30, tol=1e-8)
    wall = time.perf_counter() - start
    report(1, r.passed and wall < 30, f"max rel discrepancy {r.residual:.2e} < 1e-8 on 30 (z, s), {wall:.1f} s < 30 s")


def test_02_functional_equation(report):
    start = time.perf_counter()
    r = check_functional_equation(np.random.default_rng(2), heights=(10.0, 40.0, 100.0), points=5, tol=1e-8)
    wall = time.perf_counter() - start
    report(2, r.passed and wall < 60, f"max rel residual {r.residual:.2e} < 1e-8, {wall:.1f} s < 60 s")


def test_03_phi_unitarity(report):
    r = check_phi_unitarity(np.random.default_rng(3), tol=1e-10)
    report(3, r.passed, f"max residual {r.residual:.2e} < 1e-10")


def test_04_xi_symmetry(report):
    r = check_xi_symmetry(np.random.default_rng(4), count=100, tol=1e-12)
    report(4, r.passed, f"max rel residual {r.residual:.2e} < 1e-12 over 100 random s")


def test_05_bessel_moment(report):
    r = check_bessel_moment(np.random.default_rng(5), count=20, tol=1e-6)
    report(5, r.passed, f"max rel error {r.residual:.2e} < 1e-6 over 20 triples")


def test_06_ramanujan(report):
    r = check_ramanujan(np.random.default_rng(6), tol=1e-3)
    report(6, r.passed, f"max rel error {r.residual:.2e} < 1e-3 at N = 1e4")


@pytest.mark.slow
def test_07_parseval(report):
    start = time.perf_counter()
    r = parseval_check(s=complex(0.6, 10.0))
    wall = time.perf_counter() - start
    rel = r.gap / abs(r.rhs)
    report(7, rel < 1e-4 and wall < 300, f"lhs {r.lhs:.12f} rhs {r.rhs:.12f} rel gap {rel:.2e} < 1e-4, {wall:.1f} s")


def test_08_residue_pipeline(report):
    rho = scattering_poles(default_table(), 1)[0]
    worst = 0.0
    for z in (1j, complex(0.3, 1.5), complex(-0.45, 0.95)):
        fast = scattering_state(z, rho, "fast")
        slow = scattering_state(z, rho, "contour")
        worst = max(worst, abs(slow - fast) / abs(fast))
    report(8, worst < 1e-6, f"contour vs E(z, 1 - rho) max rel {worst:.2e} < 1e-6 at 3 points")


@pytest.mark.slow
def test_09_mu_trend(report):
    start = time.perf_counter()
    res = sweep(SigmaSchedule.parse("const:0.75"), [20.0, 40.0, 80.0], [A], mode="mu")
    wall = time.perf_counter() - start
    ratios = res.ratios()
    ok = _strictly_closer(ratios) and abs(ratios[-1] - 1) < 0.15 and wall < 900
    report(9, ok, f"ratios at t = 20, 40, 80: {[round(r, 4) for r in ratios]}, {wall:.0f} s")


@pytest.mark.slow
def test_10_luo_sarnak_trend(report):
    start = time.perf_counter()
    r20 = luo_sarnak_ratio(A, 20.0)
    r100 = luo_sarnak_ratio(A, 100.0)
    wall = time.perf_counter() - start
    ok = 0.6 <= r100 <= 1.4 and abs(r100 - 1) < abs(r20 - 1) and wall < 1200
    report(10, ok, f"ratio t = 20: {r20:.4f}, t = 100: {r100:.4f} (band [0.6, 1.4]), {wall:.0f} s")


@pytest.mark.slow
def test_11_nu_trend(report):
    area = mu_measure(A)
    ratios = [nu_measure(A, complex(0.75, t), 0.75)[0] / area for t in (20.0, 40.0, 80.0)]
    ok = _strictly_closer(ratios) and abs(ratios[-1] - 1) < 0.15
    report(11, ok, f"nu/mu(A) at t = 20, 40, 80: {[round(r, 4) for r in ratios]}")


@pytest.mark.slow
def test_12_scattering(report):
    poles = scattering_poles(default_table(), 3)
    res = sweep(None, [], [A], mode="scattering", poles=poles)
    identity = all(row.value == quantum_measure(A, 1 - rho)[0] for row, rho in zip(res.rows, poles))
    # the fast path itself: residue quotient equals E(z, 1 - rho) inside A
    pointwise = max(
        abs(scattering_state(z, rho, "contour") - scattering_state(z, rho, "fast")) / abs(scattering_state(z, rho, "fast"))
        for rho in poles
        for z in (complex(0.1, 1.1), complex(0.4, 1.9))
    )
    ratios = res.ratios()
    trend = _strictly_closer(ratios) and abs(ratios[-1] - 1) < 0.15
    ok = identity and pointwise < 1e-6 and trend
    report(12, ok, f"identity {identity}, pointwise residue rel {pointwise:.1e}, ratios {[round(r, 4) for r in ratios]}")


def test_13_volume_and_residue(report):
    cover = {k: mu_measure(staircase_cover(k)) for k in (100, 200, 400)}
    extrap = [2 * cover[2 * k] - cover[k] for k in (100, 200)]
    vol_err = abs(extrap[-1] - math.pi / 3)
    exact_err = abs(mu_measure(fundamental_domain()) - math.pi / 3)
    res_err = max(abs(residue_at_one(z) - 3 / math.pi) for z in (1j, complex(0.3, 1.5)))
    ok = vol_err < 1e-6 and abs(extrap[-1] - math.pi / 3) < abs(extrap[0] - math.pi / 3) and res_err < 1e-3
    report(13, ok, f"cover volume error {vol_err:.1e} (exact domain {exact_err:.1e}), residue error {res_err:.1e}")


def test_14_phi_log_derivative(report):
    r = phi_log_derivative_ratio(500.0)
    report(14, 0.7 <= r <= 1.3, f"phi'/phi / (-4 log t) at t = 500: {r:.4f}")
