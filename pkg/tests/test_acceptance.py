"""Acceptance criteria 1-10, one test each, at the stated tolerances.

Each test records a PASS/FAIL line that is printed in the terminal
summary under "acceptance criteria".
"""
from __future__ import annotations

import math
import time

import mpmath
import numpy as np

from zetaladder.fermat import FermatRational, condition_report, convergence_rows, fermat_scan, is_unit_value
from zetaladder.gram import solve_gram
from zetaladder.hardy_littlewood import HLTable, classical_main
from zetaladder.ladder import phi1, phi1_reverse
from zetaladder.ortho import GenerationSpec, build_grid, cauchy_increments, gram_matrix, power_coeffs, u_map
from zetaladder.titchmarsh import asymptotic_report, prefix
from zetaladder.zeta_core import euler_maclaurin_Z, riemann_siegel_Z, theta

DECADES = (1e3, 1e4, 1e5)
# fixed before looking at any values: 10 equispaced interior points
MR_POINTS = np.linspace(-0.9, 0.9, 10)


def record(log, k, ok, detail):
    log[k] = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(log[k])


def decreasing(v):
    return all(b < a for a, b in zip(v, v[1:]))


def test_criterion_01_gram_residuals(acceptance_log):
    start = time.perf_counter()
    nu = np.arange(0, 100_001)
    t = solve_gram(nu)
    resid = float(np.max(np.abs(theta(t) - math.pi * nu)))
    elapsed = time.perf_counter() - start
    t0_ref = float(mpmath.grampoint(0))
    ok = resid <= 1e-9 and abs(t[0] - 17.8455995405) <= 1e-6 and abs(t[0] - t0_ref) <= 1e-6 and elapsed <= 120
    record(acceptance_log, 1, ok, f"max residual {resid:.2e}, t0 = {t[0]:.10f}, {elapsed:.1f} s")
    assert ok


def test_criterion_02_z_oracle(acceptance_log):
    t = np.linspace(10.0, 200.0, 1000)
    err = float(np.max(np.abs(riemann_siegel_Z(t) - euler_maclaurin_Z(t))))
    z_zero = abs(riemann_siegel_Z(14.1347251417))
    ok = err <= 1e-5 and z_zero <= 1e-4
    record(acceptance_log, 2, ok, f"max |RS - EM| {err:.2e}, |Z(first zero)| {z_zero:.2e}")
    assert ok


def _titchmarsh(kind, cache):
    rows = [r for r in asymptotic_report(DECADES, cache) if r.kind == kind]
    norm = [abs(r.normalized) for r in rows]
    rel = [abs(r.residual) / r.main for r in rows]
    return norm, rel


def test_criterion_03_first_titchmarsh(acceptance_log, cache):
    norm, rel = _titchmarsh("t1", cache)
    ok = max(norm) <= 5 and decreasing(rel)
    record(acceptance_log, 3, ok, f"normalized {['%.2e' % v for v in norm]}, relative gap {['%.2e' % v for v in rel]}")
    assert ok


def test_criterion_04_second_titchmarsh(acceptance_log, cache):
    norm, rel = _titchmarsh("t2", cache)
    zz = -prefix(1e4, cache).t2
    ok = max(norm) <= 5 and decreasing(rel) and zz < 0
    record(acceptance_log, 4, ok,
           f"normalized {['%.2e' % v for v in norm]}, relative gap {['%.2e' % v for v in rel]}, sum ZZ' {zz:.1f}")
    assert ok


def test_criterion_05_hardy_littlewood(acceptance_log, cache, table):
    r = [abs(table.integral(T) - classical_main(T)) / T**0.44 for T in DECADES]
    # no doubling: each value stays within twice the largest earlier one
    bounded = all(r[k] <= 2 * max(r[:k]) for k in range(1, len(r)))
    fine = HLTable(cache, quad_order=2 * table.quad_order)
    drift = max(abs(fine.integral(T) - table.integral(T)) / table.integral(T) for T in DECADES)
    ok = bounded and drift <= 1e-7
    record(acceptance_log, 5, ok, f"|E|/T^0.44 {['%.3f' % v for v in r]}, order-doubling drift {drift:.1e}")
    assert ok


def test_criterion_06_ladder(acceptance_log, smooth):
    inv, law = [], []
    for T in DECADES:
        Y = phi1_reverse(T, smooth)
        inv.append(abs(phi1(Y, smooth) - T) / T)
        law.append((Y - T) * math.log(T) / ((1 - smooth.c) * T))
    gaps = [abs(v - 1) for v in law]
    ok = max(inv) <= 1e-8 and 0.75 <= law[-1] <= 1.25 and decreasing(gaps)
    record(acceptance_log, 6, ok, f"inverse error {max(inv):.1e}, increment law {['%.4f' % v for v in law]}")
    assert ok


def test_criterion_07_limits(acceptance_log, smooth, table):
    # warm the tables to the largest height needed, then time the experiments
    table.extend_past(2 * 1e5 / (1 - smooth.c) * 1.2)
    start = time.perf_counter()
    failures, worst = [], 0.0
    for kind in ("zeta", "t1", "t2"):
        for x in (1.0, 2.0):
            lo, hi = convergence_rows(kind, x, (1e3, 1e5), smooth)
            rel = hi.gap / hi.target
            worst = max(worst, rel)
            if not (hi.gap < lo.gap and rel <= 0.2):
                failures.append((kind, x, lo.gap, hi.gap, rel))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed <= 600
    record(acceptance_log, 7, ok, f"worst relative gap at 1e5 {worst:.3f}, {elapsed:.1f} s, failures {failures}")
    assert ok


def test_criterion_08_fermat(acceptance_log, smooth):
    checked, hits = fermat_scan(20, 7, 3)
    verdict_ok = True
    for n in range(3, 8):
        for x in range(1, 21):
            for y in range(1, 21):
                for z in range(1, 21):
                    fr = FermatRational(x, y, z, n)
                    assert not is_unit_value(fr)
                    for kind in ("zeta", "t1", "t2"):
                        verdict_ok &= condition_report(kind, fr, (), smooth).verdict == "holds"
    ok = not hits and verdict_ok and checked == 40_000
    record(acceptance_log, 8, ok, f"{checked} rationals checked, {len(hits)} unit values, verdicts hold: {verdict_ok}")
    assert ok


def test_criterion_09_orthogonality(acceptance_log, cumulative):
    spec = GenerationSpec((1,), 1, 1e4, 6)
    G = gram_matrix(spec, 512, cumulative, check=False)
    G2 = gram_matrix(spec, 1024, cumulative, check=False)
    off = float(np.max(np.abs(G - np.diag(np.diag(G)))))
    diag = np.diag(G)
    drift = float(np.max(np.abs(G2 - G)))
    grid = build_grid(1e4, 1, cumulative)
    end = max(abs(u_map(1, -1.0, grid, cumulative) + 1), abs(u_map(1, 1.0, grid, cumulative) - 1))
    ok = off <= 1e-3 and np.all((diag >= 0.999) & (diag <= 1.001)) and drift <= 1e-4 and end <= 1e-6
    record(acceptance_log, 9, ok, f"max off-diagonal {off:.1e}, doubling drift {drift:.1e}, endpoint error {end:.1e}")
    assert ok


def test_criterion_10_menshov_rademacher(acceptance_log, cumulative):
    spec = GenerationSpec((1,), 1, 1e4, 64)
    inc = cauchy_increments(power_coeffs(64, 1.1), spec, MR_POINTS, (8, 16, 32), cumulative)
    per_point = [decreasing(inc[:, j]) for j in range(len(MR_POINTS))]
    ok = all(per_point)
    bad = [f"{t:+.1f}" for t, good in zip(MR_POINTS, per_point) if not good]
    record(acceptance_log, 10, ok, f"monotone at {sum(per_point)}/10 points; not monotone at t = {bad}")
    assert ok
