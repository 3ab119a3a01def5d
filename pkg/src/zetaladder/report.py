"""Bundled reproduction tables with machine-readable pass flags.

Each suite returns a list of :class:`Check` rows.  The bounds are the
acceptance tolerances; ``passed`` is evaluated here and only reported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fermat import FermatRational, condition_report, convergence_rows, fermat_scan
from .hardy_littlewood import classical_main
from .ladder import Backend, LadderContext, phi1, phi1_reverse
from .ortho import GenerationSpec, build_grid, cauchy_increments, gram_matrix, power_coeffs, u_map
from .titchmarsh import asymptotic_report, prefix

DECADES = (1e3, 1e4, 1e5)
SUITES = ("asymptotics", "limits", "ortho")
HL_EXPONENT = 0.44
MR_POINTS = tuple(np.linspace(-0.9, 0.9, 10))


@dataclass(frozen=True)
class Check:
    suite: str
    item: str
    value: float
    bound: float
    passed: bool


def _strictly_decreasing(v) -> bool:
    return all(b < a for a, b in zip(v, v[1:]))


def asymptotics(ctx: LadderContext) -> list[Check]:
    cache = ctx.table.cache
    out = []
    rows = asymptotic_report(DECADES, cache)
    for kind in ("t1", "t2"):
        sel = [r for r in rows if r.kind == kind]
        rel = [abs(r.residual) / r.main for r in sel]
        for r, g in zip(sel, rel):
            out.append(Check("asymptotics", f"{kind}_normalized@{r.X:g}", abs(r.normalized), 5.0,
                             abs(r.normalized) <= 5.0))
            out.append(Check("asymptotics", f"{kind}_relgap@{r.X:g}", g, math.nan, True))
        out.append(Check("asymptotics", f"{kind}_relgap_decreasing", float(_strictly_decreasing(rel)), 1.0,
                         _strictly_decreasing(rel)))
    pre = prefix(1e4, cache)
    zz = -pre.t2
    out.append(Check("asymptotics", "sum_ZZ_at_N(1e4)", zz, 0.0, zz < 0))
    env = 0.0
    for T in DECADES:
        r = abs(ctx.table.integral(T) - classical_main(T, ctx.c)) / T**HL_EXPONENT
        ok = env == 0.0 or r <= 2.0 * env
        out.append(Check("asymptotics", f"hl_normalized@{T:g}", r, 2.0 * env if env else math.inf, ok))
        env = max(env, r)
    return out


def limits(ctx: LadderContext, scan_max: int = 20) -> list[Check]:
    smooth = ctx.with_backend(Backend.SMOOTH)
    out = []
    law = []
    for T in DECADES:
        Y = phi1_reverse(T, smooth)
        inv = abs(phi1(Y, smooth) - T) / T
        out.append(Check("limits", f"inverse_pair@{T:g}", inv, 1e-8, inv <= 1e-8))
        law.append((Y - T) * math.log(T) / ((1.0 - smooth.c) * T))
    out.append(Check("limits", "increment_law@1e+05", law[-1], 0.25, abs(law[-1] - 1.0) <= 0.25))
    gaps = [abs(v - 1.0) for v in law]
    out.append(Check("limits", "increment_law_gap_decreasing", float(_strictly_decreasing(gaps)), 1.0,
                     _strictly_decreasing(gaps)))
    for kind in ("zeta", "t1", "t2"):
        for x in (1.0, 2.0):
            rows = convergence_rows(kind, x, (DECADES[0], DECADES[-1]), smooth)
            first, last = rows
            rel = last.gap / last.target
            out.append(Check("limits", f"{kind}_x{x:g}_relgap@1e+05", rel, 0.2, rel <= 0.2))
            out.append(Check("limits", f"{kind}_x{x:g}_gap_shrinks", last.gap / first.gap, 1.0,
                             last.gap < first.gap))
    checked, hits = fermat_scan(scan_max, 7, 3)
    out.append(Check("limits", f"fermat_unit_values(<= {scan_max})", float(len(hits)), 0.0, not hits))
    verdicts = all(
        condition_report(k, FermatRational(x, y, z, n), (), smooth).verdict == "holds"
        for n in range(3, 8) for x in range(1, scan_max + 1) for y in range(1, scan_max + 1)
        for z in range(1, scan_max + 1) for k in ("zeta", "t1", "t2")
    )
    out.append(Check("limits", "fermat_verdicts_hold", float(verdicts), 1.0, verdicts and not hits))
    return out


def ortho(ctx: LadderContext, T: float = 1e4, quad_order: int = 512) -> list[Check]:
    cum = ctx.with_backend(Backend.CUMULATIVE)
    out = []
    spec = GenerationSpec((1,), 1, T, 6)
    grid = build_grid(T, 1, cum)
    G = gram_matrix(spec, quad_order, cum, check=False)
    G2 = gram_matrix(spec, 2 * quad_order, cum, check=False)
    off = float(np.max(np.abs(G - np.diag(np.diag(G)))))
    diag = float(np.max(np.abs(np.diag(G) - 1.0)))
    drift = float(np.max(np.abs(G2 - G)))
    end = max(abs(u_map(1, -1.0, grid, cum) + 1.0), abs(u_map(1, 1.0, grid, cum) - 1.0))
    out.append(Check("ortho", "gram_offdiag_max", off, 1e-3, off <= 1e-3))
    out.append(Check("ortho", "gram_diag_dev", diag, 1e-3, diag <= 1e-3))
    out.append(Check("ortho", "gram_doubling_drift", drift, 1e-4, drift <= 1e-4))
    out.append(Check("ortho", "u_endpoint_error", end, 1e-6, end <= 1e-6))
    spec64 = GenerationSpec((1,), 1, T, 64)
    inc = cauchy_increments(power_coeffs(64, 1.1), spec64, np.array(MR_POINTS), (8, 16, 32), cum,
                            quad_order=quad_order)
    for j, t in enumerate(MR_POINTS):
        ok = _strictly_decreasing(inc[:, j])
        out.append(Check("ortho", f"mr_cauchy_decreasing@t={t:+.2f}", float(inc[-1, j]), float(inc[0, j]), ok))
    return out


def run_suite(name: str, ctx: LadderContext) -> list[Check]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return {"asymptotics": asymptotics, "limits": limits, "ortho": ortho}[name](ctx)
