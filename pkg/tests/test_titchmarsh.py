from __future__ import annotations

import csv
import io
import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetaladder.titchmarsh import (
    REPORT_FIELDS,
    asymptotic_report,
    prefix,
    rows_to_csv,
    rows_to_json,
    t1_main_term,
    t1_sum,
    t2_main_term,
    t2_sum,
)
from zetaladder.zeta_core import EULER_GAMMA


def test_sums_match_direct_mpmath(cache):
    X = 150.0
    n = cache.count(X)
    z = [float(mpmath.siegelz(mpmath.grampoint(nu))) for nu in range(n + 2)]
    t1 = math.fsum((-1) ** nu * z[nu] for nu in range(n + 1))
    t2 = -math.fsum(z[nu] * z[nu + 1] for nu in range(n + 1))
    assert t1_sum(X, cache) == pytest.approx(t1, abs=1e-6)
    assert t2_sum(X, cache) == pytest.approx(t2, abs=1e-6)


def test_zeta_at_gram_points_is_real(cache):
    # zeta(1/2 + i t_nu) = (-1)^nu Z(t_nu)
    for nu in (0, 5, 40):
        val = complex(mpmath.zeta(0.5 + 1j * cache.t[nu]))
        assert abs(val.imag) < 1e-8
        # Riemann-Siegel accuracy at these heights is a few 1e-6
        assert val.real == pytest.approx((-1) ** nu * cache.z[nu], abs=1e-5)


@given(st.floats(20.0, 5000.0))
def test_step_function_constant_on_gaps(X):
    from zetaladder.gram import default_cache

    cache = default_cache()
    n = cache.count(X)
    inside = 0.5 * (cache.t[n] + cache.t[n + 1])
    assert prefix(X, cache).N == prefix(inside, cache).N
    assert t1_sum(X, cache) == t1_sum(cache.t[n], cache)


def test_main_terms():
    X = 1e4
    assert t1_main_term(X) == pytest.approx((X * math.log(X) - (1 + math.log(2 * math.pi)) * X) / math.pi)
    assert t2_main_term(X) == pytest.approx((1 + EULER_GAMMA) * t1_main_term(X))
    with pytest.raises(ValueError):
        t1_main_term(2.0)


def test_sum_zz_negative(cache):
    # sum Z(t_nu) Z(t_{nu+1}) is negative and of size about 2(1+c) N
    pre = prefix(1e4, cache)
    zz = -pre.t2
    assert zz < 0
    assert abs(zz) / (2 * (1 + EULER_GAMMA) * pre.N) == pytest.approx(1.0, rel=0.1)


def test_report_rows_and_csv(cache):
    rows = asymptotic_report([1e3, 2e3], cache)
    assert [r.kind for r in rows] == ["t1", "t2", "t1", "t2"]
    text = rows_to_csv(rows)
    reader = list(csv.reader(io.StringIO(text)))
    assert tuple(reader[0]) == REPORT_FIELDS
    assert len(reader) == 5
    assert reader[1][2] == "t1"
    data = json.loads(rows_to_json(rows))
    assert tuple(data[0]) == REPORT_FIELDS
    with pytest.raises(ValueError):
        asymptotic_report([2e3, 1e3], cache)


def test_residual_normalized_consistent(cache):
    for r in asymptotic_report([5e3], cache):
        assert r.residual == pytest.approx(r.sum - r.main)
        assert np.isfinite(r.normalized)
