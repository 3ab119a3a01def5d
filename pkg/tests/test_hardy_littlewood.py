from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from zetaladder.errors import DomainError
from zetaladder.hardy_littlewood import (
    HLTable,
    classical_main,
    hl_increment,
    hl_integral,
    ladder_main_derivative,
    ladder_main_value,
    small_height_integral,
)
from zetaladder.zeta_core import riemann_siegel_Z


def test_small_height_integral_matches_mpmath():
    with mpmath.workdps(15):
        ref = mpmath.quad(lambda t: abs(mpmath.zeta(0.5 + 1j * t)) ** 2, mpmath.linspace(0, 10, 6))
    assert small_height_integral() == pytest.approx(float(ref), abs=1e-9)


def test_increment_matches_adaptive_quadrature(table):
    a, b = 300.0, 305.5
    ref, _ = quad(lambda t: riemann_siegel_Z(t) ** 2, a, b, epsabs=1e-12, epsrel=1e-12, limit=200)
    assert table.increment(a, b) == pytest.approx(ref, rel=1e-10)
    refk, _ = quad(lambda t: riemann_siegel_Z(t) ** 2 / math.log(t), a, b, epsabs=1e-12, epsrel=1e-12, limit=200)
    assert table.increment(a, b, which="k") == pytest.approx(refk, rel=1e-10)


def test_integral_across_head_boundary(table):
    # [10, 40] straddles the first Gram point; the early gaps are long and
    # contain t = 8 pi where the main sum gains a term, so 8 nodes give ~1e-10
    ref, _ = quad(lambda t: riemann_siegel_Z(t) ** 2, 10, 40, limit=200, epsabs=1e-12)
    assert table.integral(40.0) - table.integral(10.0) == pytest.approx(ref, rel=1e-9)


@given(st.floats(20.0, 2e4), st.floats(0.0, 300.0), st.floats(0.0, 300.0))
def test_additivity(a, d1, d2):
    from zetaladder.hardy_littlewood import default_table

    tab = default_table()
    b, c = a + d1, a + d1 + d2
    lhs = tab.increment(a, c)
    rhs = tab.increment(a, b) + tab.increment(b, c)
    assert lhs == pytest.approx(rhs, rel=1e-11, abs=1e-9)


def test_checkpoint_and_direct_agree(table):
    a, b = 1000.0, 1500.0  # long range uses checkpoint differences
    direct = table.integral(b) - table.integral(a)
    assert table.increment(a, b) == pytest.approx(direct, rel=1e-12)


def test_order_doubling(cache, table):
    fine = HLTable(cache, quad_order=2 * table.quad_order)
    for T in (1e3, 5e3):
        assert fine.integral(T) == pytest.approx(table.integral(T), rel=1e-7)


def test_monotone(table):
    T = np.linspace(100, 2000, 200)
    assert np.all(np.diff(table.integral(T)) > 0)


def test_checkpoint_round_trip(tmp_path, cache):
    path = tmp_path / "hl.bin"
    a = HLTable(cache, path=path)
    a.extend_past(3000.0)
    a.save()
    b = HLTable(cache, path=path)
    assert b.cum_i.tobytes() == a.cum_i.tobytes()
    assert b.cum_k.tobytes() == a.cum_k.tobytes()
    assert b.integral(2500.0) == a.integral(2500.0)


def test_domain_errors(table):
    with pytest.raises(DomainError):
        table.increment(5.0, 20.0)
    with pytest.raises(DomainError):
        ladder_main_value(2.0)


def test_main_terms():
    T = 1e4
    c = 0.5772156649015329
    assert classical_main(T) == pytest.approx(T * math.log(T / (2 * math.pi)) + (2 * c - 1) * T)
    h = 1e-3
    fd = (ladder_main_value(T + h) - ladder_main_value(T - h)) / (2 * h)
    assert ladder_main_derivative(T) == pytest.approx(fd, rel=1e-7)


def test_module_helpers(table):
    assert hl_integral(500.0, table) == table.integral(500.0)
    assert hl_increment(500.0, 510.0, table) == table.increment(500.0, 510.0)
