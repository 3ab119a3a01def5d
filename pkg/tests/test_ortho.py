from __future__ import annotations

import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import zetaladder.ortho as ortho
from zetaladder.errors import DomainError, QuadratureWarning
from zetaladder.ortho import (
    GenerationSpec,
    Normalization,
    build_grid,
    cauchy_increments,
    generated_fn,
    gram_matrix,
    legendre,
    mr_condition,
    mr_partial_sum,
    normalized_all,
    normalized_fn,
    interval_factor,
    power_coeffs,
    u_map,
    v_map,
    ztilde_abs,
)
from zetaladder.zeta_core import zeta_mod_sq

T = 1e4
S1 = GenerationSpec((1,), 1, T, 6)


def test_legendre_trivial():
    assert legendre(0, 0.3) == 1.0
    assert legendre(1, 0.5) == 0.5


@given(st.integers(0, 40), st.floats(-1.0, 1.0))
def test_legendre_matches_mpmath(n, t):
    assert legendre(n, t) == pytest.approx(float(mpmath.legendre(n, t)), abs=1e-12)


def test_legendre_domain():
    with pytest.raises(DomainError):
        legendre(2, 1.5)


def test_u_map_endpoints_and_monotone(cumulative):
    for p in (1, 2):
        grid = build_grid(T, 2, cumulative)
        assert u_map(p, -1.0, grid, cumulative) == pytest.approx(-1.0, abs=1e-6)
        assert u_map(p, 1.0, grid, cumulative) == pytest.approx(1.0, abs=1e-6)
        u = u_map(p, np.linspace(-1, 1, 100), grid, cumulative)
        assert np.all(np.diff(u) > 0)


def test_v_map_ranges(cumulative):
    grid = build_grid(T, 2, cumulative)
    ts = np.linspace(-1, 1, 101)
    for p in (1, 2):
        for r in range(p):
            v = v_map(p, r, ts, grid, cumulative)
            lo, hi = grid.interval(p - r)
            assert np.all(v >= lo - 1e-9) and np.all(v <= hi + 1e-9)
        assert v_map(p, 0, -1.0, grid, cumulative) == grid.lower[p]
        assert v_map(p, 0, 1.0, grid, cumulative) == grid.upper[p]
    with pytest.raises(DomainError):
        v_map(1, 1, 0.0, grid, cumulative)


def test_ztilde_identity(cumulative):
    t = np.linspace(200, 3000, 77)
    assert np.allclose(ztilde_abs(t, cumulative) ** 2 * np.log(t), zeta_mod_sq(t), rtol=1e-12, atol=0)
    assert np.all(ztilde_abs(t, cumulative) > 0)


def test_ztilde_small_at_zero(cumulative):
    zero = float(mpmath.zetazero(300).imag)
    assert ztilde_abs(zero, cumulative) < 1e-5


def test_generated_s0_is_legendre(cumulative):
    spec = GenerationSpec((), 1, T, 4)
    for n in range(5):
        assert generated_fn(n, spec, 0.37, cumulative) == legendre(n, 0.37)
    assert interval_factor(spec, cumulative) == 1.0


def test_generated_zero_order_nonnegative(cumulative):
    vals = generated_fn(0, GenerationSpec((2, 1), 2, T, 0), np.linspace(-1, 1, 200), cumulative)
    assert np.all(vals >= 0)


def test_raw_norms_change_of_variables(cumulative):
    # <f_n, f_n> = (2/L)(2/(2n+1)), L = (T+2)^1 - T^1
    G = gram_matrix(S1, 512, cumulative, mode=Normalization.NONE, check=False)
    L = build_grid(T, 1, cumulative).length(1)
    n = np.arange(7)
    assert np.allclose(np.diag(G), (2 / L) * 2 / (2 * n + 1), rtol=1e-8)


def test_paper_and_empirical_scale_the_same_function(cumulative):
    ts = np.linspace(-0.95, 0.95, 31)
    a = normalized_all(S1, ts, cumulative, Normalization.PAPER)
    b = normalized_all(S1, ts, cumulative, Normalization.EMPIRICAL)
    ratio = a / b
    assert np.allclose(ratio, ratio[:, :1], rtol=1e-10)


def test_empirical_norm_is_one(cumulative):
    x, w = np.polynomial.legendre.leggauss(1024)
    for n in (0, 3, 6):
        f = normalized_fn(n, S1, x, cumulative)
        assert np.sum(w * f * f) == pytest.approx(1.0, abs=1e-3)


def test_gram_s0_classical(cumulative):
    spec = GenerationSpec((), 1, T, 8)
    G = gram_matrix(spec, 128, cumulative, mode=Normalization.NONE)
    assert np.allclose(G, np.diag(2 / (2 * np.arange(9) + 1)), atol=1e-13)


def test_gram_orthonormal_and_symmetric(cumulative):
    with warnings.catch_warnings():
        warnings.simplefilter("error", QuadratureWarning)
        G = gram_matrix(S1, 512, cumulative)
    assert np.max(np.abs(G - np.eye(7))) <= 1e-3
    assert np.max(np.abs(G - G.T)) <= 1e-12


def test_gram_depth_two(cumulative):
    G = gram_matrix(GenerationSpec((2, 1), 2, T, 4), 512, cumulative)
    assert np.max(np.abs(G - np.eye(5))) <= 1e-3


def test_gram_warns_when_unstable(cumulative, monkeypatch):
    monkeypatch.setattr(ortho, "STABILITY_TOL", -1.0)
    with pytest.warns(QuadratureWarning):
        gram_matrix(S1, 64, cumulative)


def test_gram_limits(cumulative):
    with pytest.raises(DomainError):
        gram_matrix(S1, 32, cumulative)
    with pytest.raises(DomainError):
        gram_matrix(GenerationSpec((3,), 3, T, 2), 128, cumulative)


def test_spec_validation():
    with pytest.raises(ValueError):
        GenerationSpec((3,), 2, T, 4)


def test_mr_condition():
    assert mr_condition(power_coeffs(50, 1.1), decay=1.1)
    assert not mr_condition(power_coeffs(50, 0.5), decay=0.5)
    assert mr_condition(np.zeros(10))


def test_mr_partial_sums(cumulative):
    spec = GenerationSpec((1,), 1, T, 16)
    a = power_coeffs(16, 1.1)
    t = 0.2
    assert mr_partial_sum(a, spec, t, 0, cumulative) == pytest.approx(a[0] * normalized_fn(0, spec, t, cumulative))
    assert mr_partial_sum(np.zeros(17), spec, t, 16, cumulative) == 0.0
    with pytest.raises(DomainError):
        mr_partial_sum(a, spec, t, 17, cumulative)


def test_mr_l2_increments_shrink(cumulative):
    # in L2 the dyadic blocks shrink like (sum_{M<n<=2M} a_n^2)^(1/2)
    spec = GenerationSpec((1,), 1, T, 64)
    x, w = np.polynomial.legendre.leggauss(1024)
    inc = cauchy_increments(power_coeffs(64, 1.1), spec, x, (8, 16, 32), cumulative)
    l2 = np.sqrt((inc**2) @ w)
    assert np.all(np.diff(l2) < 0)
    a = power_coeffs(64, 1.1)
    expected = [np.sqrt(np.sum(a[m + 1: 2 * m + 1] ** 2)) for m in (8, 16, 32)]
    assert np.allclose(l2, expected, rtol=1e-3)
