"""Riemann-Siegel theta, the Z function and |zeta(1/2+it)|^2 on the critical line.

Everything here accepts scalars or numpy arrays and returns the same
shape.  Two independent evaluators live side by side:

* :func:`riemann_siegel_Z` -- main cosine sum plus the classical
  correction series in ``p = frac(sqrt(t/2pi))``;
* :func:`euler_maclaurin_zeta` -- plain Euler-Maclaurin summation of
  ``zeta(s)``, used as an oracle and for the small-height segment where
  the Riemann-Siegel expansion is not reliable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy.special import loggamma

from .errors import DomainError
from .summation import KahanAccumulator

EULER_GAMMA = 0.57721566490153286061
TWO_PI = 2.0 * math.pi
LOG_TWO_PI = math.log(TWO_PI)

# theta(t) = t/2 log(t/2pi) - t/2 - pi/8 + sum_k a_k / t^(2k-1)
_THETA_TAIL = (
    1.0 / 48.0,
    7.0 / 5760.0,
    31.0 / 80640.0,
    127.0 / 430080.0,
    511.0 / 1216512.0,
)

MAX_CORRECTION_TERMS = 10

_CHUNK = 1 << 15


@dataclass(frozen=True)
class ZetaEvalConfig:
    correction_order: int = 6
    t_min: float = 10.0
    target_abs_tol: float = 1e-6

    def __post_init__(self):
        if not 0 <= self.correction_order <= 10:
            raise ValueError("correction_order must lie in [0, 10]")
        if not self.target_abs_tol > 0:
            raise ValueError("target_abs_tol must be positive")
        if not self.t_min > 0:
            raise ValueError("t_min must be positive")


DEFAULT_CONFIG = ZetaEvalConfig()


def _check_height(t, t_min):
    arr = np.asarray(t, dtype=float)
    if arr.size and (not np.all(np.isfinite(arr)) or np.min(arr) < t_min):
        raise DomainError(f"height below t_min={t_min} or not finite")
    return arr


def _as_output(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def theta(t, t_min: float = DEFAULT_CONFIG.t_min):
    """Riemann-Siegel theta from its asymptotic expansion (abs. error < 1e-10 for t >= 10)."""
    arr = _check_height(t, t_min)
    inv = 1.0 / arr
    inv2 = inv * inv
    tail = np.zeros_like(arr)
    for a in reversed(_THETA_TAIL):
        tail = tail * inv2 + a
    out = 0.5 * arr * (np.log(arr / TWO_PI) - 1.0) - math.pi / 8.0 + tail * inv
    return _as_output(out, t)


def theta_derivative(t, t_min: float = DEFAULT_CONFIG.t_min):
    arr = _check_height(t, t_min)
    inv2 = 1.0 / (arr * arr)
    tail = np.zeros_like(arr)
    for k in reversed(range(len(_THETA_TAIL))):
        tail = tail * inv2 - (2 * k + 1) * _THETA_TAIL[k]
    out = 0.5 * np.log(arr / TWO_PI) + tail * inv2
    return _as_output(out, t)


def theta_exact(t):
    """theta via log-gamma: Im log Gamma(1/4 + it/2) - (t/2) log pi."""
    arr = np.asarray(t, dtype=float)
    out = np.imag(loggamma(0.25 + 0.5j * arr)) - 0.5 * arr * math.log(math.pi)
    return _as_output(out, t)


# --- correction series -------------------------------------------------------
#
# The remainder after the main sum is (-1)^(N-1) tau^(-1/2) sum_k C_k(p) tau^(-k)
# with tau = sqrt(t/2pi), N = floor(tau), p = tau - N.  C_k is obtained as
# 2 Re of a combination of derivatives of
#     F(z) = (exp(pi i (z^2/2 + 3/8)) - i sqrt(2) cos(pi z / 2)) / (2 cos(pi z))
# at z = 1 - 2p, with Gabcke-type weights d[n, l], times the expansion of
# exp(i (theta - leading phase)) in powers of 1/tau.

def _series_div(num, den):
    out = [0] * len(num)
    for k in range(len(num)):
        out[k] = (num[k] - sum(out[i] * den[k - i] for i in range(k))) / den[0]
    return out


def _derive(coeffs, m):
    out = list(coeffs)
    for _ in range(m):
        out = [k * out[k] for k in range(1, len(out))]
    return out


def _rs_weights(n_terms):
    d = {(0, 0): mpmath.mpf(1)}
    get = d.get
    for n in range(1, n_terms):
        for k in range(0, 3 * n // 2 + 1):
            m = 3 * n - 2 * k
            if m:
                d[n, k] = -(m + 1) * get((n - 1, k - 2), 0) + get((n - 1, k), 0) / (4 * m)
            else:
                acc = mpmath.mpf(0)
                for r in range(k):
                    acc -= (-1) ** (k - r) * d[n, r] * mpmath.factorial(2 * k - 2 * r) / mpmath.factorial(k - r)
                d[n, k] = acc
    return d


@lru_cache(maxsize=None)
def correction_polynomials(n_terms: int = MAX_CORRECTION_TERMS, dps: int = 60):
    """C_0..C_{n_terms-1} as float coefficient arrays in x = p - 1/2 (low order first)."""
    degree = 3 * n_terms + 50
    with mpmath.workdps(dps):
        pi = mpmath.pi
        j = mpmath.mpc(0, 1)
        rot = mpmath.expjpi(mpmath.mpf(3) / 8)
        num = [mpmath.mpc(0)] * (degree + 1)
        den = [mpmath.mpf(0)] * (degree + 1)
        for k in range(degree // 2 + 1):
            num[2 * k] = (rot * (j * pi / 2) ** k / mpmath.factorial(k)
                          - j * mpmath.sqrt(2) * (-1) ** k * (pi / 2) ** (2 * k) / mpmath.factorial(2 * k))
            den[2 * k] = 2 * (-1) ** k * pi ** (2 * k) / mpmath.factorial(2 * k)
        f_series = _series_div(num, den)
        d = _rs_weights(n_terms)

        # T_n(z) = sum_l d[n,l] F^(3n-2l)(z) / (pi^(2n-l) (2i)^l), re-expressed in x (z = -2x)
        t_polys = []
        for n in range(n_terms):
            poly = [mpmath.mpc(0)] * (degree + 1)
            for l in range(3 * n // 2 + 1):
                w = d[n, l] / (pi ** (2 * n - l) * (2 * j) ** l)
                for i, v in enumerate(_derive(f_series, 3 * n - 2 * l)):
                    poly[i] += w * v
            t_polys.append([c * (-2) ** i for i, c in enumerate(poly)])

        # exp(i delta), delta = sum_k a_k / t^(2k-1) and t = 2 pi tau^2
        delta = [mpmath.mpf(0)] * n_terms
        for k, a in enumerate(_THETA_TAIL, start=1):
            if 4 * k - 2 < n_terms:
                delta[4 * k - 2] = mpmath.mpf(a) / (2 * pi) ** (2 * k - 1)
        phase = [mpmath.mpc(1)] + [mpmath.mpc(0)] * (n_terms - 1)
        term = list(phase)
        for m in range(1, n_terms):
            term = [sum(term[a] * j * delta[b - a] for a in range(b + 1)) / m for b in range(n_terms)]
            phase = [p + q for p, q in zip(phase, term)]

        result = []
        for n in range(n_terms):
            poly = [mpmath.mpf(0)] * (degree + 1)
            for m in range(n + 1):
                for i, v in enumerate(t_polys[m]):
                    poly[i] += 2 * mpmath.re(phase[n - m] * v)
            arr = np.array([float(v) for v in poly])
            # drop coefficients that cannot matter for |x| <= 1/2
            keep = np.nonzero(np.abs(arr) * 0.5 ** np.arange(arr.size) > 1e-30)[0]
            result.append(arr[: keep[-1] + 1] if keep.size else arr[:1])
        return tuple(result)


def _horner(coeffs, x):
    out = np.zeros_like(x)
    for c in coeffs[::-1]:
        out = out * x + c
    return out


def _z_block(t, th, order):
    tau = np.sqrt(t / TWO_PI)
    n_top = np.floor(tau).astype(np.int64)
    acc = KahanAccumulator(t.shape)
    nmin, nmax = int(n_top.min()), int(n_top.max())
    for n in range(1, nmax + 1):
        term = np.cos(th - t * math.log(n)) / math.sqrt(n)
        acc.add(term, where=None if n <= nmin else n <= n_top)
    main = 2.0 * acc.result()
    if order == 0:
        return main
    p = tau - n_top
    x = p - 0.5
    w = 1.0 / tau
    polys = correction_polynomials()
    rem = np.zeros_like(t)
    for k in reversed(range(order)):
        rem = rem * w + _horner(polys[k], x)
    sign = np.where(n_top % 2 == 1, 1.0, -1.0)
    return main + sign * rem / np.sqrt(tau)


def riemann_siegel_Z(t, cfg: ZetaEvalConfig = DEFAULT_CONFIG):
    """Hardy's Z(t) by the Riemann-Siegel formula.

    ``cfg.correction_order`` counts the correction terms C_0, C_1, ...
    added to the main sum (0 gives the bare cosine sum).
    """
    arr = _check_height(t, cfg.t_min)
    flat = np.atleast_1d(arr).ravel()
    th = np.atleast_1d(theta(flat, cfg.t_min))
    out = np.empty_like(flat)
    for start in range(0, flat.size, _CHUNK):
        sl = slice(start, start + _CHUNK)
        out[sl] = _z_block(flat[sl], th[sl], cfg.correction_order)
    return _as_output(out.reshape(np.shape(arr)), t)


def zeta_mod_sq(t, cfg: ZetaEvalConfig = DEFAULT_CONFIG):
    """|zeta(1/2+it)|^2, computed as Z(t)^2."""
    z = riemann_siegel_Z(t, cfg)
    return z * z


# --- Euler-Maclaurin oracle ----------------------------------------------------

@lru_cache(maxsize=None)
def _bernoulli_weights(k_terms):
    # B_{2k} / (2k)!
    return tuple(float(mpmath.bernoulli(2 * k) / mpmath.factorial(2 * k)) for k in range(1, k_terms + 1))


def euler_maclaurin_zeta(s, n_terms=None, k_terms: int = 20):
    """zeta(s) for complex s by Euler-Maclaurin summation (vectorized in s).

    ``n_terms`` defaults to ``|Im s| + 30``; with ``k_terms=20`` the
    tail is far below double precision for |Im s| <= a few thousand.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if n_terms is None:
        n_terms = int(np.max(np.abs(s.imag))) + 30
    big_n = float(n_terms)
    acc_re = KahanAccumulator(s.shape)
    acc_im = KahanAccumulator(s.shape)
    for n in range(1, n_terms):
        term = np.exp(-s * math.log(n))
        acc_re.add(term.real)
        acc_im.add(term.imag)
    total = acc_re.result() + 1j * acc_im.result()
    n_pow = np.exp(-s * math.log(big_n))
    total += big_n * n_pow / (s - 1.0) + 0.5 * n_pow
    rising = s.copy()
    power = n_pow / big_n
    for k, weight in enumerate(_bernoulli_weights(k_terms), start=1):
        total += weight * rising * power
        rising = rising * (s + 2 * k - 1) * (s + 2 * k)
        power = power / (big_n * big_n)
    return total


def euler_maclaurin_Z(t):
    """Z(t) = Re(exp(i theta(t)) zeta(1/2+it)) with theta from log-gamma."""
    arr = np.asarray(t, dtype=float)
    flat = np.atleast_1d(arr).ravel()
    z = euler_maclaurin_zeta(0.5 + 1j * flat)
    out = np.real(np.exp(1j * np.atleast_1d(theta_exact(flat))) * z)
    return _as_output(out.reshape(np.shape(arr)), t)


def euler_maclaurin_mod_sq(t):
    arr = np.asarray(t, dtype=float)
    z = euler_maclaurin_zeta(0.5 + 1j * np.atleast_1d(arr).ravel())
    out = (z.real**2 + z.imag**2).reshape(np.shape(arr))
    return _as_output(out, t)
