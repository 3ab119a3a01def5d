"""Orthogonal systems generated from Legendre polynomials by the ladder.

For depth p the affine map a_p sends [-1, 1] onto [T^p, (T+2)^p] (reverse
iterates) and

    u_p(t)   = phi_1^p(a_p(t)) - T - 1       an automorphism of [-1, 1]
    v_p^r(t) = phi_1^r(a_p(t)),  r < p

so that, with phi_1' = |Z~|^2 pointwise, the chain rule turns

    f_n(t) = P_n(u_p(t)) prod_r |Z~(v_p^r(t))|

into an orthogonal system on [-1, 1] with <f_n, f_n> = (2/L)(2/(2n+1)),
L = (T+2)^p - T^p.  Generations compose: the innermost map acts first.
The ladder backend is forced to ``cumulative`` here because only it has
phi_1' = Z^2/log t exactly.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError, QuadratureWarning
from .ladder import Backend, LadderContext, phi1, reverse_grid
from .zeta_core import riemann_siegel_Z

ENDPOINT_TOL = 1e-6
STABILITY_TOL = 1e-4
MAX_DEPTH = 2
MAX_N = 8


class Normalization(str, enum.Enum):
    NONE = "none"
    PAPER = "paper"
    EMPIRICAL = "empirical"


def legendre(n: int, t):
    """P_n(t) by the three-term recurrence (vectorized over t)."""
    if n < 0:
        raise DomainError("degree must be nonnegative")
    x = np.asarray(t, dtype=float)
    if np.any(np.abs(x) > 1.0) or np.any(np.isnan(x)):
        raise DomainError("Legendre argument outside [-1, 1]")
    p_prev, p = np.ones_like(x), x.copy()
    if n == 0:
        p = p_prev
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return float(p) if p.ndim == 0 else p


def legendre_all(n_max: int, t) -> np.ndarray:
    """Rows P_0..P_{n_max} evaluated at t."""
    x = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.abs(x) > 1.0):
        raise DomainError("Legendre argument outside [-1, 1]")
    out = np.empty((n_max + 1, x.size))
    out[0] = 1.0
    if n_max >= 1:
        out[1] = x
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + 1) * x * out[k] - k * out[k - 1]) / (k + 1)
    return out


@dataclass(frozen=True)
class GenerationSpec:
    """Depths (p_1, ..., p_s), outermost first; k bounds every depth."""

    depths: tuple
    k: int
    T: float
    n_max: int

    def __post_init__(self):
        object.__setattr__(self, "depths", tuple(int(p) for p in self.depths))
        if self.k < 1 and self.depths:
            raise ValueError("k must be at least 1")
        if any(p < 1 or p > self.k for p in self.depths):
            raise ValueError("every depth must lie in 1..k")
        if self.n_max < 0:
            raise ValueError("n_max must be nonnegative")

    @property
    def s(self) -> int:
        return len(self.depths)


@dataclass(frozen=True)
class ReverseGrid:
    T: float
    lower: tuple
    upper: tuple

    def __post_init__(self):
        lo, up = np.array(self.lower), np.array(self.upper)
        if lo.size != up.size or np.any(lo >= up) or np.any(np.diff(lo) <= 0) or np.any(np.diff(up) <= 0):
            raise ConvergenceError("reverse grid violates ordering")

    @property
    def k(self) -> int:
        return len(self.lower) - 1

    def interval(self, p: int) -> tuple[float, float]:
        if p > self.k:
            raise DomainError(f"depth {p} exceeds grid size {self.k}")
        return self.lower[p], self.upper[p]

    def length(self, p: int) -> float:
        a, b = self.interval(p)
        return b - a


def _cumulative(ctx: LadderContext | None) -> LadderContext:
    ctx = ctx or LadderContext(backend=Backend.CUMULATIVE)
    return ctx if ctx.backend is Backend.CUMULATIVE else ctx.with_backend(Backend.CUMULATIVE)


_grids: dict = {}


def build_grid(T: float, k: int, ctx: LadderContext | None = None) -> ReverseGrid:
    ctx = _cumulative(ctx)
    if T < ctx.t_floor:
        raise DomainError(f"T below t_floor={ctx.t_floor}")
    key = (float(T), int(k), id(ctx.table), ctx.t_floor)
    grid = _grids.get(key)
    if grid is None:
        lo, up = reverse_grid(T, k, ctx)
        grid = _grids[key] = ReverseGrid(float(T), tuple(float(v) for v in lo), tuple(float(v) for v in up))
    return grid


def grid_for(spec: GenerationSpec, ctx: LadderContext | None = None) -> ReverseGrid:
    # the normalization product reaches iterate index s
    return build_grid(spec.T, max([spec.s, *spec.depths]), ctx)


def _check_unit(t):
    x = np.asarray(t, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("argument outside [-1, 1]")
    return x


def _affine(p: int, t, grid: ReverseGrid):
    a, b = grid.interval(p)
    return 0.5 * (b - a) * (t + 1.0) + a


def _phi_iter(r: int, w, ctx: LadderContext):
    for _ in range(r):
        w = phi1(w, ctx)
    return w


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def u_map(p: int, t, grid: ReverseGrid, ctx: LadderContext | None = None):
    ctx = _cumulative(ctx)
    x = _check_unit(t)
    return _out(_phi_iter(p, _affine(p, x, grid), ctx) - grid.T - 1.0)


def v_map(p: int, r: int, t, grid: ReverseGrid, ctx: LadderContext | None = None):
    if not 0 <= r < p:
        raise DomainError("need 0 <= r < p")
    ctx = _cumulative(ctx)
    x = _check_unit(t)
    return _out(_phi_iter(r, _affine(p, x, grid), ctx))


def ztilde_abs(t, ctx: LadderContext | None = None):
    """|Z~(t)| = |Z(t)| / sqrt(log t), i.e. sqrt(phi_1') for the cumulative backend."""
    ctx = _cumulative(ctx)
    x = np.asarray(t, dtype=float)
    if np.any(x < ctx.t_floor):
        raise DomainError(f"t below t_floor={ctx.t_floor}")
    cfg = ctx.table.cache.cfg
    return _out(np.abs(riemann_siegel_Z(x, cfg)) / np.sqrt(np.log(x)))


def _level(p: int, x, grid: ReverseGrid, ctx: LadderContext):
    """One generation: (u_p(x), prod_r |Z~(v_p^r(x))|)."""
    w = _affine(p, x, grid)
    factor = np.ones_like(w)
    for _ in range(p):
        factor = factor * ztilde_abs(w, ctx)
        w = phi1(w, ctx)
    u = w - grid.T - 1.0
    err = np.max(np.abs(u) - 1.0, initial=0.0)
    if err > ENDPOINT_TOL:
        raise ConvergenceError(f"u-map left [-1, 1] by {err:.3g}")
    return np.clip(u, -1.0, 1.0), factor


def _compose(spec: GenerationSpec, t, grid: ReverseGrid, ctx: LadderContext):
    x = np.atleast_1d(_check_unit(t)).astype(float)
    factor = np.ones_like(x)
    for p in reversed(spec.depths):
        x, f = _level(p, x, grid, ctx)
        factor = factor * f
    return x, factor


def generated_all(spec: GenerationSpec, t, ctx: LadderContext | None = None, n_max: int | None = None):
    """Rows f_0..f_{n_max} of the generated system at the points t."""
    ctx = _cumulative(ctx)
    grid = grid_for(spec, ctx)
    x, factor = _compose(spec, t, grid, ctx)
    return legendre_all(spec.n_max if n_max is None else n_max, x) * factor


def generated_fn(n: int, spec: GenerationSpec, t, ctx: LadderContext | None = None):
    if spec.s == 0:
        return legendre(n, t)
    row = generated_all(spec, t, ctx, n_max=n)[n]
    return float(row[0]) if np.ndim(t) == 0 else row


def interval_factor(spec: GenerationSpec, ctx: LadderContext | None = None) -> float:
    """prod_{i=0}^{s} sqrt(2 / ((T+2)^i - T^i)); the i = 0 factor is 1."""
    grid = grid_for(spec, ctx)
    return math.prod(math.sqrt(2.0 / grid.length(i)) for i in range(spec.s + 1))


def _gauss(order: int):
    return _gauss_cached(int(order))


@lru_cache(maxsize=16)
def _gauss_cached(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _effective_order(spec: GenerationSpec, quad_order: int, ctx: LadderContext) -> int:
    # at least 8 nodes per Gram gap of the widest v-range
    if not spec.depths:
        return quad_order
    grid = grid_for(spec, ctx)
    cache = ctx.table.cache
    gaps = 0
    for p in spec.depths:
        a, b = grid.interval(p)
        gaps = max(gaps, cache.count(b) - cache.count(a) + 1)
    return max(quad_order, 8 * gaps)


def _raw_gram(spec: GenerationSpec, order: int, ctx: LadderContext, n_max: int) -> np.ndarray:
    x, w = _gauss(order)
    F = generated_all(spec, x, ctx, n_max) if spec.depths else legendre_all(n_max, x)
    G = (F * w) @ F.T
    return 0.5 * (G + G.T)


@lru_cache(maxsize=64)
def _norms_cached(spec: GenerationSpec, order: int, ctx: LadderContext, n_max: int) -> tuple:
    return tuple(np.sqrt(np.diag(_raw_gram(spec, order, ctx, n_max))))


def empirical_norms(spec: GenerationSpec, quad_order: int = 512, ctx: LadderContext | None = None,
                    n_max: int | None = None) -> np.ndarray:
    ctx = _cumulative(ctx)
    n_max = spec.n_max if n_max is None else n_max
    return np.array(_norms_cached(spec, _effective_order(spec, quad_order, ctx), ctx, n_max))


def normalized_fn(n: int, spec: GenerationSpec, t, ctx: LadderContext | None = None,
                  mode=Normalization.EMPIRICAL, quad_order: int = 512):
    row = normalized_all(spec, t, ctx, mode, quad_order, n_max=n)[n]
    return float(row[0]) if np.ndim(t) == 0 else row


def normalized_all(spec: GenerationSpec, t, ctx: LadderContext | None = None,
                   mode=Normalization.EMPIRICAL, quad_order: int = 512, n_max: int | None = None):
    ctx = _cumulative(ctx)
    mode = Normalization(mode)
    n_max = spec.n_max if n_max is None else n_max
    rows = generated_all(spec, t, ctx, n_max) if spec.depths else legendre_all(n_max, t)
    if mode is Normalization.NONE:
        return rows
    if mode is Normalization.PAPER:
        return rows * interval_factor(spec, ctx)
    return rows / empirical_norms(spec, quad_order, ctx, n_max)[:, None]


def gram_matrix(spec: GenerationSpec, quad_order: int = 512, ctx: LadderContext | None = None,
                mode=Normalization.EMPIRICAL, check: bool = True) -> np.ndarray:
    """<f_m, f_n> on [-1, 1] by Gauss-Legendre quadrature.

    With ``check`` the computation is repeated at twice the order and a
    QuadratureWarning is issued if any entry moves by more than 1e-4.
    """
    if quad_order < 64:
        raise DomainError("quad_order must be at least 64")
    if spec.n_max > MAX_N or any(p > MAX_DEPTH for p in spec.depths):
        raise DomainError(f"supported range is n_max <= {MAX_N}, depths <= {MAX_DEPTH}")
    ctx = _cumulative(ctx)
    mode = Normalization(mode)

    def compute(order):
        G = _raw_gram(spec, _effective_order(spec, order, ctx), ctx, spec.n_max)
        if mode is Normalization.PAPER:
            G = G * interval_factor(spec, ctx) ** 2
        elif mode is Normalization.EMPIRICAL:
            d = np.sqrt(np.diag(G))
            G = G / np.outer(d, d)
        return G

    G = compute(quad_order)
    if check:
        drift = float(np.max(np.abs(compute(2 * quad_order) - G)))
        if drift > STABILITY_TOL:
            warnings.warn(f"Gram matrix moved by {drift:.3g} under order doubling", QuadratureWarning,
                          stacklevel=2)
    return G


# --- Menshov-Rademacher series -------------------------------------------------------

def mr_condition(coeffs, decay: float | None = None) -> bool:
    """Whether sum (a_n log(n+1))^2 < oo is guaranteed.

    ``decay`` is the exponent alpha of a power law |a_n| <= C (n+1)^-alpha;
    the sum converges iff alpha > 1/2.  An all-zero family always qualifies.
    """
    a = np.asarray(coeffs, dtype=float)
    if a.size and not np.any(a):
        return True
    if decay is None:
        return a.size == 0
    return float(decay) > 0.5


def power_coeffs(M: int, decay: float) -> np.ndarray:
    return (np.arange(M + 1) + 1.0) ** (-float(decay))


def mr_partial_sum(coeffs, spec: GenerationSpec, t, M: int, ctx: LadderContext | None = None,
                   mode=Normalization.EMPIRICAL, quad_order: int = 512):
    """S_M(t) = sum_{n<=M} a_n fbar_n(t)."""
    a = np.asarray(coeffs, dtype=float)
    if M < 0 or M >= a.size:
        raise DomainError("M must index the supplied coefficients")
    rows = normalized_all(spec, t, ctx, mode, quad_order, n_max=M)
    out = a[: M + 1] @ rows
    return float(out[0]) if np.ndim(t) == 0 else out


def cauchy_increments(coeffs, spec: GenerationSpec, t, M_values, ctx: LadderContext | None = None,
                      mode=Normalization.EMPIRICAL, quad_order: int = 512) -> np.ndarray:
    """|S_{2M}(t) - S_M(t)| for each M (rows) and point t (columns)."""
    M_values = [int(m) for m in M_values]
    top = 2 * max(M_values)
    a = np.asarray(coeffs, dtype=float)[: top + 1]
    rows = normalized_all(spec, np.atleast_1d(t), ctx, mode, quad_order, n_max=top)
    terms = a[:, None] * rows
    csum = np.cumsum(terms, axis=0)
    return np.array([np.abs(csum[2 * m] - csum[m]) for m in M_values])
