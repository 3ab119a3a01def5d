"""Jacob's ladder phi_1, its direct iterations and reverse iterations [T]^r.

Two backends:

``smooth``
    phi_1(T) is the Y solving V(Y) = I(T)/pi, with V the almost-exact
    main term (1/pi)(Y log Y + (c - log 2pi) Y) + c0.  Increments of I
    between consecutive reverse iterates are then exact by construction.

``cumulative``
    phi_1(T) = A + int_{T0}^T Z(t)^2 / log t dt, so phi_1' = Z^2/log t holds
    pointwise (the chain rule the orthogonal-system construction needs).
    The anchor A makes both backends agree at T0 = t_floor.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, TruncationNotice
from .hardy_littlewood import HLTable, default_table, ladder_main_derivative, ladder_main_value
from .zeta_core import EULER_GAMMA

MAX_ITER = 100


class Backend(str, enum.Enum):
    SMOOTH = "smooth"
    CUMULATIVE = "cumulative"


class Direction(str, enum.Enum):
    FORWARD = "forward"
    REVERSE = "reverse"


@dataclass(frozen=True)
class LadderContext:
    c: float = EULER_GAMMA
    c0: float = 0.0
    backend: Backend = Backend.SMOOTH
    t_floor: float = 100.0
    tol_rel: float = 1e-10
    table: HLTable = field(default_factory=default_table, compare=False, repr=False)

    def __post_init__(self):
        if not 0.577215 < self.c < 0.577216:
            raise ValueError("c must be Euler's constant")
        if self.t_floor < 10 * math.e:
            raise ValueError("t_floor must be at least 10e")
        object.__setattr__(self, "backend", Backend(self.backend))

    def with_backend(self, backend) -> "LadderContext":
        return LadderContext(self.c, self.c0, Backend(backend), self.t_floor, self.tol_rel, self.table)


@dataclass(frozen=True)
class IterationChain:
    base_T: float
    direction: Direction
    points: tuple
    truncated: bool = False


def _solve_main_value(target, ctx: LadderContext, guess: float) -> float:
    """Y > e with V(Y) = target; Newton from guess, bisection fallback."""
    lo, hi = math.e * 1.0000001, max(guess, 2 * math.e)
    while ladder_main_value(hi, ctx.c, ctx.c0) < target:
        hi *= 2.0
    y = guess
    for _ in range(MAX_ITER):
        f = ladder_main_value(y, ctx.c, ctx.c0) - target
        if f > 0:
            hi = min(hi, y)
        else:
            lo = max(lo, y)
        step = f / float(ladder_main_derivative(y, ctx.c))
        y_new = y - step
        if not lo < y_new < hi:
            y_new = 0.5 * (lo + hi)
        if abs(y_new - y) <= 1e-3 * ctx.tol_rel * y:
            return float(y_new)
        y = y_new
    raise ConvergenceError("main-value inversion did not converge")


def _anchor(ctx: LadderContext) -> float:
    return _phi1_smooth(ctx.t_floor, ctx)


def _phi1_smooth(T: float, ctx: LadderContext) -> float:
    target = ctx.table.integral(T) / math.pi
    return _solve_main_value(target, ctx, guess=T)


def _phi1_cumulative(T, ctx: LadderContext):
    k = ctx.table.log_weighted(T)
    return _anchor(ctx) + k - ctx.table.log_weighted(ctx.t_floor)


def phi1(T, ctx: LadderContext | None = None):
    """phi_1(T); the cumulative backend accepts arrays."""
    ctx = ctx or LadderContext()
    arr = np.asarray(T, dtype=float)
    if arr.size and arr.min() < ctx.t_floor:
        raise DomainError(f"T below t_floor={ctx.t_floor}")
    if ctx.backend is Backend.CUMULATIVE:
        return _phi1_cumulative(T, ctx)
    if arr.ndim == 0:
        return _phi1_smooth(float(arr), ctx)
    return np.array([_phi1_smooth(float(v), ctx) for v in arr.ravel()]).reshape(arr.shape)


def phi1_reverse(T: float, ctx: LadderContext | None = None) -> float:
    """[T]^1 = phi_1^{-1}(T), the unique Y > T with phi_1(Y) = T."""
    ctx = ctx or LadderContext()
    if T < ctx.t_floor:
        raise DomainError(f"T below t_floor={ctx.t_floor}")
    table = ctx.table
    if ctx.backend is Backend.SMOOTH:
        # phi_1(Y) = T  <=>  I(Y) = pi V(T)
        level = math.pi * ladder_main_value(T, ctx.c, ctx.c0)

        def f(y):
            return table.integral(y) - level
    else:
        level = T - _anchor(ctx) + table.log_weighted(ctx.t_floor)

        def f(y):
            return table.log_weighted(y) - level

    lo = T
    hi = T * (1.0 + 2.0 * (1.0 - ctx.c) / math.log(T))
    for _ in range(60):
        if f(hi) > 0:
            break
        lo, hi = hi, hi + (hi - T)
    else:
        raise ConvergenceError("could not bracket the reverse iterate")
    if f(lo) > 0:
        raise ConvergenceError("phi_1(T) >= T: deficit not positive")
    try:
        y = brentq(f, lo, hi, xtol=1e-14 * hi, rtol=1e-15, maxiter=MAX_ITER)
    except RuntimeError as exc:
        raise ConvergenceError(str(exc)) from exc
    return float(y)


def iterate(T: float, r: int, direction=Direction.REVERSE, ctx: LadderContext | None = None,
            strict: bool = True) -> IterationChain:
    """Chain T, phi_1^{-1}(T), ... (reverse) or T, phi_1(T), ... (forward) of r+1 points.

    A forward chain that would leave [t_floor, oo) stops early; with
    ``strict`` this raises TruncationNotice carrying the partial chain.
    """
    ctx = ctx or LadderContext()
    direction = Direction(direction)
    if T < ctx.t_floor:
        raise DomainError(f"T below t_floor={ctx.t_floor}")
    points = [float(T)]
    for _ in range(r):
        if direction is Direction.REVERSE:
            points.append(phi1_reverse(points[-1], ctx))
            continue
        nxt = float(phi1(points[-1], ctx))
        if nxt < ctx.t_floor:
            chain = IterationChain(float(T), direction, tuple(points), truncated=True)
            if strict:
                raise TruncationNotice("forward chain dropped below t_floor", chain)
            return chain
        points.append(nxt)
    return IterationChain(float(T), direction, tuple(points))


def reverse_grid(T: float, k: int, ctx: LadderContext | None = None) -> tuple:
    """Reverse iterates of both endpoints: ([T]^0..[T]^k, [T+2]^0..[T+2]^k)."""
    lower = iterate(T, k, Direction.REVERSE, ctx).points
    upper = iterate(T + 2.0, k, Direction.REVERSE, ctx).points
    return np.array(lower), np.array(upper)
