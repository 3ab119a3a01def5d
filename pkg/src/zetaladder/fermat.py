"""Fermat rationals (x^n + y^n)/z^n and the limit experiments built on them.

Exact verdicts come from integer arithmetic only.  The ratio functions
evaluate, at finite tau, the quantities whose tau -> oo limits are

    zeta-kind:  (1/tau) int_X^{[X]^1} |zeta(1/2+it)|^2 dt     -> x
    t1-kind:    (1/tau) (T1([X]^1) - T1(X))                   -> x / pi
    t2-kind:    (1/tau) (T2([X]^1) - T2(X))                   -> (1 + c) x / pi

with X = x tau / (1 - c).  They illustrate the limits; they prove nothing.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .errors import DomainError
from .ladder import LadderContext, phi1_reverse
from .titchmarsh import t1_sum, t2_sum


class Kind(str, enum.Enum):
    ZETA = "zeta"
    T1 = "t1"
    T2 = "t2"


@dataclass(frozen=True)
class FermatRational:
    x: int
    y: int
    z: int
    n: int

    def __post_init__(self):
        for name in ("x", "y", "z", "n"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise TypeError(f"{name} must be an int")
        if min(self.x, self.y, self.z) < 1:
            raise ValueError("x, y, z must be natural numbers")
        if self.n < 3:
            raise ValueError("exponent n must be at least 3")

    @property
    def value(self) -> Fraction:
        return fermat_value_exact(self)


def fermat_value_exact(fr: FermatRational) -> Fraction:
    return Fraction(fr.x**fr.n + fr.y**fr.n, fr.z**fr.n)


def is_unit_value(fr: FermatRational) -> bool:
    return fr.x**fr.n + fr.y**fr.n == fr.z**fr.n


def fermat_scan(max_xyz: int = 20, max_n: int = 7, min_n: int = 3):
    """Exhaustive search for x^n + y^n = z^n.

    Returns (number of triples checked, list of (x, y, z, n) hits).  Any
    exponent >= 1 is accepted so the search can be checked on n = 2.
    """
    if min_n < 1 or max_xyz < 1:
        raise ValueError("need min_n >= 1 and max_xyz >= 1")
    checked = 0
    hits = []
    for n in range(min_n, max_n + 1):
        powers = [k**n for k in range(max_xyz + 1)]
        targets = {p: k for k, p in enumerate(powers) if k}
        for x in range(1, max_xyz + 1):
            for y in range(1, max_xyz + 1):
                checked += max_xyz
                z = targets.get(powers[x] + powers[y])
                if z is not None:
                    hits.append((x, y, z, n))
    return checked, hits


# --- limit experiments -------------------------------------------------------------

def _base_point(x: float, tau: float, ctx: LadderContext) -> float:
    if not x > 0:
        raise DomainError("x must be positive")
    X = x * tau / (1.0 - ctx.c)
    if X < ctx.t_floor:
        raise DomainError(f"x tau/(1-c) = {X} is below t_floor={ctx.t_floor}")
    return X


def hl_increment_ratio(x: float, tau: float, ctx: LadderContext | None = None) -> float:
    ctx = ctx or LadderContext()
    X = _base_point(x, tau, ctx)
    return ctx.table.increment(X, phi1_reverse(X, ctx)) / tau


def t1_increment_ratio(x: float, tau: float, ctx: LadderContext | None = None) -> float:
    ctx = ctx or LadderContext()
    X = _base_point(x, tau, ctx)
    cache = ctx.table.cache
    return (t1_sum(phi1_reverse(X, ctx), cache) - t1_sum(X, cache)) / tau


def t2_increment_ratio(x: float, tau: float, ctx: LadderContext | None = None) -> float:
    ctx = ctx or LadderContext()
    X = _base_point(x, tau, ctx)
    cache = ctx.table.cache
    return (t2_sum(phi1_reverse(X, ctx), cache) - t2_sum(X, cache)) / tau


_RATIOS = {Kind.ZETA: hl_increment_ratio, Kind.T1: t1_increment_ratio, Kind.T2: t2_increment_ratio}


def target_scale(kind, c: float) -> float:
    """Limit per unit x: 1, 1/pi, (1+c)/pi."""
    kind = Kind(kind)
    return {Kind.ZETA: 1.0, Kind.T1: 1.0 / math.pi, Kind.T2: (1.0 + c) / math.pi}[kind]


def target(kind, x: float, c: float) -> float:
    return target_scale(kind, c) * float(x)


def increment_ratio(kind, x: float, tau: float, ctx: LadderContext | None = None) -> float:
    return _RATIOS[Kind(kind)](x, tau, ctx)


@dataclass(frozen=True)
class ConvergenceRow:
    tau: float
    ratio: float
    target: float
    gap: float


def convergence_rows(kind, x: float, tau_values, ctx: LadderContext | None = None) -> list[ConvergenceRow]:
    ctx = ctx or LadderContext()
    tgt = target(kind, x, ctx.c)
    rows = []
    for tau in tau_values:
        r = increment_ratio(kind, x, tau, ctx)
        rows.append(ConvergenceRow(float(tau), r, tgt, abs(r - tgt)))
    return rows


@dataclass
class ConditionReport:
    kind: str
    x: int
    y: int
    z: int
    n: int
    value: str
    target: float
    forbidden: float
    verdict: str
    rows: list = field(default_factory=list)

    def to_dict(self):
        d = asdict(self)
        d["rows"] = [asdict(r) if not isinstance(r, dict) else r for r in self.rows]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def condition_report(kind, fr: FermatRational, tau_values=(), ctx: LadderContext | None = None) -> ConditionReport:
    """Exact verdict plus numerical rows.

    The forbidden limit (1, 1/pi, (1+c)/pi) is reached iff the Fermat
    rational equals 1; "holds" means it does not.  Rows are illustration.
    """
    ctx = ctx or LadderContext()
    kind = Kind(kind)
    taus = [float(t) for t in tau_values]
    if any(b < a for a, b in zip(taus, taus[1:])):
        raise ValueError("tau_values must be ascending")
    value = fermat_value_exact(fr)
    x = float(value)
    rows = convergence_rows(kind, x, taus, ctx) if taus else []
    return ConditionReport(
        kind=kind.value, x=fr.x, y=fr.y, z=fr.z, n=fr.n,
        value=f"{value.numerator}/{value.denominator}",
        target=target(kind, x, ctx.c),
        forbidden=target_scale(kind, ctx.c),
        verdict="fails" if is_unit_value(fr) else "holds",
        rows=rows,
    )


def parse_x(text: str) -> float:
    """Accept '2', '0.5', '91/125' or a Fermat tuple 'x,y,z,n'."""
    text = text.strip()
    if text.count(",") == 3:
        x, y, z, n = (int(v) for v in text.split(","))
        return float(fermat_value_exact(FermatRational(x, y, z, n)))
    return float(Fraction(text))


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["tau", "ratio", "target", "gap"])
    for r in rows:
        w.writerow([f"{r.tau:.12g}", f"{r.ratio:.12g}", f"{r.target:.12g}", f"{r.gap:.12g}"])
    return buf.getvalue()
