"""Titchmarsh sums over Gram points and their closed-form main terms.

    T1(X) = sum_{t_nu <= X} zeta(1/2 + i t_nu)            = sum (-1)^nu Z(t_nu)
    T2(X) = sum_{t_nu <= X} zeta(1/2+it_nu) zeta(1/2+it_{nu+1}) = -sum Z(t_nu) Z(t_{nu+1})

Both are right-continuous step functions of X, constant on every Gram gap.
"""
from __future__ import annotations

import csv
import io
import json
import math
import threading
from dataclasses import asdict, dataclass

import numpy as np

from .gram import GramCache, default_cache
from .summation import compensated_cumsum
from .zeta_core import EULER_GAMMA

LOG_TWO_PI = math.log(2.0 * math.pi)
REPORT_FIELDS = ("X", "N", "kind", "sum", "main", "residual", "normalized")


@dataclass(frozen=True)
class TitchmarshPrefix:
    X: float
    N: int
    t1: float
    t2: float


class _Prefixes:
    """Compensated prefix sums, rebuilt when the Gram table grows."""

    def __init__(self):
        self._lock = threading.Lock()
        self._store: dict[int, tuple] = {}

    def get(self, cache: GramCache, need: int):
        # T2 at index N needs Z(t_{N+1})
        cache.extend_to_nu(need + 1)
        key = id(cache)
        with self._lock:
            hit = self._store.get(key)
            if hit is not None and hit[0] is cache.t and hit[1].size > need:
                return hit[1], hit[2]
            z = cache.z
            sign = np.where(np.arange(z.size) % 2 == 0, 1.0, -1.0)
            p1 = compensated_cumsum(sign * z)
            p2 = compensated_cumsum(-(z[:-1] * z[1:]))
            self._store[key] = (cache.t, p1, p2)
            return p1, p2


_prefixes = _Prefixes()


def prefix(X: float, cache: GramCache | None = None) -> TitchmarshPrefix:
    cache = cache or default_cache()
    n = cache.count(X)
    p1, p2 = _prefixes.get(cache, n)
    return TitchmarshPrefix(float(X), n, float(p1[n]), float(p2[n]))


def t1_sum(X: float, cache: GramCache | None = None) -> float:
    return prefix(X, cache).t1


def t2_sum(X: float, cache: GramCache | None = None) -> float:
    """Includes the nu-term whenever t_nu <= X, even if t_{nu+1} > X."""
    return prefix(X, cache).t2


def t1_main_term(X: float) -> float:
    if not X > math.e:
        raise ValueError("main term needs X > e")
    return (X * math.log(X) - (1.0 + LOG_TWO_PI) * X) / math.pi


def t2_main_term(X: float, c: float = EULER_GAMMA) -> float:
    return (1.0 + c) * t1_main_term(X)


def t1_error_scale(X: float) -> float:
    return X**0.75 * math.log(X)


def t2_error_scale(X: float) -> float:
    return X ** (11.0 / 12.0) * math.log(X) ** (23.0 / 12.0)


@dataclass(frozen=True)
class ReportRow:
    X: float
    N: int
    kind: str
    sum: float
    main: float
    residual: float
    normalized: float


def asymptotic_report(X_values, cache: GramCache | None = None) -> list[ReportRow]:
    """One t1 row and one t2 row per X; residual = sum - main, normalized by the error scale."""
    xs = [float(x) for x in X_values]
    if any(b < a for a, b in zip(xs, xs[1:])):
        raise ValueError("X_values must be ascending")
    rows = []
    for X in xs:
        pre = prefix(X, cache)
        for kind, total, main, scale in (
            ("t1", pre.t1, t1_main_term(X), t1_error_scale(X)),
            ("t2", pre.t2, t2_main_term(X), t2_error_scale(X)),
        ):
            res = total - main
            rows.append(ReportRow(X, pre.N, kind, total, main, res, res / scale))
    return rows


def _fmt(v):
    return f"{v:.12g}" if isinstance(v, float) else str(v)


def rows_to_csv(rows, fields=None) -> str:
    rows = list(rows)
    fields = fields or (list(asdict(rows[0])) if rows else list(REPORT_FIELDS))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        d = asdict(r)
        w.writerow([_fmt(d[f]) for f in fields])
    return buf.getvalue()


def rows_to_json(rows) -> str:
    return json.dumps([asdict(r) for r in rows], indent=2)
