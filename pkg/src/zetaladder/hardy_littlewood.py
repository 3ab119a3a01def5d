"""The Hardy-Littlewood integral I(T) = int_0^T |zeta(1/2+it)|^2 dt.

The range [t_min, T] is cut at Gram points; Z^2 completes about one
oscillation per Gram gap, so a fixed Gauss-Legendre rule per gap is
enough.  [0, t_min] is integrated once with the Euler-Maclaurin
evaluator, where Riemann-Siegel is not trustworthy.

Alongside I the table keeps K(T) = int_{t_min}^T Z(t)^2 / log t dt,
the integral behind the cumulative Jacob-ladder backend.
"""
from __future__ import annotations

import math
import threading
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import DomainError
from .gram import GramCache, default_cache
from .summation import compensated_cumsum, fsum
from .zeta_core import EULER_GAMMA, LOG_TWO_PI, euler_maclaurin_mod_sq, riemann_siegel_Z

DEFAULT_QUAD_ORDER = 8
HEAD_PANELS = 6
CHECKPOINT_MAGIC = b"ZLADHLCK"
CHECKPOINT_VERSION = 1
CHECKPOINT_DTYPE = np.dtype([("T", "<f8"), ("I", "<f8"), ("quad_order", "<u4")])
_HEADER_DTYPE = np.dtype([("magic", "S8"), ("version", "<u4"), ("correction_order", "<u4")])
_DIRECT_GAPS = 64
_BLOCK = 1 << 14


@lru_cache(maxsize=None)
def _gauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


@lru_cache(maxsize=None)
def small_height_integral(t_min: float = 10.0, panels: int = 10, order: int = 40) -> float:
    """int_0^{t_min} |zeta(1/2+it)|^2 dt by Gauss-Legendre on the Euler-Maclaurin evaluator."""
    x, w = _gauss(order)
    edges = np.linspace(0.0, t_min, panels + 1)
    parts = []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes = 0.5 * (b - a) * x + 0.5 * (b + a)
        parts.append(0.5 * (b - a) * np.dot(w, euler_maclaurin_mod_sq(nodes)))
    return fsum(parts)


def panel_integrals(a, b, cache: GramCache, order: int = DEFAULT_QUAD_ORDER):
    """Gauss-Legendre integrals of Z^2 and Z^2/log t over each [a_i, b_i] (vectorized)."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    x, w = _gauss(order)
    out_i = np.empty(a.size)
    out_k = np.empty(a.size)
    for start in range(0, a.size, _BLOCK):
        sl = slice(start, start + _BLOCK)
        half = 0.5 * (b[sl] - a[sl])
        nodes = (half[:, None] * x[None, :] + 0.5 * (b[sl] + a[sl])[:, None]).ravel()
        z2 = riemann_siegel_Z(nodes, cache.cfg) ** 2
        z2 = z2.reshape(-1, order)
        out_i[sl] = half * (z2 @ w)
        out_k[sl] = half * ((z2 / np.log(nodes.reshape(-1, order))) @ w)
    return out_i, out_k


class HLTable:
    """Per-Gram-gap integrals and their prefix sums (checkpoints at every t_nu)."""

    def __init__(self, cache: GramCache | None = None, quad_order: int = DEFAULT_QUAD_ORDER,
                 path: str | Path | None = None):
        self.cache = cache or default_cache()
        self.quad_order = quad_order
        self.t_min = self.cache.cfg.t_min
        self.path = Path(path) if path is not None else None
        self._lock = threading.Lock()
        self.small = small_height_integral(self.t_min)
        self.head_i = self.head_k = None
        self.gap_i = np.empty(0)
        self.gap_k = np.empty(0)
        self.cum_i = np.empty(0)  # I(t_nu)
        self.cum_k = np.empty(0)  # K(t_nu)
        self._persisted = 0
        if self.path is not None and self.path.exists():
            self._load()

    # -- building ---------------------------------------------------------------
    def _head(self):
        if self.head_i is None:
            edges = np.linspace(self.t_min, self.cache.first(), HEAD_PANELS + 1)
            hi, hk = panel_integrals(edges[:-1], edges[1:], self.cache, self.quad_order)
            self.head_i, self.head_k = fsum(hi), fsum(hk)

    def extend_past(self, T: float):
        """Make checkpoints available for every Gram point up to and beyond T."""
        self.cache.extend_past(T)
        n_need = int(np.searchsorted(self.cache.t, T, side="right"))  # points <= T
        if self.cum_i.size > n_need:
            return
        with self._lock:
            self._head()
            t = self.cache.t
            n_gaps = min(max(n_need + 1, self.cum_i.size), t.size) - 1
            have = self.gap_i.size
            if n_gaps > have:
                gi, gk = panel_integrals(t[have:n_gaps], t[have + 1:n_gaps + 1], self.cache, self.quad_order)
                self.gap_i = np.concatenate([self.gap_i, gi])
                self.gap_k = np.concatenate([self.gap_k, gk])
            base_i = fsum([self.small, self.head_i])
            self.cum_i = np.concatenate([[base_i], base_i + compensated_cumsum(self.gap_i)])
            self.cum_k = np.concatenate([[self.head_k], self.head_k + compensated_cumsum(self.gap_k)])

    # -- persistence --------------------------------------------------------------
    def _files(self):
        return self.path, self.path.with_suffix(self.path.suffix + ".logw")

    def save(self):
        """Write checkpoint records (T, I, quad_order); K goes to a sibling file."""
        if self.path is None:
            return
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            n = self.cum_i.size
            for fname, values in zip(self._files(), (self.cum_i, self.cum_k)):
                fresh = not fname.exists() or self._persisted == 0
                start = 0 if fresh else self._persisted
                rec = np.empty(n - start, dtype=CHECKPOINT_DTYPE)
                rec["T"] = self.cache.t[start:n]
                rec["I"] = values[start:n]
                rec["quad_order"] = self.quad_order
                with open(fname, "wb" if fresh else "ab") as fh:
                    if fresh:
                        head = np.array([(CHECKPOINT_MAGIC, CHECKPOINT_VERSION, self.cache.cfg.correction_order)],
                                        dtype=_HEADER_DTYPE)
                        fh.write(head.tobytes())
                        fh.write(np.array([self.small, self.head_i if fname == self.path else self.head_k],
                                          dtype="<f8").tobytes())
                    fh.write(rec.tobytes())
            self._persisted = n

    def _read(self, fname):
        raw = fname.read_bytes()
        hs = _HEADER_DTYPE.itemsize
        if len(raw) < hs + 16:
            return None
        head = np.frombuffer(raw[:hs], dtype=_HEADER_DTYPE)[0]
        if bytes(head["magic"]) != CHECKPOINT_MAGIC or int(head["version"]) != CHECKPOINT_VERSION \
                or int(head["correction_order"]) != self.cache.cfg.correction_order:
            return None
        consts = np.frombuffer(raw[hs:hs + 16], dtype="<f8")
        body = raw[hs + 16:]
        n = len(body) // CHECKPOINT_DTYPE.itemsize
        rec = np.frombuffer(body[: n * CHECKPOINT_DTYPE.itemsize], dtype=CHECKPOINT_DTYPE)
        return consts, rec

    def _load(self):
        f_i, f_k = self._files()
        if not f_k.exists():
            return
        got_i, got_k = self._read(f_i), self._read(f_k)
        if got_i is None or got_k is None:
            return
        (ci, ri), (ck, rk) = got_i, got_k
        n = min(ri.size, rk.size, self.cache.t.size)
        if n == 0 or np.any(ri["quad_order"][:n] != self.quad_order):
            return
        if not np.array_equal(ri["T"][:n], self.cache.t[:n]):
            return
        self.small, self.head_i, self.head_k = float(ci[0]), float(ci[1]), float(ck[1])
        self.cum_i = ri["I"][:n].astype(float)
        self.cum_k = rk["I"][:n].astype(float)
        self.gap_i = np.diff(self.cum_i)
        self.gap_k = np.diff(self.cum_k)
        self._persisted = n

    # -- queries -------------------------------------------------------------------
    def _split(self, T):
        """Index of the last Gram point <= T (-1 below t_0) for an array of heights."""
        T = np.atleast_1d(np.asarray(T, dtype=float))
        if T.size and T.min() < self.t_min:
            raise DomainError(f"T below t_min={self.t_min}")
        if T.size:
            self.extend_past(float(T.max()))
        return T, np.searchsorted(self.cache.t, T, side="right") - 1

    def _cumulative(self, T, which):
        T, idx = self._split(T)
        self._head()
        out = np.empty(T.size)
        above = idx >= 0
        if above.any():
            pi_, pk = panel_integrals(self.cache.t[idx[above]], T[above], self.cache, self.quad_order)
            cum = self.cum_i if which == "i" else self.cum_k
            out[above] = cum[idx[above]] + (pi_ if which == "i" else pk)
        for j in np.flatnonzero(~above):
            edges = np.linspace(self.t_min, T[j], HEAD_PANELS + 1)
            pi_, pk = panel_integrals(edges[:-1], edges[1:], self.cache, self.quad_order)
            out[j] = fsum([self.small, *pi_]) if which == "i" else fsum(pk)
        return out

    def integral(self, T):
        """I(T) (vectorized)."""
        out = self._cumulative(T, "i")
        return float(out[0]) if np.ndim(T) == 0 else out

    def log_weighted(self, T):
        """K(T) = int_{t_min}^T Z^2 / log t dt (vectorized)."""
        out = self._cumulative(T, "k")
        return float(out[0]) if np.ndim(T) == 0 else out

    def increment(self, a: float, b: float, which: str = "i") -> float:
        """int_a^b Z^2 (or Z^2/log t) by direct panels; checkpoint differences only for long ranges."""
        if not self.t_min <= a <= b:
            raise DomainError("need t_min <= a <= b")
        if a == b:
            return 0.0
        _, (ia, ib) = self._split([a, b])
        if ib - ia > _DIRECT_GAPS:
            hi, lo = self._cumulative([b, a], which)
            return float(hi - lo)
        t = self.cache.t
        if ib < 0:
            edges = np.linspace(a, b, HEAD_PANELS + 1)
        else:
            edges = np.concatenate([[a], t[ia + 1: ib + 1], [b]])
            if ia < 0:
                edges = np.concatenate([np.linspace(a, t[0], HEAD_PANELS + 1), edges[2:]])
        pi_, pk = panel_integrals(edges[:-1], edges[1:], self.cache, self.quad_order)
        return fsum(pi_ if which == "i" else pk)


_tables: dict = {}
_tables_lock = threading.Lock()


def default_table(cache: GramCache | None = None, quad_order: int = DEFAULT_QUAD_ORDER) -> HLTable:
    cache = cache or default_cache()
    key = (id(cache), quad_order)
    with _tables_lock:
        if key not in _tables:
            _tables[key] = HLTable(cache, quad_order)
        return _tables[key]


def hl_integral(T: float, table: HLTable | None = None) -> float:
    return (table or default_table()).integral(T)


def hl_increment(a: float, b: float, table: HLTable | None = None) -> float:
    return (table or default_table()).increment(a, b)


def classical_main(T: float, c: float = EULER_GAMMA) -> float:
    """T log(T/2pi) + (2c - 1) T, the mean-value main term."""
    return T * (math.log(T) - LOG_TWO_PI) + (2.0 * c - 1.0) * T


def ladder_main_value(Y, c: float = EULER_GAMMA, c0: float = 0.0):
    """V(Y) = (1/pi)(Y log Y + (c - log 2pi) Y) + c0."""
    Y = np.asarray(Y, dtype=float)
    if np.any(Y <= math.e):
        raise DomainError("ladder main value needs Y > e")
    out = (Y * np.log(Y) + (c - LOG_TWO_PI) * Y) / math.pi + c0
    return float(out) if out.ndim == 0 else out


def ladder_main_derivative(Y, c: float = EULER_GAMMA):
    return (np.log(Y) + 1.0 + c - LOG_TWO_PI) / math.pi
