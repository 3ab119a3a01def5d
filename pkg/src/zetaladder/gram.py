"""Gram points t_nu (theta(t_nu) = pi nu) and a persistent table of them.

The table stores Z(t_nu) next to every point because each Titchmarsh
sum needs it.  Indexing starts at nu = 0 (t_0 ~ 17.8456).
"""
from __future__ import annotations

import csv
import math
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import lambertw

from .errors import ConvergenceError, DomainError
from .zeta_core import DEFAULT_CONFIG, ZetaEvalConfig, riemann_siegel_Z, theta, theta_derivative

GRAM_MAGIC = b"ZLADGRAM"
GRAM_VERSION = 1
RECORD_DTYPE = np.dtype([("nu", "<u8"), ("t", "<f8"), ("z", "<f8")])
_HEADER_DTYPE = np.dtype([("magic", "S8"), ("version", "<u4"), ("correction_order", "<u4")])

NEWTON_MAX_ITER = 50
RESIDUAL_TOL = 1e-9
_BLOCK = 1 << 16


@dataclass(frozen=True)
class GramPoint:
    nu: int
    t: float


def initial_guess(nu):
    """Invert pi nu = (t/2) log(t/2pi) - t/2 - pi/8 exactly via Lambert W."""
    a = np.asarray(nu, dtype=float) + 0.125
    return 2.0 * math.pi * a / np.real(lambertw(a / math.e))


def solve_gram(nu, t_min: float = DEFAULT_CONFIG.t_min) -> np.ndarray:
    """Vectorized Newton iteration on theta(t) - pi nu."""
    nu = np.atleast_1d(np.asarray(nu, dtype=np.int64))
    if nu.size and nu.min() < 0:
        raise DomainError("Gram index must be nonnegative")
    target = math.pi * nu.astype(float)
    t = initial_guess(nu)
    active = np.ones(t.shape, dtype=bool)
    for _ in range(NEWTON_MAX_ITER):
        if not active.any():
            break
        ta = t[active]
        res = theta(ta, t_min) - target[active]
        step = res / theta_derivative(ta, t_min)
        t[active] = ta - step
        done = (np.abs(step) <= 4e-16 * ta) | ((np.abs(res) <= 0.1 * RESIDUAL_TOL) & (np.abs(step) <= 1e-13 * ta))
        active[np.flatnonzero(active)[done]] = False
    if active.any():
        raise ConvergenceError(f"Newton failed for {int(active.sum())} Gram indices")
    return t


def gram_point(nu: int, cfg: ZetaEvalConfig = DEFAULT_CONFIG) -> GramPoint:
    if nu < 0:
        raise DomainError("Gram index must be nonnegative")
    return GramPoint(int(nu), float(solve_gram([nu], cfg.t_min)[0]))


def _index_estimate(x: float) -> int:
    # theta(x)/pi, slightly overestimated; exact index fixed by searchsorted later
    return int(theta(max(x, 20.0)) / math.pi) + 2


class GramCache:
    """Append-only table of (nu, t_nu, Z(t_nu)), contiguous from nu = 0.

    Reads are lock-free on immutable array snapshots; extension is
    serialized by an internal lock (one writer at a time).
    """

    def __init__(self, cfg: ZetaEvalConfig = DEFAULT_CONFIG, path: str | Path | None = None):
        self.cfg = cfg
        self.path = Path(path) if path is not None else None
        self._lock = threading.Lock()
        self.t = np.empty(0)
        self.z = np.empty(0)
        self._persisted = 0
        if self.path is not None and self.path.exists():
            self._load()

    # -- persistence -----------------------------------------------------
    def _load(self):
        raw = self.path.read_bytes()
        if len(raw) < _HEADER_DTYPE.itemsize:
            return
        head = np.frombuffer(raw[: _HEADER_DTYPE.itemsize], dtype=_HEADER_DTYPE)[0]
        if bytes(head["magic"]) != GRAM_MAGIC or int(head["version"]) != GRAM_VERSION \
                or int(head["correction_order"]) != self.cfg.correction_order:
            return
        body = raw[_HEADER_DTYPE.itemsize:]
        n = len(body) // RECORD_DTYPE.itemsize
        rec = np.frombuffer(body[: n * RECORD_DTYPE.itemsize], dtype=RECORD_DTYPE)
        if n and not np.array_equal(rec["nu"], np.arange(n, dtype=np.uint64)):
            raise ValueError(f"corrupt Gram cache {self.path}: indices not contiguous")
        self.t = rec["t"].astype(float)
        self.z = rec["z"].astype(float)
        self._persisted = n

    def save(self):
        """Append records not yet on disk (creates the file with a header)."""
        if self.path is None:
            return
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fresh = not self.path.exists() or self._persisted == 0
            mode = "wb" if fresh else "ab"
            start = 0 if fresh else self._persisted
            rec = np.empty(self.t.size - start, dtype=RECORD_DTYPE)
            rec["nu"] = np.arange(start, self.t.size, dtype=np.uint64)
            rec["t"] = self.t[start:]
            rec["z"] = self.z[start:]
            with open(self.path, mode) as fh:
                if fresh:
                    head = np.array([(GRAM_MAGIC, GRAM_VERSION, self.cfg.correction_order)], dtype=_HEADER_DTYPE)
                    fh.write(head.tobytes())
                fh.write(rec.tobytes())
            self._persisted = self.t.size

    def export_csv(self, path_or_file):
        own = isinstance(path_or_file, (str, Path))
        fh = open(path_or_file, "w", newline="") if own else path_or_file
        try:
            w = csv.writer(fh)
            w.writerow(["nu", "t", "z"])
            for i, (t, z) in enumerate(zip(self.t, self.z)):
                w.writerow([i, repr(float(t)), repr(float(z))])
        finally:
            if own:
                fh.close()

    # -- extension ---------------------------------------------------------
    @property
    def highest_nu(self) -> int:
        return self.t.size - 1

    def extend_to_nu(self, nu_max: int):
        """Make sure t_0 .. t_{nu_max} are present."""
        if nu_max <= self.highest_nu:
            return
        with self._lock:
            t_parts, z_parts = [self.t], [self.z]
            start = self.t.size
            while start <= nu_max:
                stop = min(start + _BLOCK, nu_max + 1)
                tb = solve_gram(np.arange(start, stop), self.cfg.t_min)
                t_parts.append(tb)
                z_parts.append(riemann_siegel_Z(tb, self.cfg))
                start = stop
            t_new = np.concatenate(t_parts)
            if t_new.size > 1 and not np.all(np.diff(t_new) > 0):
                raise ConvergenceError("Gram sequence not strictly increasing")
            self.z = np.concatenate(z_parts)
            self.t = t_new

    def extend_past(self, x: float):
        """Extend until the table holds a point strictly greater than x."""
        while self.t.size == 0 or self.t[-1] <= x:
            self.extend_to_nu(max(_index_estimate(x), self.t.size + 1))

    # -- queries -------------------------------------------------------------
    def first(self) -> float:
        self.extend_to_nu(1)
        return float(self.t[0])

    def count(self, x: float) -> int:
        """N = max{nu : t_nu <= x}."""
        if x < self.first():
            raise DomainError(f"X={x} lies below the first Gram point")
        self.extend_past(x)
        return int(np.searchsorted(self.t, x, side="right")) - 1

    def points(self, x: float) -> list[GramPoint]:
        n = self.count(x)
        return [GramPoint(i, float(t)) for i, t in enumerate(self.t[: n + 1])]


_default_caches: dict = {}
_default_lock = threading.Lock()


def default_cache(cfg: ZetaEvalConfig = DEFAULT_CONFIG) -> GramCache:
    with _default_lock:
        if cfg not in _default_caches:
            _default_caches[cfg] = GramCache(cfg)
        return _default_caches[cfg]


def gram_range(x: float, cache: GramCache | None = None) -> list[GramPoint]:
    """All Gram points with t_nu <= x, in order."""
    return (cache or default_cache()).points(x)


def gram_count(x: float, cache: GramCache | None = None) -> int:
    return (cache or default_cache()).count(x)


def count_main_terms(t: float) -> float:
    """(1/pi) t log t - (1/pi)(1 + log 2pi) t, the main part of 2N at t = t_N."""
    return (t * math.log(t) - (1.0 + math.log(2.0 * math.pi)) * t) / math.pi
