"""Command-line front end.

    zetaladder [global options] <command> [command options]

Every command prints a table (CSV by default, JSON with ``--format json``)
to standard output or ``--out``.  Floats carry 12 significant digits.
Exit codes: 0 success, 2 domain error, 3 convergence failure, 64 usage.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, is_dataclass
from pathlib import Path

import numpy as np

from .errors import ConvergenceError, DomainError
from .fermat import convergence_rows, fermat_scan, parse_x
from .gram import GramCache, default_cache
from .hardy_littlewood import DEFAULT_QUAD_ORDER, HLTable, classical_main, default_table
from .ladder import Backend, Direction, LadderContext, iterate
from .ortho import GenerationSpec, Normalization, cauchy_increments, gram_matrix, power_coeffs
from .report import SUITES, run_suite
from .titchmarsh import asymptotic_report
from .zeta_core import ZetaEvalConfig, riemann_siegel_Z, theta

CACHE_ENV = "ZETALADDER_CACHE"
EXIT_OK, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_USAGE = 0, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


@dataclass(frozen=True)
class RunConfig:
    cache_dir: Path | None
    format: str = "csv"
    tol: float = 1e-10
    correction_order: int = 6
    quad_order: int = DEFAULT_QUAD_ORDER
    backend: Backend = Backend.SMOOTH
    c0: float = 0.0

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        object.__setattr__(self, "backend", Backend(self.backend))
        if self.cache_dir is not None:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            if not os.access(self.cache_dir, os.W_OK):
                raise DomainError(f"cache directory {self.cache_dir} is not writable")

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        raw = args.cache_dir or os.environ.get(CACHE_ENV)
        return cls(Path(raw) if raw else None, args.format, args.tol, args.correction_order,
                   args.quad_order, Backend(args.backend), args.c0)


class Session:
    """Caches and ladder context shared by one CLI invocation."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        zcfg = ZetaEvalConfig(correction_order=cfg.correction_order)
        d = cfg.cache_dir
        if d is None:
            self.cache = default_cache(zcfg)
            self.table = default_table(self.cache, cfg.quad_order)
        else:
            self.cache = GramCache(zcfg, d / f"gram-c{cfg.correction_order}.bin")
            self.table = HLTable(self.cache, cfg.quad_order, d / f"hl-c{cfg.correction_order}-q{cfg.quad_order}.bin")
        self.ctx = LadderContext(c0=cfg.c0, backend=cfg.backend, tol_rel=cfg.tol, table=self.table)

    def close(self):
        if self.cfg.cache_dir is not None:
            self.cache.save()
            self.table.save()


# --- formatting ------------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        v = float(f"{float(v):.12g}")
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


def _as_dict(row) -> dict:
    return asdict(row) if is_dataclass(row) else dict(row)


def render(rows, fmt: str, fields=None) -> str:
    rows = [_as_dict(r) for r in rows]
    fields = list(fields or (rows[0].keys() if rows else []))
    if fmt == "json":
        return json.dumps([{f: _jsonable(r[f]) for f in fields} for r in rows], indent=2) + "\n"
    lines = [",".join(fields)]
    lines += [",".join(_fmt(r[f]) for f in fields) for r in rows]
    return "\n".join(lines) + "\n"


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


# --- commands ------------------------------------------------------------------------

def cmd_gram(args, s: Session):
    if args.X is not None:
        n = s.cache.count(args.X)
        return [{"X": args.X, "N": n, "t_N": float(s.cache.t[n])}]
    s.cache.extend_to_nu(args.nu + args.count - 1)
    nus = np.arange(args.nu, args.nu + args.count)
    t = s.cache.t[nus]
    res = np.abs(theta(t) - math.pi * nus)
    return [{"nu": int(n), "t": float(a), "z": float(z), "residual": float(r)}
            for n, a, z, r in zip(nus, t, s.cache.z[nus], res)]


def cmd_z(args, s: Session):
    z = riemann_siegel_Z(np.array(args.t), s.cache.cfg)
    return [{"t": t, "Z": float(v)} for t, v in zip(args.t, np.atleast_1d(z))]


def cmd_theta(args, s: Session):
    return [{"t": t, "theta": float(theta(t))} for t in args.t]


def _titchmarsh(kind):
    def run(args, s: Session):
        return [r for r in asymptotic_report(sorted(args.X), s.cache) if r.kind == kind]
    return run


def cmd_hl(args, s: Session):
    rows = []
    for T in args.T:
        i = s.table.integral(T)
        main = classical_main(T)
        rows.append({"T": T, "I": i, "main": main, "residual": i - main, "normalized": (i - main) / T**0.44})
    return rows


def cmd_ladder(args, s: Session):
    rows = []
    for T in args.T:
        chain = iterate(T, args.r, args.direction, s.ctx, strict=False)
        pts = chain.points
        for r, p in enumerate(pts):
            gap = p - pts[r - 1] if r else 0.0
            prev = pts[r - 1] if r else T
            law = abs(gap) * math.log(prev) / ((1.0 - s.ctx.c) * prev) if r else math.nan
            rows.append({"T": T, "r": r, "point": p, "gap": gap, "law": law, "truncated": chain.truncated})
    return rows


def cmd_limit(args, s: Session):
    return convergence_rows(args.kind, parse_x(args.x), sorted(args.tau), s.ctx)


def cmd_fermat_scan(args, s: Session):
    checked, hits = fermat_scan(args.max, args.n_max, args.n_min)
    return [{"max_xyz": args.max, "n_min": args.n_min, "n_max": args.n_max, "checked": checked,
             "unit_values": len(hits), "verdict": "holds" if not hits else "fails"}]


def _ortho_ctx(s: Session) -> LadderContext:
    return s.ctx.with_backend(Backend.CUMULATIVE)


def cmd_ortho_gram(args, s: Session):
    spec = GenerationSpec(tuple(args.p), max(args.p), args.T, args.nmax)
    G = gram_matrix(spec, args.ortho_quad_order, _ortho_ctx(s), args.normalization)
    return [{"m": m, **{f"n{n}": float(G[m, n]) for n in range(G.shape[1])}} for m in range(G.shape[0])]


def cmd_mr(args, s: Session):
    spec = GenerationSpec(tuple(args.p), max(args.p), args.T, 2 * args.M)
    ts = np.linspace(-0.9, 0.9, args.points)
    Ms = [m for m in (2**j for j in range(0, 12)) if 1 <= m <= args.M]
    inc = cauchy_increments(power_coeffs(2 * args.M, args.decay), spec, ts, Ms, _ortho_ctx(s))
    return [{"t": float(t), "M": m, "increment": float(inc[i, j])}
            for j, t in enumerate(ts) for i, m in enumerate(Ms)]


def cmd_report(args, s: Session):
    return run_suite(args.suite, s.ctx)


# --- parser ---------------------------------------------------------------------------

def _global_options(p, defaults: bool, skip=()):
    # subcommands repeat the global flags without defaults so either position works
    def add(flag, **kw):
        if flag in skip:
            return
        if not defaults:
            kw["default"] = argparse.SUPPRESS
        p.add_argument(flag, **kw)

    add("--cache-dir", default=None, help=f"persistent table directory (overrides ${CACHE_ENV})")
    add("--format", choices=("csv", "json"), default="csv")
    add("--out", default=None, help="write the table here instead of standard output")
    add("--tol", type=float, default=1e-10, help="relative tolerance for ladder solves")
    add("--correction-order", type=int, default=6, choices=range(0, 11), metavar="K")
    add("--quad-order", type=int, default=DEFAULT_QUAD_ORDER, help="nodes per Gram gap")
    add("--backend", choices=[b.value for b in Backend], default=Backend.SMOOTH.value)
    add("--c0", type=float, default=0.0)


def _command(sub, name, **kw):
    q = sub.add_parser(name, **kw)
    # ortho-gram has its own --quad-order (total nodes, not nodes per gap)
    _global_options(q, defaults=False, skip=("--quad-order",) if name == "ortho-gram" else ())
    return q


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zetaladder", description=__doc__.splitlines()[0])
    _global_options(p, defaults=True)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = _command(sub, "gram", help="Gram points with Z values")
    g.add_argument("--nu", type=int, default=0)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--X", type=float, help="report gram_count(X) instead")
    g.set_defaults(func=cmd_gram)

    for name, func, help_ in (("z", cmd_z, "Riemann-Siegel Z(t)"), ("theta", cmd_theta, "theta(t)")):
        q = _command(sub, name, help=help_)
        q.add_argument("--t", type=_floats, required=True, help="comma-separated heights")
        q.set_defaults(func=func)

    for kind in ("t1", "t2"):
        q = _command(sub, kind, help=f"Titchmarsh sum {kind.upper()} against its main term")
        q.add_argument("--X", type=_floats, required=True)
        q.set_defaults(func=_titchmarsh(kind))

    q = _command(sub, "hl", help="Hardy-Littlewood integral against T log(T/2pi) + (2c-1)T")
    q.add_argument("--T", type=_floats, required=True)
    q.set_defaults(func=cmd_hl)

    q = _command(sub, "ladder", help="iterations of the Jacob ladder")
    q.add_argument("--T", type=_floats, required=True)
    q.add_argument("--r", type=int, default=1)
    q.add_argument("--direction", choices=[d.value for d in Direction], default=Direction.REVERSE.value)
    q.set_defaults(func=cmd_ladder)

    q = _command(sub, "limit", help="finite-tau limit experiment")
    q.add_argument("--kind", choices=("zeta", "t1", "t2"), required=True)
    q.add_argument("--x", required=True, help="positive rational, or a Fermat tuple x,y,z,n")
    q.add_argument("--tau", type=_floats, required=True)
    q.set_defaults(func=cmd_limit)

    q = _command(sub, "fermat-scan", help="exhaustive search for unit-value Fermat rationals")
    q.add_argument("--max", type=int, default=20)
    q.add_argument("--n-min", type=int, default=3)
    q.add_argument("--n-max", type=int, default=7)
    q.set_defaults(func=cmd_fermat_scan)

    q = _command(sub, "ortho-gram", help="Gram matrix of a generated Legendre system")
    q.add_argument("--T", type=float, default=1e4)
    q.add_argument("--p", type=lambda v: [int(x) for x in v.split(",")], default=[1],
                   help="depths p_1,...,p_s, outermost first")
    q.add_argument("--nmax", type=int, default=6)
    q.add_argument("--quad-order", dest="ortho_quad_order", type=int, default=512)
    q.add_argument("--normalization", choices=[m.value for m in Normalization], default="empirical")
    q.set_defaults(func=cmd_ortho_gram)

    q = _command(sub, "mr", help="Cauchy increments of a Menshov-Rademacher series")
    q.add_argument("--decay", type=float, default=1.1)
    q.add_argument("--M", type=int, default=32)
    q.add_argument("--points", type=int, default=10)
    q.add_argument("--T", type=float, default=1e4)
    q.add_argument("--p", type=lambda v: [int(x) for x in v.split(",")], default=[1])
    q.set_defaults(func=cmd_mr)

    q = _command(sub, "report", help="acceptance tables with pass flags")
    q.add_argument("--suite", choices=SUITES, required=True)
    q.set_defaults(func=cmd_report)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = RunConfig.from_args(args)
    except UsageError as exc:
        sys.stderr.write(parser.format_help() + "\n" + str(exc) + "\n")
        return EXIT_USAGE
    except argparse.ArgumentTypeError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    try:
        session = Session(cfg)
        try:
            rows = args.func(args, session)
        finally:
            session.close()
        text = render(rows, cfg.format)
    except DomainError as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        sys.stderr.write(f"convergence error: {exc}\n")
        return EXIT_CONVERGENCE
    except ValueError as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_USAGE
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
