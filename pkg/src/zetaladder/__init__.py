"""Numerical laboratory for Jacob's ladders on the critical line.

Riemann-Siegel evaluation of Z(t), Gram points, Titchmarsh sums, the
Hardy-Littlewood integral, the ladder phi_1 with its reverse iterates,
limit experiments for Fermat rationals and ladder-generated orthogonal
systems.
"""
from .errors import ConvergenceError, DomainError, QuadratureWarning, TruncationNotice
from .fermat import FermatRational, condition_report, fermat_scan, fermat_value_exact, is_unit_value
from .gram import GramCache, gram_count, gram_point, gram_range
from .hardy_littlewood import HLTable, hl_increment, hl_integral
from .ladder import Backend, Direction, LadderContext, iterate, phi1, phi1_reverse
from .ortho import GenerationSpec, gram_matrix, legendre, mr_condition, mr_partial_sum, normalized_fn
from .titchmarsh import asymptotic_report, t1_sum, t2_sum
from .zeta_core import ZetaEvalConfig, riemann_siegel_Z, theta, zeta_mod_sq

__version__ = "0.1.0"

__all__ = [
    "Backend", "ConvergenceError", "Direction", "DomainError", "FermatRational", "GenerationSpec",
    "GramCache", "HLTable", "LadderContext", "QuadratureWarning", "TruncationNotice", "ZetaEvalConfig",
    "asymptotic_report", "condition_report", "fermat_scan", "fermat_value_exact", "gram_count",
    "gram_matrix", "gram_point", "gram_range", "hl_increment", "hl_integral", "is_unit_value",
    "iterate", "legendre", "mr_condition", "mr_partial_sum", "normalized_fn", "phi1", "phi1_reverse",
    "riemann_siegel_Z", "t1_sum", "t2_sum", "theta", "zeta_mod_sq",
]
