"""End-to-end upper-bound construction.

Build a maximal alpha-intersecting (k+alpha)-uniform hypergraph dense enough
for the greedy polarity argument (m >= n 2^(k+alpha)), alpha-shrink it to a
k-uniform one and check the structural bounds the construction promises.
Polarity assignment is optional because coverage costs 2^n.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from src.errors import DensityNotReachedError, ParameterError
from src.maximal import grow_maximal, min_edges_bound
from src.model import (
    CnfFormula,
    Hypergraph,
    MetricsReport,
    Params,
    check_alpha_intersecting,
    hypergraph_metrics,
)
from src.oracle import check_cap
from src.shrink import shrink_formula, shrink_hypergraph
from src.thresholds import upper_bounds
from src.unsat import UnsatBuild, build_unsat

logger = logging.getLogger(__name__)

OVERFLOW_GUARD = 2 ** 62


def _density_met(n: int, width: int, alpha: int) -> bool:
    return min_edges_bound(n, width, alpha) >= n * 2 ** width


def auto_n(k: int, alpha: int) -> int:
    """Smallest n whose guaranteed maximal edge count reaches n 2^(k+alpha)"""
    Params(k, alpha).require_alpha_below_k()
    width = k + alpha
    if _density_met(width, width, alpha):
        return width
    lo, hi = width, width * 2
    while not _density_met(hi, width, alpha):
        lo, hi = hi, hi * 2
        if hi > OVERFLOW_GUARD:
            raise ParameterError(f"auto_n search overflowed for k={k}, alpha={alpha}")
    # invariant: predicate false at lo, true at hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _density_met(mid, width, alpha):
            hi = mid
        else:
            lo = mid
    return hi


def closed_form_n(k: int, alpha: int) -> float:
    """Closed-form vertex count alpha (2^(k+alpha) k^(2(alpha+1)))^(1/alpha)"""
    Params(k, alpha).require_alpha_below_k()
    return alpha * (2.0 ** (k + alpha) * k ** (2 * (alpha + 1))) ** (1 / alpha)


def degree_bound(m: int, k: int, alpha: int) -> float:
    """(m (k+alpha))^(1/(1+1/alpha)), the max vertex degree allowed after shrinking"""
    return (m * (k + alpha)) ** (1 / (1 + 1 / alpha))


def pairs_bound_holds(stats: MetricsReport) -> bool:
    """i <= m * max vertex degree"""
    return stats.i <= stats.m * stats.delta_vertex


@dataclass
class PipelineResult:
    hypergraph: Hypergraph
    shrunk: Hypergraph
    report: Dict[str, Any]
    formula: Optional[CnfFormula] = None
    shrunk_formula: Optional[CnfFormula] = None
    unsat: Optional[UnsatBuild] = field(default=None, repr=False)

    @property
    def checks_passed(self) -> bool:
        return all(self.report["checks"].values())


def attach_polarity(
    hypergraph: Hypergraph, alpha: int, seed: int = 0, cap: Optional[int] = None
) -> Tuple[UnsatBuild, CnfFormula]:
    """Greedy polarity on the source hypergraph, then the same alpha-shrinking on the formula"""
    unsat = build_unsat(hypergraph, order="input", seed=seed, cap=cap)
    return unsat, shrink_formula(unsat.formula, alpha)


def upper_bound_pipeline(
    k: int,
    alpha: int,
    n: Optional[int] = None,
    with_polarity: bool = False,
    seed: int = 0,
    sample_rejections: Optional[int] = None,
) -> PipelineResult:
    """Build, shrink and verify; raises when the density target is missed"""
    Params(k, alpha).require_alpha_below_k()
    width = k + alpha
    target_n = auto_n(k, alpha)
    n = target_n if n is None else n
    if n < width:
        raise ParameterError(f"n={n} is smaller than the edge width {width}")
    if with_polarity:
        check_cap(n)

    logger.info("Pipeline k=%d alpha=%d on n=%d (auto_n=%d)", k, alpha, n, target_n)
    build = grow_maximal(n, width, alpha, seed, sample_rejections=sample_rejections)
    hypergraph = build.hypergraph
    required = n * 2 ** width
    if hypergraph.m < required:
        raise DensityNotReachedError(
            f"maximal hypergraph has {hypergraph.m} edges, need n*2^(k+alpha) = {required}"
        )

    shrunk = shrink_hypergraph(hypergraph, alpha)
    shrunk_stats = hypergraph_metrics(shrunk)
    m = hypergraph.m
    bound = degree_bound(m, k, alpha)
    upper = upper_bounds(k, alpha)
    checks = {
        "source_alpha_intersecting": check_alpha_intersecting(hypergraph, alpha) is None,
        "shrunk_alpha_intersecting": check_alpha_intersecting(shrunk, alpha) is None,
        "shrunk_width_is_k": shrunk.width == k,
        "density": m >= required,
        "degree_bound": shrunk_stats.delta_vertex <= bound,
        "pairs_bound": pairs_bound_holds(shrunk_stats),
    }
    report: Dict[str, Any] = {
        "k": k,
        "alpha": alpha,
        "n": n,
        "auto_n": target_n,
        "closed_form_n": closed_form_n(k, alpha),
        "m": m,
        "min_edges_bound": min_edges_bound(n, width, alpha),
        "density_required": required,
        "mode": build.mode,
        "certified_maximal": build.certified_maximal,
        "shrunk": shrunk_stats.to_dict(),
        "degree_bound": bound,
        # informational: small-k constants dominate these comparisons
        "upper_bounds": upper.to_dict(),
        "delta_vs_U_delta": shrunk_stats.delta_vertex <= upper.upper_delta,
        "delta_vs_cubic_variant": shrunk_stats.delta_vertex <= alpha * 2 ** width * k ** 3,
        "n_vs_U_n": n <= upper.upper_n,
        "m_vs_U_m": m <= upper.upper_m,
        "checks": checks,
    }
    result = PipelineResult(hypergraph=hypergraph, shrunk=shrunk, report=report)

    if with_polarity:
        unsat, shrunk_formula = attach_polarity(hypergraph, alpha, seed)
        result.unsat = unsat
        result.formula = unsat.formula
        result.shrunk_formula = shrunk_formula
        report["final_uncovered"] = unsat.final_uncovered
        checks["unsatisfiable"] = unsat.unsatisfiable
        checks["shrunk_formula_induces_shrunk"] = shrunk_formula.hypergraph == shrunk

    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        logger.error("Pipeline checks failed: %s", ", ".join(failed))
    else:
        logger.info("Pipeline checks passed: m=%d, shrunk max degree %d <= %.2f",
                    m, shrunk_stats.delta_vertex, bound)
    return result
