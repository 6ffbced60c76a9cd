"""Moser-Tardos resampling and the shrink-then-resample pipeline for
alpha-intersecting formulas.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from src.config import get_solver_config
from src.errors import ParameterError, SolverAnomalyError
from src.model import (
    Assignment,
    CnfFormula,
    MetricsReport,
    clause_degrees,
    metrics,
    require_alpha_intersecting,
    vertex_degrees,
)
from src.oracle import verify_assignment
from src.shrink import shrink_formula
from src.thresholds import degree_threshold

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResampleResult:
    assignment: Optional[Assignment]
    resamples: int

    @property
    def success(self) -> bool:
        return self.assignment is not None


@dataclass(frozen=True)
class DegreeCondition:
    d_threshold: float
    max_vertex_degree: int
    passes: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d_threshold": self.d_threshold,
            "max_vertex_degree": self.max_vertex_degree,
            "passes": self.passes,
        }


@dataclass(frozen=True)
class ClauseCondition:
    max_clause_degree: int
    limit: float
    passes: bool


@dataclass(frozen=True)
class HighDegreeWitness:
    """Why no guarantee applies: a surviving variable of degree d after shrinking"""
    d: int
    variables_at_least_d: int
    alpha: int
    k: int

    def implied_minimums(self) -> Dict[str, float]:
        """Lower bounds on n, m and i that such a formula must satisfy"""
        d, alpha = self.d, self.alpha
        return {
            "n": d ** (1 / alpha),
            "m": d ** (1 + 1 / alpha) / self.k,
            "i": max(d - 1, 0) ** (2 + 1 / alpha) / (2 * alpha),
        }


@dataclass(frozen=True)
class SolveResult:
    status: str  # "satisfied" or "no_guarantee"
    assignment: Optional[Assignment] = None
    resamples: int = 0
    condition: Optional[DegreeCondition] = None
    witness: Optional[HighDegreeWitness] = None
    metrics: Optional[MetricsReport] = None

    @property
    def solved(self) -> bool:
        return self.status == "satisfied"

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {"status": self.status, "resamples": self.resamples}
        if self.assignment is not None:
            result["assignment"] = [int(b) for b in self.assignment.bits]
        if self.condition is not None:
            result["condition"] = self.condition.to_dict()
        if self.witness is not None:
            result["witness"] = {
                "d": self.witness.d,
                "variables_at_least_d": self.witness.variables_at_least_d,
                "implied_minimums": self.witness.implied_minimums(),
            }
        if self.metrics is not None:
            result["metrics"] = self.metrics.to_dict()
        return result


def default_max_resamples(formula: CnfFormula) -> int:
    return max(1, get_solver_config().resample_factor * formula.m)


def moser_tardos(
    formula: CnfFormula, seed: int = 0, max_resamples: Optional[int] = None
) -> ResampleResult:
    """Resample the lowest-index violated clause until none is violated.

    Failure after ``max_resamples`` resamplings is returned, not raised.
    """
    if max_resamples is None:
        max_resamples = default_max_resamples(formula)
    if max_resamples < 1:
        raise ParameterError(f"max_resamples must be >= 1, got {max_resamples}")

    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=formula.n).astype(bool)
    resamples = 0
    while True:
        violated = formula.falsified_mask(bits)
        if not violated.any():
            assignment = Assignment(tuple(bits.tolist()))
            if not verify_assignment(formula, assignment):
                raise SolverAnomalyError("resampling returned an assignment that fails verification")
            logger.debug("Moser-Tardos succeeded after %d resamples", resamples)
            return ResampleResult(assignment, resamples)
        if resamples >= max_resamples:
            logger.info("Moser-Tardos gave up after %d resamples", resamples)
            return ResampleResult(None, resamples)
        clause = formula.clauses[int(np.argmax(violated))]
        variables = list(clause.variables)
        bits[variables] = rng.integers(0, 2, size=len(variables)).astype(bool)
        resamples += 1


def degree_condition(formula: CnfFormula, k: int, alpha: int) -> DegreeCondition:
    """Gate on the shrunk (k-alpha)-CNF: every variable degree below 2^(k-alpha)/(e k)"""
    width = formula.require_uniform()
    if width is not None and width != k - alpha:
        raise ParameterError(f"expected width {k - alpha} after shrinking, got {width}")
    threshold = degree_threshold(k, alpha)
    max_degree = max(vertex_degrees(formula.hypergraph), default=0)
    return DegreeCondition(
        d_threshold=threshold,
        max_vertex_degree=max_degree,
        passes=max_degree < threshold,
    )


def lll_clause_condition(formula: CnfFormula) -> ClauseCondition:
    """Max clause degree against 2^w / e for a width-w formula"""
    width = formula.require_uniform() or 0
    limit = 2.0 ** width / math.e
    max_degree = max(clause_degrees(formula.hypergraph), default=0)
    return ClauseCondition(max_clause_degree=max_degree, limit=limit, passes=max_degree <= limit)


def _lift(shrunk: CnfFormula, assignment: Assignment) -> Assignment:
    """Keep values of variables still present, set every other variable false"""
    present = {v for clause in shrunk.clauses for v in clause.variables}
    return Assignment(tuple(b if v in present else False for v, b in enumerate(assignment.bits)))


def solve_alpha_intersecting(
    formula: CnfFormula,
    alpha: int,
    seed: int = 0,
    max_resamples: Optional[int] = None,
) -> SolveResult:
    """alpha-shrink, then run Moser-Tardos when the degree gate passes.

    Returns ``no_guarantee`` with a high-degree witness when it does not.
    """
    k = formula.require_uniform()
    if formula.m == 0:
        return SolveResult(status="satisfied", assignment=Assignment.all_false(formula.n))
    if not k > alpha >= 1:
        raise ParameterError(f"need width k > alpha >= 1, got k={k}, alpha={alpha}")
    require_alpha_intersecting(formula.hypergraph, alpha)

    shrunk = shrink_formula(formula, alpha)
    condition = degree_condition(shrunk, k, alpha)
    if not condition.passes:
        d = condition.max_vertex_degree
        count = sum(1 for deg in vertex_degrees(formula.hypergraph) if deg >= d)
        logger.info("No guarantee: shrunk degree %d >= %.3f", d, condition.d_threshold)
        return SolveResult(
            status="no_guarantee",
            condition=condition,
            witness=HighDegreeWitness(d=d, variables_at_least_d=count, alpha=alpha, k=k),
            metrics=metrics(formula),
        )

    result = moser_tardos(shrunk, seed, max_resamples)
    if not result.success:
        raise SolverAnomalyError(
            f"Moser-Tardos failed after {result.resamples} resamples although "
            f"max degree {condition.max_vertex_degree} < {condition.d_threshold:.3f}"
        )
    lifted = _lift(shrunk, result.assignment)
    if not verify_assignment(formula, lifted):
        raise SolverAnomalyError("lifted assignment does not satisfy the original formula")
    logger.info("Solved m=%d k=%d alpha=%d after %d resamples", formula.m, k, alpha, result.resamples)
    return SolveResult(
        status="satisfied",
        assignment=lifted,
        resamples=result.resamples,
        condition=condition,
    )
