"""Beta-shrinking of hypergraphs and formulas.

Each edge loses the beta vertices of highest degree. Degrees are computed once
on the input hypergraph and ties go to the lowest vertex id, so the result does
not depend on the order in which edges are processed.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

from src.errors import ParameterError
from src.model import CnfFormula, Edge, Hypergraph, vertex_degrees

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShrinkingWitness:
    """Max degree after shrinking and how many source vertices reach it"""
    d_max: int
    count_at_least: int
    alpha: int

    @property
    def bound(self) -> float:
        return self.d_max ** (1 / self.alpha)

    @property
    def holds(self) -> bool:
        """count > d_max^(1/alpha), checked in integers as count^alpha > d_max"""
        if self.d_max == 0:
            return True
        return self.count_at_least ** self.alpha > self.d_max


def _check_beta(hypergraph: Hypergraph, beta: int) -> None:
    if beta < 0:
        raise ParameterError(f"beta must be non-negative, got {beta}")
    width = hypergraph.require_uniform()
    if hypergraph.m and beta >= width:
        raise ParameterError(f"beta={beta} must be smaller than the width {width}")


def deleted_vertices(hypergraph: Hypergraph, beta: int) -> List[Edge]:
    """The beta vertices removed from each edge, in edge order"""
    _check_beta(hypergraph, beta)
    if beta == 0:
        return [() for _ in hypergraph.edges]
    degrees = vertex_degrees(hypergraph)
    deleted = []
    for edge in hypergraph.edges:
        ranked = sorted(edge, key=lambda v: (-degrees[v], v))
        deleted.append(tuple(sorted(ranked[:beta])))
    return deleted


def _split_edges(hypergraph: Hypergraph, beta: int) -> List[Tuple[Edge, Edge]]:
    """(kept, deleted) vertex tuples per edge"""
    result = []
    for edge, gone in zip(hypergraph.edges, deleted_vertices(hypergraph, beta)):
        removed = set(gone)
        result.append((tuple(v for v in edge if v not in removed), gone))
    return result


def shrink_hypergraph(hypergraph: Hypergraph, beta: int) -> Hypergraph:
    """Delete the beta highest-degree vertices from every edge"""
    if beta == 0:
        _check_beta(hypergraph, beta)
        return hypergraph
    kept = tuple(k for k, _ in _split_edges(hypergraph, beta))
    logger.debug("Shrunk %d edges by %d (width %s)", hypergraph.m, beta, hypergraph.width)
    return Hypergraph(hypergraph.n, kept)


def shrink_formula(formula: CnfFormula, beta: int) -> CnfFormula:
    """Drop the literals of each clause's beta highest-degree variables"""
    if beta == 0:
        _check_beta(formula.hypergraph, beta)
        return formula
    split = _split_edges(formula.hypergraph, beta)
    clauses = tuple(
        clause.restrict(kept) for clause, (kept, _) in zip(formula.clauses, split)
    )
    return CnfFormula(formula.n, clauses)


def shrinking_witness(
    hypergraph: Hypergraph, shrunk: Hypergraph, alpha: int
) -> ShrinkingWitness:
    """Measure the high-degree-survivor count of an alpha-shrinking.

    ``shrunk`` must be ``shrink_hypergraph(hypergraph, alpha)``. The caller
    checks ``holds``: when the source is alpha-intersecting the count is
    strictly larger than d_max^(1/alpha).
    """
    if alpha < 1:
        raise ParameterError(f"alpha must be >= 1, got {alpha}")
    if shrunk != shrink_hypergraph(hypergraph, alpha):
        raise ParameterError("shrunk hypergraph is not the alpha-shrinking of the source")
    d_max = max(vertex_degrees(shrunk), default=0)
    source_degrees = vertex_degrees(hypergraph)
    count = sum(1 for deg in source_degrees if deg >= d_max)
    return ShrinkingWitness(d_max=d_max, count_at_least=count, alpha=alpha)
