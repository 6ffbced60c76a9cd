"""Greedy polarity selection that turns a dense k-uniform hypergraph into a k-CNF
covering as many of the 2^n assignments as possible.

A clause covers an assignment when the assignment falsifies it. For a fixed
edge the 2^k sign patterns partition all assignments, so the best pattern
always covers at least a 2^-k fraction of what is still uncovered.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from src.errors import ParameterError
from src.model import Clause, CnfFormula, Edge, Hypergraph
from src.oracle import BLOCK_BITS, check_cap, falsifying_mask, index_blocks

logger = logging.getLogger(__name__)

ORDERS = ("input", "shuffle")


class CoverageSet:
    """Packed bitmap over assignment indices 0..2^n-1 marking covered assignments.

    Bit ``a % 8`` of byte ``a // 8`` holds index ``a``; the set occupies
    ``ceil(2^n / 8)`` bytes and every update walks the index range in blocks.
    """

    def __init__(self, n: int, cap: Optional[int] = None):
        if n < 0:
            raise ParameterError(f"n must be non-negative, got {n}")
        self.cap = check_cap(n, cap)
        self.n = n
        self.bits = np.zeros(-(-self.size // 8), dtype=np.uint8)
        self.covered_count = 0

    @property
    def size(self) -> int:
        return 2 ** self.n

    @property
    def uncovered_count(self) -> int:
        return self.size - self.covered_count

    @property
    def nbytes(self) -> int:
        return self.bits.nbytes

    def covered_block(self, start: int, length: int) -> np.ndarray:
        """Boolean copy of indices ``start .. start+length-1``; ``start`` is a multiple of 8"""
        packed = self.bits[start // 8 : start // 8 + -(-length // 8)]
        return np.unpackbits(packed, count=length, bitorder="little").astype(bool)

    def _store_block(self, start: int, covered: np.ndarray) -> None:
        packed = np.packbits(covered, bitorder="little")
        self.bits[start // 8 : start // 8 + len(packed)] = packed

    def add_block(self, start: int, mask: np.ndarray) -> int:
        """Mark ``mask`` (aligned at ``start``) covered; returns how many were new"""
        covered = self.covered_block(start, len(mask))
        newly = int(np.count_nonzero(mask & ~covered))
        if newly:
            self._store_block(start, covered | mask)
            self.covered_count += newly
        return newly

    def add(self, mask: np.ndarray) -> int:
        """Mark a full-length boolean ``mask`` covered; returns how many were new"""
        if len(mask) != self.size:
            raise ParameterError(f"mask has {len(mask)} entries, expected {self.size}")
        return sum(
            self.add_block(start, mask[start : start + len(indices)])
            for start, indices in index_blocks(self.n)
        )

    def add_clause(self, clause: Clause) -> int:
        """Cover every assignment falsifying ``clause``; returns how many were new"""
        if clause.variables[-1] >= self.n:
            raise ParameterError(f"clause uses a variable outside [0, {self.n})")
        return sum(
            self.add_block(start, falsifying_mask(clause, indices))
            for start, indices in index_blocks(self.n)
        )

    def pattern_gains(self, edge: Edge) -> np.ndarray:
        """Uncovered assignments per sign pattern on ``edge``.

        An assignment falsifies exactly the clause whose pattern equals its
        bits on the sorted edge, so the patterns partition the index range.
        """
        variables = sorted(edge)
        gains = np.zeros(2 ** len(variables), dtype=np.int64)
        step = min(self.size, 2 ** BLOCK_BITS)
        codes = np.empty(step, dtype=np.int64)
        bit = np.empty(step, dtype=np.int64)
        for start, indices in index_blocks(self.n):
            codes.fill(0)
            for j, v in enumerate(variables):
                np.right_shift(indices, v, out=bit)
                np.bitwise_and(bit, 1, out=bit)
                np.left_shift(bit, j, out=bit)
                codes |= bit
            uncovered = ~self.covered_block(start, len(indices))
            gains += np.bincount(codes[uncovered], minlength=len(gains))
        return gains

    def __contains__(self, index: int) -> bool:
        return bool((self.bits[index >> 3] >> (index & 7)) & 1)


def clause_cover_set(clause: Clause, n: int, cap: Optional[int] = None) -> np.ndarray:
    """Sorted indices of the 2^(n-k) assignments falsifying ``clause``"""
    check_cap(n, cap)
    if clause.variables[-1] >= n:
        raise ParameterError(f"clause uses a variable outside [0, {n})")
    return np.concatenate([
        start + np.flatnonzero(falsifying_mask(clause, indices))
        for start, indices in index_blocks(n)
    ])


def best_polarity(edge: Edge, coverage: CoverageSet) -> Tuple[Clause, int]:
    """Sign pattern covering the most uncovered assignments; smallest pattern wins ties"""
    if not edge or max(edge) >= coverage.n:
        raise ParameterError(f"edge {edge} is not within n={coverage.n}")
    gains = coverage.pattern_gains(edge)
    pattern = int(np.argmax(gains))
    return Clause.from_pattern(edge, pattern), int(gains[pattern])


@dataclass
class UnsatBuild:
    """Greedy output: formula, leftover assignments and the uncovered trace"""
    formula: CnfFormula
    final_uncovered: int
    trace: List[int] = field(default_factory=list)  # uncovered count before step 0, then after each step
    order: List[int] = field(default_factory=list)

    @property
    def unsatisfiable(self) -> bool:
        return self.final_uncovered == 0


def build_unsat(
    hypergraph: Hypergraph,
    order: str = "input",
    seed: int = 0,
    cap: Optional[int] = None,
) -> UnsatBuild:
    """One clause per edge via best_polarity; clause j always sits on edge j"""
    if order not in ORDERS:
        raise ParameterError(f"order must be one of {ORDERS}, got {order!r}")
    hypergraph.require_uniform()
    coverage = CoverageSet(hypergraph.n, cap)

    visit = list(range(hypergraph.m))
    if order == "shuffle":
        visit = np.random.default_rng(seed).permutation(hypergraph.m).tolist()

    clauses: List[Optional[Clause]] = [None] * hypergraph.m
    trace = [coverage.uncovered_count]
    for j in visit:
        clause, newly = best_polarity(hypergraph.edges[j], coverage)
        coverage.add_clause(clause)
        clauses[j] = clause
        trace.append(coverage.uncovered_count)
        logger.debug("edge %d -> %s covers %d new, %d left", j, clause, newly, trace[-1])

    formula = CnfFormula(hypergraph.n, tuple(clauses))
    logger.info(
        "Greedy polarity over %d edges on n=%d: %d assignments uncovered",
        hypergraph.m, hypergraph.n, coverage.uncovered_count,
    )
    return UnsatBuild(
        formula=formula,
        final_uncovered=coverage.uncovered_count,
        trace=trace,
        order=visit,
    )


def guaranteed_unsat_edges(n: int, k: int) -> int:
    """n * 2^k edges always leave nothing uncovered: 2^n (1 - 2^-k)^(n 2^k) < 1"""
    return n * 2 ** k
