"""Brute-force ground truth over all 2^n assignments.

Assignment index a encodes variable v as bit v of a (variable 0 lowest).
Scans walk the index range in fixed-size blocks, so working memory does not
grow with 2^n; n is still bounded by the shared coverage cap.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np

from src.config import get_coverage_cap
from src.errors import CoverageCapError, ParameterError
from src.model import Assignment, Clause, CnfFormula

logger = logging.getLogger(__name__)

# 2^13 indices per block; a multiple of 8 so blocks align with packed bytes
BLOCK_BITS = 13


@dataclass(frozen=True)
class SatResult:
    """Outcome of an exhaustive scan"""
    satisfiable: bool
    witness: Optional[Assignment] = None

    @property
    def verdict(self) -> str:
        return "SAT" if self.satisfiable else "UNSAT"


def check_cap(n: int, cap: Optional[int] = None) -> int:
    """Raise CoverageCapError when 2^n work is not allowed; returns the cap"""
    cap = cap if cap is not None else get_coverage_cap()
    if n > cap:
        raise CoverageCapError(n, cap)
    return cap


def index_blocks(n: int) -> Iterator[Tuple[int, np.ndarray]]:
    """Yield ``(start, indices)`` covering 0..2^n-1 in ascending blocks"""
    size = 2 ** n
    step = min(size, 2 ** BLOCK_BITS)
    for start in range(0, size, step):
        yield start, np.arange(start, start + step, dtype=np.int64)


def falsifying_mask(clause: Clause, indices: np.ndarray) -> np.ndarray:
    """True for every assignment index under which all literals of ``clause`` are false"""
    mask = np.ones(indices.shape, dtype=bool)
    bit = np.empty(indices.shape, dtype=indices.dtype)
    for v, negated in clause.literals:
        np.right_shift(indices, v, out=bit)
        np.bitwise_and(bit, 1, out=bit)
        if negated:
            mask &= bit.astype(bool)
        else:
            mask &= bit == 0
    return mask


def model_blocks(
    formula: CnfFormula, cap: Optional[int] = None
) -> Iterator[Tuple[int, np.ndarray]]:
    """Yield ``(start, mask)`` where mask marks the satisfying indices of each block"""
    check_cap(formula.n, cap)
    for start, indices in index_blocks(formula.n):
        models = np.ones(indices.shape, dtype=bool)
        for clause in formula.clauses:
            models &= ~falsifying_mask(clause, indices)
        yield start, models


def verify_assignment(formula: CnfFormula, assignment: Assignment) -> bool:
    """True iff every clause has a true literal"""
    if assignment.n != formula.n:
        raise ParameterError(
            f"assignment has {assignment.n} values for a formula on {formula.n} variables"
        )
    if formula.m == 0:
        return True
    return not formula.falsified_mask(assignment.as_array()).any()


def brute_force_sat(formula: CnfFormula, cap: Optional[int] = None) -> SatResult:
    """Exhaustive scan; a SAT result carries the lowest-index satisfying assignment"""
    for start, models in model_blocks(formula, cap):
        if models.any():
            index = start + int(np.argmax(models))
            return SatResult(satisfiable=True, witness=Assignment.from_index(index, formula.n))
    return SatResult(satisfiable=False)


def count_models(formula: CnfFormula, cap: Optional[int] = None) -> int:
    """Number of satisfying assignments"""
    return sum(int(np.count_nonzero(models)) for _, models in model_blocks(formula, cap))
