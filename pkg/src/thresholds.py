"""Lower (LLL-based) and upper (construction-based) satisfiability thresholds
for alpha-intersecting k-CNF formulas, and the guarantee check against them.

All bounds are real numbers compared with strict inequalities; nothing is
rounded. For small k the lower bounds can be vacuous (d <= 1); that regime is
flagged, not clamped.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional

from src.errors import ParameterError
from src.model import MetricsReport

logger = logging.getLogger(__name__)

GUARANTEES = ("variables", "clauses", "intersections")


def _check_params(k: int, alpha: int) -> None:
    if not k > alpha >= 1:
        raise ParameterError(f"need k > alpha >= 1, got k={k}, alpha={alpha}")


def degree_threshold(k: int, alpha: int) -> float:
    """d = 2^(k-alpha) / (e k), the vertex-degree gate after alpha-shrinking"""
    _check_params(k, alpha)
    return 2.0 ** (k - alpha) / (math.e * k)


@dataclass(frozen=True)
class ThresholdBounds:
    """Evaluated threshold formulas for one (k, alpha)"""
    k: int
    alpha: int
    d: float
    lower_i: Optional[float] = None
    lower_n: Optional[float] = None
    lower_m: Optional[float] = None
    upper_i: Optional[float] = None
    upper_n: Optional[float] = None
    upper_m: Optional[float] = None
    upper_delta: Optional[float] = None
    degenerate: bool = False

    def to_dict(self) -> Dict[str, object]:
        return {
            "k": self.k,
            "alpha": self.alpha,
            "d": self.d,
            "L_i": self.lower_i,
            "L_n": self.lower_n,
            "L_m": self.lower_m,
            "U_i": self.upper_i,
            "U_n": self.upper_n,
            "U_m": self.upper_m,
            "U_delta": self.upper_delta,
            "degenerate": self.degenerate,
        }


def _signed_power(base: float, exponent: float) -> float:
    # real-valued continuation for a negative base with a fractional exponent
    return math.copysign(abs(base) ** exponent, base)


def _lower(k: int, alpha: int) -> Dict[str, object]:
    d = degree_threshold(k, alpha)
    degenerate = d <= 1
    if degenerate:
        logger.warning("Degenerate lower bounds for k=%d alpha=%d: d=%.4f <= 1", k, alpha, d)
    return {
        "d": d,
        "lower_i": _signed_power(d - 1, 2 + 1 / alpha) / (2 * alpha),
        "lower_n": d ** (1 / alpha),
        "lower_m": d ** (1 + 1 / alpha) / k,
        "degenerate": degenerate,
    }


def _upper(k: int, alpha: int) -> Dict[str, float]:
    return {
        "upper_i": alpha ** 2 * 2.0 ** ((k + alpha) * (2 + 1 / alpha)) * k ** (5 + 2 / alpha),
        "upper_n": 2 * alpha * 2.0 ** (k / alpha) * k ** (2 * (1 + 1 / alpha)),
        "upper_m": alpha * 2.0 ** ((k + alpha) * (1 + 1 / alpha)) * k ** (2 * (1 + 1 / alpha)),
        "upper_delta": alpha * 2.0 ** (k + alpha) * k ** 2,
    }


def lower_bounds(k: int, alpha: int) -> ThresholdBounds:
    """L_i, L_n, L_m: below any of them an alpha-intersecting k-CNF is satisfiable"""
    _check_params(k, alpha)
    return ThresholdBounds(k=k, alpha=alpha, **_lower(k, alpha))


def upper_bounds(k: int, alpha: int) -> ThresholdBounds:
    """U_i, U_n, U_m, U_delta attained by the shrunk-maximal unsatisfiable construction"""
    _check_params(k, alpha)
    return ThresholdBounds(k=k, alpha=alpha, d=degree_threshold(k, alpha), **_upper(k, alpha))


def threshold_bounds(k: int, alpha: int) -> ThresholdBounds:
    """Both families"""
    _check_params(k, alpha)
    return ThresholdBounds(k=k, alpha=alpha, **_lower(k, alpha), **_upper(k, alpha))


@dataclass(frozen=True)
class GuaranteeCheck:
    guaranteed_by: FrozenSet[str]
    bounds: ThresholdBounds

    @property
    def guaranteed(self) -> bool:
        return bool(self.guaranteed_by)

    def to_dict(self) -> Dict[str, object]:
        return {
            "guaranteed_by": [g for g in GUARANTEES if g in self.guaranteed_by],
            "bounds": self.bounds.to_dict(),
        }


def guarantee_check(report: MetricsReport, k: int, alpha: int) -> GuaranteeCheck:
    """Which quantities of ``report`` fall strictly below their lower threshold.

    An empty set means no guarantee, not unsatisfiability.
    """
    bounds = threshold_bounds(k, alpha)
    guaranteed = set()
    if report.n < bounds.lower_n:
        guaranteed.add("variables")
    if report.m < bounds.lower_m:
        guaranteed.add("clauses")
    if report.i < bounds.lower_i:
        guaranteed.add("intersections")
    return GuaranteeCheck(guaranteed_by=frozenset(guaranteed), bounds=bounds)
