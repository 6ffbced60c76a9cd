"""Exception hierarchy for alpha-sat-thresholds"""

from typing import Optional, Tuple


class AlphaSatError(Exception):
    """Base class for every error raised by this package"""


class ConfigError(AlphaSatError):
    """Invalid configuration value (file or environment)"""


class ParameterError(AlphaSatError, ValueError):
    """Parameters outside the documented preconditions"""


class NotUniformError(AlphaSatError, ValueError):
    """Operation requires all edges (clauses) to have the same width"""


class NotAlphaIntersectingError(AlphaSatError, ValueError):
    """Two edges share more than alpha vertices"""

    def __init__(self, alpha: int, witness: Tuple[int, int, int]):
        self.alpha = alpha
        self.witness = witness
        a, b, shared = witness
        super().__init__(
            f"Not {alpha}-intersecting: edges {a} and {b} share {shared} vertices"
        )


class CoverageCapError(AlphaSatError, ValueError):
    """Variable count exceeds the 2^n coverage cap"""

    def __init__(self, n: int, cap: int):
        self.n = n
        self.cap = cap
        super().__init__(f"n={n} exceeds the coverage cap of {cap} variables")


class DensityNotReachedError(AlphaSatError):
    """Maximal hypergraph has fewer than n * 2^(k+alpha) edges"""


class TargetUnreachableError(AlphaSatError):
    """Random builder became maximal before reaching the requested edge count"""


class FormatError(AlphaSatError, ValueError):
    """Malformed DIMACS CNF or HYG input"""

    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class SolverAnomalyError(AlphaSatError):
    """Moser-Tardos failed although the degree condition held"""
