"""Greedy maximal alpha-intersecting hypergraphs and random instance generators.

A k-subset can join an alpha-intersecting hypergraph exactly when none of its
(alpha+1)-subsets is already covered by a chosen edge, so the builder only
keeps the set of covered (alpha+1)-subsets.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Set, Tuple

import numpy as np

from src.config import get_maximal_config
from src.errors import ParameterError, TargetUnreachableError
from src.model import Clause, CnfFormula, Edge, Hypergraph

logger = logging.getLogger(__name__)

CHUNK_SIZE = 65_536


def _check_params(n: int, k: int, alpha: int) -> None:
    if not (n >= k > alpha >= 1):
        raise ParameterError(f"need n >= k > alpha >= 1, got n={n}, k={k}, alpha={alpha}")


def min_edges_bound(n: int, k: int, alpha: int) -> int:
    """ceil(C(n, alpha+1) / C(k, alpha+1)^2), the guaranteed size of a maximal hypergraph"""
    _check_params(n, k, alpha)
    numerator = math.comb(n, alpha + 1)
    denominator = math.comb(k, alpha + 1) ** 2
    return -(-numerator // denominator)


def de_caen_edges_bound(n: int, k: int, alpha: int) -> int:
    """Edge bound obtained from de Caen's Turan estimate before simplification.

    ceil(T / C(k, alpha+1)) with T >= (n-k+1)/(n-alpha) * C(n, alpha+1) / C(k-1, alpha).
    """
    _check_params(n, k, alpha)
    turan = Fraction((n - k + 1) * math.comb(n, alpha + 1), (n - alpha) * math.comb(k - 1, alpha))
    return math.ceil(turan / math.comb(k, alpha + 1))


class CoverIndex:
    """Set of (alpha+1)-subsets covered by the edges chosen so far"""

    def __init__(self, alpha: int):
        if alpha < 1:
            raise ParameterError(f"alpha must be >= 1, got {alpha}")
        self.alpha = alpha
        self._covered: Set[Edge] = set()

    @classmethod
    def from_hypergraph(cls, hypergraph: Hypergraph, alpha: int) -> "CoverIndex":
        """Index an existing hypergraph; raises if it is not alpha-intersecting"""
        index = cls(alpha)
        for edge in hypergraph.edges:
            index.add(edge)
        return index

    def subsets(self, edge: Edge) -> Iterator[Edge]:
        return itertools.combinations(edge, self.alpha + 1)

    def blocking_subset(self, edge: Edge) -> Optional[Edge]:
        """First covered (alpha+1)-subset of ``edge``, or None if it can be added"""
        for subset in self.subsets(edge):
            if subset in self._covered:
                return subset
        return None

    def can_add(self, edge: Edge) -> bool:
        return self.blocking_subset(edge) is None

    def add(self, edge: Edge) -> None:
        blocking = self.blocking_subset(edge)
        if blocking is not None:
            raise ParameterError(
                f"edge {edge} shares {self.alpha + 1} vertices {blocking} with an earlier edge"
            )
        self._covered.update(self.subsets(edge))

    def __len__(self) -> int:
        return len(self._covered)

    def __contains__(self, subset) -> bool:
        return tuple(subset) in self._covered


@dataclass
class GreedyBuild:
    """Result of a greedy run with its provenance"""
    hypergraph: Hypergraph
    cover_index: CoverIndex
    mode: str  # "enumerate" or "sample"
    certified_maximal: bool
    candidates_seen: int


def _shuffled_candidates(n: int, k: int, rng: np.random.Generator) -> Iterator[Edge]:
    """All k-subsets of range(n) in a seeded random order"""
    total = math.comb(n, k)
    dtype = np.int16 if n <= np.iinfo(np.int16).max else np.int32
    flat = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(n), k)),
        dtype=dtype,
        count=total * k,
    )
    table = flat.reshape(total, k)
    order = rng.permutation(total)
    for start in range(0, total, CHUNK_SIZE):
        for row in table[order[start:start + CHUNK_SIZE]].tolist():
            yield tuple(row)


def _random_subset(n: int, k: int, rng: np.random.Generator) -> Edge:
    return tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))


def _greedy(
    n: int,
    k: int,
    alpha: int,
    rng: np.random.Generator,
    stop_at: Optional[int] = None,
    sample_rejections: Optional[int] = None,
    enumeration_budget: Optional[int] = None,
) -> GreedyBuild:
    config = get_maximal_config()
    budget = enumeration_budget or config.enumeration_budget
    cover = CoverIndex(alpha)
    edges: List[Edge] = []
    seen = 0

    total = math.comb(n, k)
    if sample_rejections is None and total <= budget:
        mode = "enumerate"
        for candidate in _shuffled_candidates(n, k, rng):
            if stop_at is not None and len(edges) >= stop_at:
                break
            seen += 1
            if cover.can_add(candidate):
                cover.add(candidate)
                edges.append(candidate)
        certified = seen == total
    else:
        if sample_rejections is None:
            raise ParameterError(
                f"C({n},{k}) = {total} candidates exceeds the enumeration budget {budget}; "
                "select sampling mode"
            )
        mode = "sample"
        rejections = 0
        while rejections < sample_rejections:
            if stop_at is not None and len(edges) >= stop_at:
                break
            seen += 1
            candidate = _random_subset(n, k, rng)
            if cover.can_add(candidate):
                cover.add(candidate)
                edges.append(candidate)
                rejections = 0
            else:
                rejections += 1
        certified = False

    logger.debug("Greedy %s run: %d edges from %d candidates", mode, len(edges), seen)
    return GreedyBuild(
        hypergraph=Hypergraph(n, tuple(edges)),
        cover_index=cover,
        mode=mode,
        certified_maximal=certified,
        candidates_seen=seen,
    )


def grow_maximal(
    n: int,
    k: int,
    alpha: int,
    seed: int = 0,
    sample_rejections: Optional[int] = None,
    enumeration_budget: Optional[int] = None,
) -> GreedyBuild:
    """Greedy maximal alpha-intersecting k-uniform hypergraph with provenance.

    Without ``sample_rejections`` every k-subset is visited in seeded random
    order (certified maximal). With it, random candidates are drawn until that
    many consecutive rejections; such results are not certified.
    """
    _check_params(n, k, alpha)
    build = _greedy(
        n, k, alpha, np.random.default_rng(seed),
        sample_rejections=sample_rejections,
        enumeration_budget=enumeration_budget,
    )
    if not build.certified_maximal:
        logger.warning(
            "Sampling mode: %d edges on n=%d are not certified maximal", build.hypergraph.m, n
        )
    logger.info(
        "Built %s alpha=%d hypergraph: n=%d k=%d m=%d (bound %d)",
        "maximal" if build.certified_maximal else "sampled",
        alpha, n, k, build.hypergraph.m, min_edges_bound(n, k, alpha),
    )
    return build


def build_maximal(
    n: int,
    k: int,
    alpha: int,
    seed: int = 0,
    sample_rejections: Optional[int] = None,
    enumeration_budget: Optional[int] = None,
) -> Hypergraph:
    """Simple k-uniform alpha-intersecting hypergraph no k-subset can be added to"""
    return grow_maximal(n, k, alpha, seed, sample_rejections, enumeration_budget).hypergraph


def verify_maximality(
    hypergraph: Hypergraph,
    alpha: int,
    budget: Optional[int] = None,
    k: Optional[int] = None,
    seed: int = 0,
) -> Optional[Edge]:
    """None if no tested k-subset is addable, else the first addable one found.

    Exhaustive over all C(n, k) subsets when that is at most ``budget``,
    otherwise ``budget`` uniformly sampled subsets.
    """
    width = hypergraph.require_uniform()
    k = k if k is not None else width
    if k is None:
        raise ParameterError("k is required for an empty hypergraph")
    if width is not None and width != k:
        raise ParameterError(f"hypergraph width {width} does not match k={k}")
    budget = budget or get_maximal_config().verify_budget
    cover = CoverIndex.from_hypergraph(hypergraph, alpha)

    n = hypergraph.n
    if math.comb(n, k) <= budget:
        candidates = itertools.combinations(range(n), k)
    else:
        rng = np.random.default_rng(seed)
        candidates = (_random_subset(n, k, rng) for _ in range(budget))
    for candidate in candidates:
        if cover.can_add(candidate):
            return candidate
    return None


def _random_signs(edges: List[Edge], n: int, k: int, rng: np.random.Generator) -> CnfFormula:
    patterns = rng.integers(0, 2, size=(len(edges), k)) if edges else np.zeros((0, k), dtype=int)
    clauses = tuple(
        Clause(tuple(zip(edge, (bool(b) for b in bits))))
        for edge, bits in zip(edges, patterns.tolist())
    )
    return CnfFormula(n, clauses)


def gen_random_alpha_formula(
    n: int,
    k: int,
    alpha: int,
    m_target: int,
    seed: int = 0,
    sample_rejections: Optional[int] = None,
) -> CnfFormula:
    """Random alpha-intersecting k-CNF with exactly ``m_target`` clauses and uniform signs"""
    _check_params(n, k, alpha)
    if m_target < 0:
        raise ParameterError(f"m_target must be non-negative, got {m_target}")
    rng = np.random.default_rng(seed)
    if m_target == 0:
        return CnfFormula(n)

    config = get_maximal_config()
    if math.comb(n, k) > config.enumeration_budget and sample_rejections is None:
        sample_rejections = config.max_consecutive_rejections
    build = _greedy(n, k, alpha, rng, stop_at=m_target, sample_rejections=sample_rejections)
    edges = list(build.hypergraph.edges)
    if len(edges) < m_target:
        raise TargetUnreachableError(
            f"greedy builder stopped at {len(edges)} edges before reaching m_target={m_target}"
        )
    return _random_signs(edges, n, k, rng)


def gen_degree_bounded_formula(
    n: int,
    k: int,
    max_clause_degree: int,
    m_target: int,
    seed: int = 0,
    max_consecutive_rejections: int = 10_000,
) -> CnfFormula:
    """Random k-CNF whose clause degrees never exceed ``max_clause_degree``"""
    if not n >= k >= 1:
        raise ParameterError(f"need n >= k >= 1, got n={n}, k={k}")
    if max_clause_degree < 0 or m_target < 0:
        raise ParameterError("max_clause_degree and m_target must be non-negative")
    rng = np.random.default_rng(seed)
    incidence: List[List[int]] = [[] for _ in range(n)]
    degrees: List[int] = []
    edges: List[Edge] = []
    rejections = 0
    while len(edges) < m_target:
        if rejections >= max_consecutive_rejections:
            raise TargetUnreachableError(
                f"no admissible clause after {rejections} tries at m={len(edges)}"
            )
        candidate = _random_subset(n, k, rng)
        neighbours = {j for v in candidate for j in incidence[v]}
        if len(neighbours) > max_clause_degree or any(
            degrees[j] >= max_clause_degree for j in neighbours
        ):
            rejections += 1
            continue
        rejections = 0
        index = len(edges)
        for j in neighbours:
            degrees[j] += 1
        degrees.append(len(neighbours))
        for v in candidate:
            incidence[v].append(index)
        edges.append(candidate)
    return _random_signs(edges, n, k, rng)


def edge_count_summary(hypergraph: Hypergraph, alpha: int) -> Tuple[int, int, int]:
    """(m, simplified edge bound, de Caen edge bound) for a k-uniform hypergraph"""
    k = hypergraph.require_uniform()
    return (
        hypergraph.m,
        min_edges_bound(hypergraph.n, k, alpha),
        de_caen_edges_bound(hypergraph.n, k, alpha),
    )
