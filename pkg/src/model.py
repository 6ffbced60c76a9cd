"""Hypergraphs, CNF formulas, assignments and the quantities measured on them.

Vertices and variables are 0-indexed in memory; the file formats in
``src.formats`` are 1-indexed. All types are immutable after construction.
"""

import itertools
from collections import Counter
from dataclasses import dataclass, asdict
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import NotAlphaIntersectingError, NotUniformError, ParameterError

MAX_COMPLETE_K = 20

Edge = Tuple[int, ...]
Literal = Tuple[int, bool]  # (variable, negated)
Witness = Tuple[int, int, int]  # (edge a, edge b, shared vertices)


@dataclass(frozen=True)
class Params:
    """Clause width k and intersection bound alpha"""
    k: int
    alpha: int

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        if not 1 <= self.alpha <= self.k:
            raise ParameterError(f"alpha must be in 1..k, got alpha={self.alpha}, k={self.k}")

    def require_alpha_below_k(self) -> None:
        if self.alpha >= self.k:
            raise ParameterError(f"alpha < k required, got alpha={self.alpha}, k={self.k}")


@dataclass(frozen=True)
class Hypergraph:
    """(Multi-)hypergraph on vertices 0..n-1 with an ordered edge list"""
    n: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ParameterError(f"n must be non-negative, got {self.n}")
        edges = tuple(tuple(int(v) for v in e) for e in self.edges)
        for index, edge in enumerate(edges):
            if not edge:
                raise ParameterError(f"edge {index} is empty")
            if any(a >= b for a, b in zip(edge, edge[1:])):
                raise ParameterError(f"edge {index} is not strictly sorted: {edge}")
            if edge[0] < 0 or edge[-1] >= self.n:
                raise ParameterError(f"edge {index} has a vertex outside [0, {self.n})")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_sets(cls, n: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        """Build from unsorted vertex collections"""
        normalized = []
        for edge in edges:
            vertices = sorted(edge)
            if len(set(vertices)) != len(vertices):
                raise ParameterError(f"edge has a repeated vertex: {vertices}")
            normalized.append(tuple(vertices))
        return cls(n, tuple(normalized))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def width(self) -> Optional[int]:
        """Common edge size, or None when empty or non-uniform"""
        sizes = {len(e) for e in self.edges}
        return sizes.pop() if len(sizes) == 1 else None

    def is_uniform(self) -> bool:
        return self.m == 0 or self.width is not None

    def require_uniform(self) -> Optional[int]:
        """Return the width; raises NotUniformError for mixed edge sizes"""
        if not self.is_uniform():
            raise NotUniformError("hypergraph is not uniform")
        return self.width

    @cached_property
    def incidence(self) -> Tuple[Tuple[int, ...], ...]:
        """Edge indices containing each vertex"""
        lists: List[List[int]] = [[] for _ in range(self.n)]
        for index, edge in enumerate(self.edges):
            for v in edge:
                lists[v].append(index)
        return tuple(tuple(items) for items in lists)

    def shared_counts(self, index: int) -> Counter:
        """Other edge index -> number of vertices shared with edge ``index``"""
        counts: Counter = Counter()
        for v in self.edges[index]:
            counts.update(self.incidence[v])
        del counts[index]
        return counts


@dataclass(frozen=True)
class Clause:
    """Disjunction of literals on distinct variables, sorted by variable"""
    literals: Tuple[Literal, ...]

    def __post_init__(self):
        literals = tuple(sorted((int(v), bool(neg)) for v, neg in self.literals))
        if not literals:
            raise ParameterError("clause must contain at least one literal")
        variables = [v for v, _ in literals]
        if len(set(variables)) != len(variables):
            raise ParameterError(f"clause repeats a variable: {variables}")
        if variables[0] < 0:
            raise ParameterError("variable ids must be non-negative")
        object.__setattr__(self, "literals", literals)

    @classmethod
    def from_pattern(cls, edge: Sequence[int], pattern: int) -> "Clause":
        """Clause on ``edge``; bit j of pattern negates the j-th smallest variable"""
        ordered = sorted(edge)
        return cls(tuple((v, bool((pattern >> j) & 1)) for j, v in enumerate(ordered)))

    @property
    def variables(self) -> Edge:
        return tuple(v for v, _ in self.literals)

    @property
    def width(self) -> int:
        return len(self.literals)

    @property
    def pattern(self) -> int:
        """Inverse of ``from_pattern``"""
        return sum(1 << j for j, (_, neg) in enumerate(self.literals) if neg)

    def is_satisfied_by(self, bits: Sequence[bool]) -> bool:
        return any(bool(bits[v]) != neg for v, neg in self.literals)

    def restrict(self, variables: Iterable[int]) -> "Clause":
        """Keep only the literals on ``variables``"""
        keep = set(variables)
        return Clause(tuple(lit for lit in self.literals if lit[0] in keep))

    def __str__(self) -> str:
        return "(" + " v ".join(f"{'~' if neg else ''}x{v}" for v, neg in self.literals) + ")"


@dataclass(frozen=True)
class CnfFormula:
    """Conjunction of clauses over variables 0..n-1"""
    n: int
    clauses: Tuple[Clause, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ParameterError(f"n must be non-negative, got {self.n}")
        clauses = tuple(self.clauses)
        for index, clause in enumerate(clauses):
            if clause.variables[-1] >= self.n:
                raise ParameterError(f"clause {index} uses a variable outside [0, {self.n})")
        object.__setattr__(self, "clauses", clauses)

    @property
    def m(self) -> int:
        return len(self.clauses)

    @cached_property
    def width(self) -> Optional[int]:
        sizes = {c.width for c in self.clauses}
        return sizes.pop() if len(sizes) == 1 else None

    def is_uniform(self) -> bool:
        return self.m == 0 or self.width is not None

    def require_uniform(self) -> Optional[int]:
        if not self.is_uniform():
            raise NotUniformError("formula is not uniform")
        return self.width

    @cached_property
    def hypergraph(self) -> Hypergraph:
        return induced_hypergraph(self)

    def without_clause(self, index: int) -> "CnfFormula":
        return CnfFormula(self.n, self.clauses[:index] + self.clauses[index + 1:])

    @cached_property
    def literal_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Flat (variables, negated, clause start offsets) for vectorised evaluation"""
        variables = np.fromiter(
            (v for c in self.clauses for v, _ in c.literals), dtype=np.int64
        )
        negated = np.fromiter(
            (neg for c in self.clauses for _, neg in c.literals), dtype=bool
        )
        offsets = np.cumsum([0] + [c.width for c in self.clauses[:-1]], dtype=np.int64)
        return variables, negated, offsets

    def falsified_mask(self, bits: np.ndarray) -> np.ndarray:
        """Boolean per clause: True when every literal is false under ``bits``"""
        if self.m == 0:
            return np.zeros(0, dtype=bool)
        variables, negated, offsets = self.literal_arrays
        literal_false = bits[variables] == negated
        return np.logical_and.reduceat(literal_false, offsets)


@dataclass(frozen=True)
class Assignment:
    """Total truth assignment; index encoding puts variable 0 in the lowest bit"""
    bits: Tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(bool(b) for b in self.bits))

    @classmethod
    def from_index(cls, index: int, n: int) -> "Assignment":
        return cls(tuple(bool((index >> v) & 1) for v in range(n)))

    @classmethod
    def all_false(cls, n: int) -> "Assignment":
        return cls((False,) * n)

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def index(self) -> int:
        return sum(1 << v for v, b in enumerate(self.bits) if b)

    def as_array(self) -> np.ndarray:
        return np.array(self.bits, dtype=bool)


@dataclass(frozen=True)
class MetricsReport:
    """Quantities measured on the induced hypergraph of a formula"""
    n: int
    m: int
    i: int
    delta_vertex: int
    delta_clause: int
    alpha_measured: int
    width: Optional[int]

    def to_dict(self) -> Dict[str, Optional[int]]:
        return asdict(self)


def vertex_degrees(hypergraph: Hypergraph) -> List[int]:
    """Number of edges containing each vertex"""
    if hypergraph.m == 0:
        return [0] * hypergraph.n
    flat = np.fromiter(itertools.chain.from_iterable(hypergraph.edges), dtype=np.int64)
    return np.bincount(flat, minlength=hypergraph.n).tolist()


def clause_degree(hypergraph: Hypergraph, index: int) -> int:
    """Number of other edges sharing at least one vertex with edge ``index``"""
    if not 0 <= index < hypergraph.m:
        raise IndexError(f"edge index {index} out of range for m={hypergraph.m}")
    return len(hypergraph.shared_counts(index))


def clause_degrees(hypergraph: Hypergraph) -> List[int]:
    return [len(hypergraph.shared_counts(j)) for j in range(hypergraph.m)]


def intersection_pairs(hypergraph: Hypergraph) -> int:
    """Unordered pairs of distinct edges sharing a vertex, each counted once"""
    return sum(clause_degrees(hypergraph)) // 2


def check_alpha_intersecting(hypergraph: Hypergraph, alpha: int) -> Optional[Witness]:
    """None if every pair of edges shares at most ``alpha`` vertices.

    Otherwise the lexicographically first violating pair (a, b, shared).
    """
    for a in range(hypergraph.m):
        counts = hypergraph.shared_counts(a)
        violators = [b for b, shared in counts.items() if b > a and shared > alpha]
        if violators:
            b = min(violators)
            return a, b, counts[b]
    return None


def require_alpha_intersecting(hypergraph: Hypergraph, alpha: int) -> None:
    witness = check_alpha_intersecting(hypergraph, alpha)
    if witness is not None:
        raise NotAlphaIntersectingError(alpha, witness)


def max_shared(hypergraph: Hypergraph) -> int:
    """Largest number of vertices shared by two distinct edges (0 if m < 2)"""
    best = 0
    for j in range(hypergraph.m):
        counts = hypergraph.shared_counts(j)
        if counts:
            best = max(best, max(counts.values()))
    return best


def induced_hypergraph(formula: CnfFormula) -> Hypergraph:
    """Edge j is the variable set of clause j"""
    return Hypergraph(formula.n, tuple(c.variables for c in formula.clauses))


def hypergraph_metrics(hypergraph: Hypergraph) -> MetricsReport:
    degrees = clause_degrees(hypergraph)
    width = hypergraph.width if hypergraph.m else 0
    return MetricsReport(
        n=hypergraph.n,
        m=hypergraph.m,
        i=sum(degrees) // 2,
        delta_vertex=max(vertex_degrees(hypergraph), default=0),
        delta_clause=max(degrees, default=0),
        alpha_measured=max_shared(hypergraph),
        width=width,
    )


def metrics(formula: CnfFormula) -> MetricsReport:
    """All measured quantities of the formula's induced hypergraph"""
    return hypergraph_metrics(formula.hypergraph)


def complete_formula(k: int) -> CnfFormula:
    """All 2^k clauses on variables 0..k-1, in lexicographic sign order"""
    if not 1 <= k <= MAX_COMPLETE_K:
        raise ParameterError(f"k must be in 1..{MAX_COMPLETE_K}, got {k}")
    clauses = tuple(
        Clause(tuple(zip(range(k), signs)))
        for signs in itertools.product((False, True), repeat=k)
    )
    return CnfFormula(k, clauses)


def mu_m_trivial(k: int) -> int:
    """Fewest clauses of any unsatisfiable k-CNF: each clause rules out one of 2^k patterns"""
    return 2 ** k
