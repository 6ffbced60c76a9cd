"""DIMACS CNF and "p hyg" hypergraph formats.

Both are 1-indexed on disk and 0-indexed in memory. Writers emit the
canonical form: header, then one clause (edge) per line with sorted ids.
"""

import hashlib
from pathlib import Path
from typing import Iterator, List, Tuple, Union

from src.errors import FormatError
from src.model import Clause, CnfFormula, Hypergraph

PathLike = Union[str, Path]


def _lines(data: bytes) -> Iterator[Tuple[int, str]]:
    """Non-comment, non-blank lines with 1-based line numbers"""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise FormatError(f"input is not UTF-8 text: {e}")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            # SATLIB end marker
            return
        yield lineno, line


def _parse_header(line: str, lineno: int, kind: str) -> Tuple[int, int]:
    parts = line.split()
    if len(parts) != 4 or parts[0] != "p" or parts[1] != kind:
        raise FormatError(f"invalid problem line: {line!r}", lineno)
    try:
        n, m = int(parts[2]), int(parts[3])
    except ValueError:
        raise FormatError(f"invalid problem line: {line!r}", lineno)
    if n < 0 or m < 0:
        raise FormatError(f"negative counts in problem line: {line!r}", lineno)
    return n, m


def _ints(line: str, lineno: int) -> List[int]:
    try:
        return [int(x) for x in line.split()]
    except ValueError:
        raise FormatError(f"non-integer token in {line!r}", lineno)


def header_kind(data: bytes) -> str:
    """'cnf' or 'hyg' from the problem line"""
    for lineno, line in _lines(data):
        parts = line.split()
        if parts[0] == "p" and len(parts) > 1 and parts[1] in ("cnf", "hyg"):
            return parts[1]
        raise FormatError(f"expected a problem line, got {line!r}", lineno)
    raise FormatError("missing problem line")


def read_dimacs(data: bytes) -> CnfFormula:
    """Parse DIMACS CNF; clauses may span lines and must end with 0"""
    lines = _lines(data)
    header = next(lines, None)
    if header is None:
        raise FormatError("missing problem line")
    n, m = _parse_header(header[1], header[0], "cnf")

    clauses: List[Clause] = []
    pending: List[int] = []
    lineno = header[0]
    for lineno, line in lines:
        if line.startswith("p"):
            raise FormatError("duplicate problem line", lineno)
        for literal in _ints(line, lineno):
            if literal == 0:
                if not pending:
                    raise FormatError("empty clause", lineno)
                variables = [abs(x) for x in pending]
                if len(set(variables)) != len(variables):
                    raise FormatError(f"clause repeats a variable: {pending}", lineno)
                clauses.append(Clause(tuple((abs(x) - 1, x < 0) for x in pending)))
                pending = []
            elif abs(literal) > n:
                raise FormatError(f"literal {literal} out of range for {n} variables", lineno)
            else:
                pending.append(literal)
    if pending:
        raise FormatError("last clause is missing its terminating 0", lineno)
    if len(clauses) != m:
        raise FormatError(f"header declares {m} clauses, found {len(clauses)}")
    return CnfFormula(n, tuple(clauses))


def write_dimacs(formula: CnfFormula) -> bytes:
    lines = [f"p cnf {formula.n} {formula.m}"]
    for clause in formula.clauses:
        literals = [-(v + 1) if neg else v + 1 for v, neg in clause.literals]
        lines.append(" ".join(str(x) for x in literals) + " 0")
    return ("\n".join(lines) + "\n").encode("utf-8")


def read_hypergraph(data: bytes) -> Hypergraph:
    """Parse "p hyg <n> <m>" followed by m lines of 1-indexed vertex ids"""
    lines = _lines(data)
    header = next(lines, None)
    if header is None:
        raise FormatError("missing problem line")
    n, m = _parse_header(header[1], header[0], "hyg")

    edges = []
    for lineno, line in lines:
        if line.startswith("p"):
            raise FormatError("duplicate problem line", lineno)
        vertices = _ints(line, lineno)
        for v in vertices:
            if not 1 <= v <= n:
                raise FormatError(f"vertex {v} out of range for {n} vertices", lineno)
        if len(set(vertices)) != len(vertices):
            raise FormatError(f"duplicate vertex in edge {vertices}", lineno)
        edges.append(tuple(sorted(v - 1 for v in vertices)))
    if len(edges) != m:
        raise FormatError(f"header declares {m} edges, found {len(edges)}")
    return Hypergraph(n, tuple(edges))


def write_hypergraph(hypergraph: Hypergraph) -> bytes:
    lines = [f"p hyg {hypergraph.n} {hypergraph.m}"]
    for edge in hypergraph.edges:
        lines.append(" ".join(str(v + 1) for v in edge))
    return ("\n".join(lines) + "\n").encode("utf-8")


def fingerprint(data: bytes) -> str:
    """sha256 of canonical file bytes, used to deduplicate stored results"""
    return hashlib.sha256(data).hexdigest()


def load_formula(path: PathLike) -> CnfFormula:
    return read_dimacs(Path(path).read_bytes())


def save_formula(path: PathLike, formula: CnfFormula) -> str:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(write_dimacs(formula))
    return str(target)


def load_hypergraph(path: PathLike) -> Hypergraph:
    return read_hypergraph(Path(path).read_bytes())


def save_hypergraph(path: PathLike, hypergraph: Hypergraph) -> str:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(write_hypergraph(hypergraph))
    return str(target)
