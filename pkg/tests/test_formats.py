import pytest

from src.errors import FormatError
from src.formats import (
    fingerprint,
    header_kind,
    load_formula,
    read_dimacs,
    read_hypergraph,
    save_formula,
    save_hypergraph,
    load_hypergraph,
    write_dimacs,
    write_hypergraph,
)
from src.model import Clause, CnfFormula, complete_formula


class TestReadDimacs:
    """DIMACS CNF parsing"""

    def test_single_clause(self):
        formula = read_dimacs(b"p cnf 2 1\n1 -2 0\n")
        assert formula.n == 2
        assert formula.clauses == (Clause(((0, False), (1, True))),)

    def test_comments_and_multiline_clauses(self):
        data = b"c generated\np cnf 3 2\n1 2\n3 0 -1\n-3 0\n"
        formula = read_dimacs(data)
        assert [str(c) for c in formula.clauses] == ["(x0 v x1 v x2)", "(~x0 v ~x2)"]

    def test_satlib_end_marker(self):
        formula = read_dimacs(b"p cnf 1 1\n1 0\n%\n0\n")
        assert formula.m == 1

    @pytest.mark.parametrize(
        "data,message",
        [
            (b"p cnf 1 1\n2 0\n", "out of range"),
            (b"p cnf 2 1\n1 2\n", "terminating 0"),
            (b"p cnf 2 2\n1 0\n", "declares 2 clauses"),
            (b"p cnf 2 1\n1 -1 0\n", "repeats a variable"),
            (b"p cnf 2 1\n0\n", "empty clause"),
            (b"p cnf x 1\n1 0\n", "invalid problem line"),
            (b"1 2 0\n", "invalid problem line"),
            (b"", "missing problem line"),
            (b"p cnf 2 1\n1 a 0\n", "non-integer"),
        ],
    )
    def test_malformed(self, data, message):
        with pytest.raises(FormatError, match=message):
            read_dimacs(data)

    def test_error_carries_line_number(self):
        with pytest.raises(FormatError) as exc_info:
            read_dimacs(b"c header\np cnf 1 1\n5 0\n")
        assert exc_info.value.lineno == 3


class TestWriteDimacs:
    def test_canonical_output(self):
        formula = CnfFormula(3, (Clause(((2, True), (0, False))),))
        assert write_dimacs(formula) == b"p cnf 3 1\n1 -3 0\n"

    def test_roundtrip_complete_formula(self):
        formula = complete_formula(3)
        assert read_dimacs(write_dimacs(formula)) == formula


class TestHypergraphFormat:
    """The "p hyg" edge-list format"""

    def test_single_edge(self):
        h = read_hypergraph(b"p hyg 3 1\n1 2 3\n")
        assert h.edges == ((0, 1, 2),)

    def test_unsorted_edge_lines(self):
        assert read_hypergraph(b"p hyg 3 1\n3 1\n").edges == ((0, 2),)

    def test_k9_has_36_lines(self, k9):
        data = write_hypergraph(k9)
        lines = data.decode().splitlines()
        assert lines[0] == "p hyg 9 36"
        assert len(lines) == 37
        assert read_hypergraph(data) == k9

    def test_duplicate_vertex(self):
        with pytest.raises(FormatError, match="duplicate vertex"):
            read_hypergraph(b"p hyg 2 1\n1 1\n")

    def test_vertex_out_of_range(self):
        with pytest.raises(FormatError, match="out of range"):
            read_hypergraph(b"p hyg 2 1\n1 3\n")

    def test_wrong_kind(self):
        with pytest.raises(FormatError, match="invalid problem line"):
            read_hypergraph(b"p cnf 2 1\n1 2 0\n")


class TestFiles:
    def test_header_kind(self):
        assert header_kind(b"c x\np hyg 2 0\n") == "hyg"
        assert header_kind(b"p cnf 2 0\n") == "cnf"
        with pytest.raises(FormatError):
            header_kind(b"1 2 0\n")

    def test_save_and_load(self, temp_data_dir, k9):
        path = save_hypergraph(temp_data_dir / "nested" / "k9.hyg", k9)
        assert load_hypergraph(path) == k9
        cnf_path = save_formula(temp_data_dir / "c2.cnf", complete_formula(2))
        assert load_formula(cnf_path) == complete_formula(2)

    def test_fingerprint_is_stable(self, k9):
        assert fingerprint(write_hypergraph(k9)) == fingerprint(write_hypergraph(k9))
        assert len(fingerprint(b"")) == 64
