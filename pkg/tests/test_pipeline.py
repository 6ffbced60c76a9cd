import math

import pytest

from src.errors import CoverageCapError, DensityNotReachedError, ParameterError
from src.maximal import min_edges_bound
from src.model import Hypergraph, check_alpha_intersecting, hypergraph_metrics
from src.oracle import brute_force_sat
from src.pipeline import (
    attach_polarity,
    auto_n,
    closed_form_n,
    degree_bound,
    pairs_bound_holds,
    upper_bound_pipeline,
)


class TestAutoN:
    """Smallest n whose maximal hypergraphs are dense enough"""

    def test_k2_alpha1(self):
        assert auto_n(2, 1) == 145

    def test_k3_alpha2(self):
        n = auto_n(3, 2)
        assert n * (n - 1) * (n - 2) >= 19200 * n
        assert (n - 1) * (n - 2) * (n - 3) < 19200 * (n - 1)

    @pytest.mark.parametrize("k,alpha", [(2, 1), (3, 1), (3, 2), (5, 2)])
    def test_is_smallest(self, k, alpha):
        n = auto_n(k, alpha)
        width = k + alpha
        assert min_edges_bound(n, width, alpha) >= n * 2 ** width
        assert min_edges_bound(n - 1, width, alpha) < (n - 1) * 2 ** width

    @pytest.mark.parametrize("k", [8, 10, 12])
    def test_within_constant_factor_of_closed_form(self, k):
        ratio = auto_n(k, 1) / closed_form_n(k, 1)
        assert 0.01 < ratio < 100

    def test_alpha_below_k(self):
        with pytest.raises(ParameterError):
            auto_n(2, 2)


class TestDegreeBound:
    def test_alpha1_is_square_root(self):
        assert degree_bound(1160, 2, 1) == pytest.approx(math.sqrt(3 * 1160))


class TestPairsBound:
    """Intersecting pairs against m times the max vertex degree"""

    def test_holds_on_complete_graph(self, k9):
        stats = hypergraph_metrics(k9)
        assert (stats.i, stats.delta_vertex) == (252, 8)
        assert pairs_bound_holds(stats)

    def test_fails_on_affine_plane(self):
        # 12 lines of the 3x3 grid plane: every point on 4 lines, only parallel lines miss
        lines = (
            (0, 1, 2), (3, 4, 5), (6, 7, 8),
            (0, 3, 6), (1, 4, 7), (2, 5, 8),
            (0, 4, 8), (1, 5, 6), (2, 3, 7),
            (0, 5, 7), (1, 3, 8), (2, 4, 6),
        )
        stats = hypergraph_metrics(Hypergraph(9, lines))
        assert (stats.m, stats.delta_vertex, stats.i) == (12, 4, 54)
        assert not pairs_bound_holds(stats)


class TestUpperBoundPipeline:
    """Build, shrink and check the structural bounds"""

    def test_density_not_reached(self):
        with pytest.raises(DensityNotReachedError, match="72"):
            upper_bound_pipeline(2, 1, n=9)

    def test_polarity_needs_small_n(self):
        with pytest.raises(CoverageCapError):
            upper_bound_pipeline(2, 1, with_polarity=True)

    def test_n_below_width(self):
        with pytest.raises(ParameterError):
            upper_bound_pipeline(2, 1, n=2)

    def test_auto_n_used_when_n_omitted(self, mocker):
        mocker.patch("src.pipeline.auto_n", return_value=9)
        with pytest.raises(DensityNotReachedError):
            upper_bound_pipeline(2, 1)

    def test_attach_polarity_on_dense_graph(self, k9):
        # K_9 with alpha=1 shrinks to a 1-uniform hypergraph
        unsat, shrunk_formula = attach_polarity(k9, 1)
        assert unsat.unsatisfiable
        assert shrunk_formula.width == 1
        assert brute_force_sat(shrunk_formula).verdict == "UNSAT"


@pytest.mark.slow
def test_structural_reproduction_k2_alpha1():
    """n = 145 gives a dense linear triple system whose 1-shrink has small degree"""
    result = upper_bound_pipeline(2, 1, seed=0)
    h, shrunk = result.hypergraph, result.shrunk

    assert h.n == 145
    assert h.width == 3
    assert h.m >= 1160
    assert check_alpha_intersecting(h, 1) is None

    assert shrunk.width == 2
    assert (shrunk.n, shrunk.m) == (h.n, h.m)
    stats = hypergraph_metrics(shrunk)
    assert stats.delta_vertex <= math.sqrt(3 * h.m)
    assert stats.i <= h.m * stats.delta_vertex
    assert result.report["checks"]["pairs_bound"]

    assert result.checks_passed
    assert result.report["certified_maximal"]
    assert "U_n" in result.report["upper_bounds"]
