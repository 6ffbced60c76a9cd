import math

import pytest

from src.errors import NotAlphaIntersectingError, ParameterError, SolverAnomalyError
from src.maximal import gen_degree_bounded_formula, gen_random_alpha_formula
from src.model import Clause, CnfFormula, complete_formula, metrics
from src.oracle import verify_assignment
from src.solver import (
    HighDegreeWitness,
    default_max_resamples,
    degree_condition,
    lll_clause_condition,
    moser_tardos,
    solve_alpha_intersecting,
)
from src.thresholds import guarantee_check


class TestMoserTardos:
    """Resampling the lowest violated clause"""

    @pytest.mark.parametrize("k", [1, 3, 6])
    def test_single_clause(self, k):
        formula = CnfFormula(k, (Clause(tuple((v, False) for v in range(k))),))
        result = moser_tardos(formula, seed=0)
        assert result.success
        assert verify_assignment(formula, result.assignment)

    def test_unsatisfiable_hits_cap(self, complete2):
        result = moser_tardos(complete2, seed=1, max_resamples=50)
        assert not result.success
        assert result.resamples == 50

    def test_reproducible(self):
        formula = gen_degree_bounded_formula(100, 5, 10, 20, seed=2)
        assert moser_tardos(formula, seed=7) == moser_tardos(formula, seed=7)

    def test_max_resamples_must_be_positive(self, complete2):
        with pytest.raises(ParameterError):
            moser_tardos(complete2, max_resamples=0)

    def test_default_cap_scales_with_m(self, complete2):
        assert default_max_resamples(complete2) == 4000


class TestDegreeCondition:
    def test_threshold_k12(self):
        formula = CnfFormula(20)
        condition = degree_condition(formula, 12, 1)
        assert condition.d_threshold == pytest.approx(2 ** 11 / (12 * math.e))
        assert condition.d_threshold == pytest.approx(62.78, abs=0.01)

    def test_empty_formula_passes(self):
        condition = degree_condition(CnfFormula(3), 5, 1)
        assert condition.max_vertex_degree == 0
        assert condition.passes

    def test_k2_always_fails(self):
        formula = CnfFormula(2, (Clause(((0, False),)),))
        condition = degree_condition(formula, 2, 1)
        assert condition.d_threshold == pytest.approx(0.3679, abs=1e-4)
        assert not condition.passes

    def test_width_mismatch(self, complete2):
        with pytest.raises(ParameterError, match="expected width"):
            degree_condition(complete2, 5, 1)


class TestClauseCondition:
    def test_complete_formula_fails(self, complete2):
        condition = lll_clause_condition(complete2)
        assert condition.max_clause_degree == 3
        assert condition.limit == pytest.approx(4 / math.e)
        assert not condition.passes


class TestSolveAlphaIntersecting:
    """Shrink, gate on vertex degree, resample"""

    def test_empty_formula(self):
        result = solve_alpha_intersecting(CnfFormula(4), 1)
        assert result.solved
        assert result.assignment.bits == (False,) * 4

    def test_complete_formula_not_intersecting(self):
        with pytest.raises(NotAlphaIntersectingError):
            solve_alpha_intersecting(complete_formula(3), 2)

    def test_alpha_equal_to_k_rejected(self):
        with pytest.raises(ParameterError):
            solve_alpha_intersecting(complete_formula(3), 3)

    def test_linear_12_cnf(self):
        formula = gen_random_alpha_formula(3000, 12, 1, 300, seed=0)
        result = solve_alpha_intersecting(formula, 1, seed=0)
        assert result.solved
        assert verify_assignment(formula, result.assignment)

    def test_no_guarantee_carries_witness(self):
        # every pair of clauses shares exactly variable 0
        formula = CnfFormula(7, tuple(
            Clause(((0, False), (v, False), (v + 1, True))) for v in (1, 3, 5)
        ))
        result = solve_alpha_intersecting(formula, 1)
        assert result.status == "no_guarantee"
        assert result.witness.d >= 1
        assert result.metrics.m == 3
        assert "witness" in result.to_dict()

    def test_anomaly_when_resampling_fails(self, mocker):
        formula = gen_random_alpha_formula(3000, 12, 1, 5, seed=1)
        mocker.patch(
            "src.solver.moser_tardos",
            return_value=mocker.Mock(success=False, resamples=9),
        )
        with pytest.raises(SolverAnomalyError, match="9 resamples"):
            solve_alpha_intersecting(formula, 1)

    def test_lifted_assignment_sets_dropped_variables_false(self):
        formula = CnfFormula(6, (Clause(tuple((v, True) for v in range(5))),))
        result = solve_alpha_intersecting(formula, 1, seed=3)
        assert result.solved
        # variable 5 never appears and variable 0 is deleted by shrinking
        assert result.assignment.bits[5] is False
        assert result.assignment.bits[0] is False


class TestHighDegreeWitness:
    def test_implied_minimums(self):
        witness = HighDegreeWitness(d=9, variables_at_least_d=4, alpha=2, k=3)
        minimums = witness.implied_minimums()
        assert minimums["n"] == pytest.approx(3.0)
        assert minimums["m"] == pytest.approx(9.0)
        assert minimums["i"] == pytest.approx(8 ** 2.5 / 4)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(100))
def test_degree_bounded_7_cnf_is_solved(seed):
    """Clause degree <= floor(2^7 / e) = 47 always resamples to a model"""
    formula = gen_degree_bounded_formula(200, 7, math.floor(2 ** 7 / math.e), 100, seed=seed)
    result = moser_tardos(formula, seed=seed, max_resamples=1000 * formula.m)
    assert result.success
    assert verify_assignment(formula, result.assignment)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(100))
def test_linear_12_cnf_below_clause_threshold(seed):
    """300 clauses is below the clause threshold for k=12, alpha=1"""
    formula = gen_random_alpha_formula(3000, 12, 1, 300, seed=seed)
    result = solve_alpha_intersecting(formula, 1, seed=seed)
    assert result.solved
    assert verify_assignment(formula, result.assignment)


@pytest.mark.parametrize("seed", range(20))
def test_linear_10_cnf_below_variable_threshold(seed):
    """18 variables is below the variable threshold for k=10, alpha=1"""
    # two 10-subsets of 18 variables share at least 2, so a linear formula has one clause
    formula = gen_random_alpha_formula(18, 10, 1, 1, seed=seed)
    result = solve_alpha_intersecting(formula, 1, seed=seed)
    assert result.solved
    assert verify_assignment(formula, result.assignment)


@pytest.mark.parametrize(
    "n,k,alpha,m,reason",
    [
        (3000, 12, 1, 5, "clauses"),
        (3000, 12, 1, 300, "clauses"),
        (18, 10, 1, 1, "variables"),
        (400, 14, 2, 40, "clauses"),
    ],
)
@pytest.mark.parametrize("seed", range(5))
def test_guaranteed_formulas_are_solved(n, k, alpha, m, reason, seed):
    """Any formula below a lower threshold passes the degree gate and resamples to a model"""
    formula = gen_random_alpha_formula(n, k, alpha, m, seed=seed)
    check = guarantee_check(metrics(formula), k, alpha)
    assert reason in check.guaranteed_by

    result = solve_alpha_intersecting(formula, alpha, seed=seed)
    assert result.solved
    assert result.condition.passes
    assert verify_assignment(formula, result.assignment)
