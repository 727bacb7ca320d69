import warnings

import numpy as np
import pytest

from sgprelax.corpus import get_entry
from sgprelax.exceptions import InfeasibleConstant
from sgprelax.model import check_feasible
from sgprelax.parser import parse_problem
from sgprelax.reformulate import (
    concise,
    lift_variables,
    resolve_mode,
    serialize_concise,
    split_posynomials,
    transfer_objective,
)
from sgprelax.schemas import ObjectiveMode


def test_p1_single_aux(p1):
    cs = concise(p1, mode=ObjectiveMode.AUTO)
    assert cs.mode == ObjectiveMode.SINGLE_AUX
    assert cs.names == ("x1", "x2", "x3")
    assert cs.d == (0.0, 0.0, 1.0)
    assert cs.bounds[2].lo == pytest.approx(7.5, rel=1e-4)
    assert cs.bounds[2].hi == pytest.approx(750.0, rel=1e-4)
    objective = cs.constraints[0]
    assert [t.coef for t in objective.pos_terms] == [6.0, 4.0]
    assert sorted(t.coef for t in objective.neg_terms) == [1.0, 2.5]
    c1 = cs.constraints[1]
    assert c1.pos_constant == 8.0
    assert [t.exps for t in c1.neg_terms] == [{0: 1.0, 1: 1.0}]


def test_single_aux_flag_matches_mode(p1):
    assert concise(p1, single_aux=True).mode == ObjectiveMode.SINGLE_AUX
    assert concise(p1).mode == ObjectiveMode.GENERAL


def test_p8_linear(p8):
    cs = concise(p8, mode=ObjectiveMode.AUTO)
    assert cs.mode == ObjectiveMode.LINEAR
    assert cs.n_vars == 3
    assert cs.d == (1.0, 1.0, 1.0)
    assert cs.offset == 0.0


def test_linear_objective_constant_goes_to_offset():
    p = parse_problem("var x in [1, 2]\nminimize 3*x + 4\nsubject to\n  c1: x^(-1) <= 1\n")
    cs = concise(p, mode=ObjectiveMode.AUTO)
    assert cs.mode == ObjectiveMode.LINEAR
    assert cs.offset == 4.0
    assert cs.objective_value([1.5]) == pytest.approx(8.5)


def test_p7_general():
    p7 = get_entry("P7").problem
    assert resolve_mode(p7, ObjectiveMode.AUTO) == ObjectiveMode.GENERAL
    cs = concise(p7, mode=ObjectiveMode.AUTO)
    assert cs.n_vars == 5
    assert cs.d == (0.0, 0.0, 0.0, 1.0, -1.0)
    assert cs.aux_shift == 0.0


def test_general_with_one_sided_objective_shifts_aux():
    p = parse_problem("var x in [1, 2]\nminimize x^2\n")
    cs = concise(p, mode=ObjectiveMode.GENERAL)
    assert cs.aux_shift == 1.0
    assert cs.bounds[2].lo == pytest.approx(1.0)
    assert cs.bounds[2].hi == pytest.approx(1.0)
    lifted = lift_variables(cs, [1.5])
    np.testing.assert_allclose(lifted, [1.5, 2.25 + 1.0, 1.0])
    assert cs.objective_value(lifted) == pytest.approx(2.25)


def test_lift_variables_preserves_objective(p1):
    cs = concise(p1, mode=ObjectiveMode.AUTO)
    x = [2.0, 4.0]
    lifted = lift_variables(cs, x)
    assert cs.objective_value(lifted) == pytest.approx(p1.objective.value(x))
    assert all(c.slack(lifted) >= -1e-12 for c in cs.constraints)


def test_concise_coefficients_positive():
    for name in ("P2", "P3", "P4", "P6"):
        cs = concise(get_entry(name).problem, mode=ObjectiveMode.AUTO)
        for c in cs.constraints:
            assert all(t.coef > 0 for t in c.pos_terms + c.neg_terms)


def test_infeasible_constant():
    p = parse_problem("var x in [1, 2]\nminimize x\nsubject to\n  c1: x <= -1\n")
    with pytest.raises(InfeasibleConstant):
        concise(p)


def test_vacuous_constraint_dropped_with_warning():
    p = parse_problem("var x in [1, 2]\nminimize x\nsubject to\n  c1: -x <= 1\n")
    with pytest.warns(UserWarning, match="dropped"):
        cs = concise(p, mode=ObjectiveMode.LINEAR)
    assert cs.constraints == ()


def test_serialize_concise_is_parseable(p1):
    cs = concise(p1, mode=ObjectiveMode.AUTO)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        again = parse_problem(serialize_concise(cs))
    assert again.var_names == ["x1", "x2", "x3"]
    assert len(again.constraints) == 2


def test_concise_composes_transfer_and_split(p1):
    transferred = transfer_objective(p1, ObjectiveMode.GENERAL)
    assert transferred.problem.n_vars == 4
    assert transferred.problem.constraints[0].label == "objective"
    assert transferred.d == (0.0, 0.0, 1.0, -1.0)
    composed = split_posynomials(transferred, p1)
    assert composed == concise(p1)


@pytest.mark.parametrize("name", ["P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8"])
def test_lifted_objective_matches_on_random_points(name, rng):
    problem = get_entry(name).problem
    cs = concise(problem, mode=ObjectiveMode.AUTO)
    lo = np.log([box.lo for box in problem.bounds])
    hi = np.log([box.hi for box in problem.bounds])
    for x in np.exp(rng.uniform(lo, hi, size=(100, problem.n_vars))):
        lifted = lift_variables(cs, x)
        expected = problem.objective.value(x)
        assert cs.objective_value(lifted) == pytest.approx(expected, rel=1e-9, abs=1e-9)
        if check_feasible(problem, x, 1e-9).feasible:
            for c in cs.constraints:
                scale = sum(t.value(lifted) for t in c.pos_terms + c.neg_terms)
                assert c.slack(lifted) >= -1e-9 * scale
