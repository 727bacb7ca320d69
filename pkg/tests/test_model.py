import math

import numpy as np
import pytest

from sgprelax.corpus import builtin_corpus, get_entry, load_bound_overrides, load_source
from sgprelax.exceptions import (
    DuplicateVariable,
    MissingVariable,
    NonPositiveBound,
    NonPositivePoint,
    SgpRelaxError,
    SgpSyntaxError,
    UndeclaredVariable,
)
from sgprelax.model import Interval, Monomial, Signomial, check_feasible, evaluate, serialize
from sgprelax.parser import parse_problem


def test_parse_p1(p1):
    assert p1.name == "P1"
    assert p1.var_names == ["x1", "x2"]
    assert p1.bounds == [Interval(1.0, 10.0), Interval(1.0, 10.0)]
    assert len(p1.objective) == 3
    assert len(p1.constraints) == 1
    assert p1.constraints[0].label == "c1"


def test_parse_negative_and_fractional_exponents():
    p = parse_problem(
        "problem t\nvar a in [1, 2]\nvar b in [1, 2]\nminimize 0.4*a^0.67*b^(-0.67) + 3\n"
    )
    term = [t for t in p.objective.terms if not t.is_constant][0]
    assert term.coef == pytest.approx(0.4)
    assert term.exps == {0: 0.67, 1: -0.67}


def test_parse_ge_constraint_is_flipped():
    p = parse_problem("var x in [1, 5]\nminimize x\nsubject to\n  low: x >= 2\n")
    c = p.constraints[0]
    assert c.label == "low"
    assert c.violation([1.0]) == pytest.approx(1.0)
    assert c.violation([3.0]) == 0.0


def test_like_terms_merge_and_cancel():
    p = parse_problem("var x in [1, 5]\nminimize 2*x + 3*x - 5*x + x^2\n")
    assert len(p.objective) == 1
    assert p.objective.terms[0].exps == {0: 2.0}


def test_syntax_error_reports_line():
    with pytest.raises(SgpSyntaxError) as info:
        parse_problem("problem bad\nvar x in [1, 2]\nminimize x *\n")
    assert info.value.line == 3


def test_syntax_error_reports_column():
    with pytest.raises(SgpSyntaxError) as info:
        parse_problem("var x in [1, 2]\nminimize x + @\n")
    assert (info.value.line, info.value.column) == (2, 14)


def test_coefficient_written_against_factor():
    p = parse_problem("var x in [1, 2]\nminimize 2.5x^2\n")
    assert p.objective.terms[0].coef == pytest.approx(2.5)
    assert p.objective.terms[0].exps == {0: 2.0}


def test_unlabeled_constraints_are_numbered():
    p = parse_problem("var x in [1, 5]\nmin x\nsubject to\n  x <= 4\n  named: x >= 2\n  x^2 <= 20\n")
    assert [c.label for c in p.constraints] == ["c1", "named", "c3"]


@pytest.mark.parametrize(
    "text",
    [
        "var x in [1, 5]\nminimize x\nx <= 4\n",
        "var x in [1, 5]\nminimize x\nminimize x^2\n",
        "var x in [1, 5]\nminimize x\nsubject to\nvar y in [1, 2]\n",
    ],
)
def test_statement_order_is_enforced(text):
    with pytest.raises(SgpSyntaxError):
        parse_problem(text)


def test_missing_objective():
    with pytest.raises(SgpSyntaxError):
        parse_problem("var x in [1, 2]\n")


def test_undeclared_variable():
    with pytest.raises(UndeclaredVariable):
        parse_problem("var x in [1, 2]\nminimize x + y\n")


def test_duplicate_variable():
    with pytest.raises(DuplicateVariable):
        parse_problem("var x in [1, 2]\nvar x in [1, 3]\nminimize x\n")


@pytest.mark.parametrize("box", ["[0, 2]", "[-1, 2]", "[3, 2]"])
def test_bad_bounds(box):
    with pytest.raises(NonPositiveBound):
        parse_problem(f"var x in {box}\nminimize x\n")


def test_comments_and_blank_lines():
    p = parse_problem("# header\n\nvar x in [1, 2]  # box\nminimize x\n")
    assert p.n_vars == 1


def test_monomial_rejects_zero_coefficient():
    with pytest.raises(ValueError):
        Monomial(0.0)


def test_evaluate_signed_sum(p1):
    assert evaluate(p1.objective, [1.0, 1.0]) == pytest.approx(7.5)
    assert evaluate(p1.objective, {0: 2.0, 1: 1.0}) == pytest.approx(24 + 4 - 5)
    assert evaluate(p1.objective, {"x1": 2.0, "x2": 1.0}, p1.var_names) == pytest.approx(24 + 4 - 5)


def test_evaluate_rejects_bad_points(p1):
    with pytest.raises(NonPositivePoint):
        evaluate(p1.objective, [0.0, 1.0])
    with pytest.raises(MissingVariable):
        evaluate(p1.objective, {0: 1.0})
    with pytest.raises(MissingVariable):
        evaluate(p1.objective, {"x1": 1.0, "x2": 1.0})
    with pytest.raises(MissingVariable):
        evaluate(p1.objective, {"x1": 1.0}, p1.var_names)


def test_check_feasible_at_reported_optimum():
    entry = get_entry("P1")
    report = check_feasible(entry.problem, entry.optimal_point, tol=1e-3)
    assert report.feasible
    value = entry.problem.objective.value(entry.optimal_point)
    assert value == pytest.approx(entry.known_optimum, rel=1e-3)


def test_check_feasible_reports_violations(p1):
    report = check_feasible(p1, [1.0, 1.0])
    assert not report.feasible
    assert report.constraint_violations["c1"] == pytest.approx(7.0)
    assert report.bound_violations == {"x1": 0.0, "x2": 0.0}
    report = check_feasible(p1, {"x1": 20.0, "x2": 1.0})
    assert report.bound_violations["x1"] == pytest.approx(10.0)


@pytest.mark.parametrize("entry", builtin_corpus(), ids=lambda e: e.name)
def test_serialize_parses_back(entry):
    again = parse_problem(serialize(entry.problem))
    assert again == entry.problem


def test_signomial_vectorized_values(p1, rng):
    points = rng.uniform(1.0, 10.0, size=(20, 2))
    expected = [p1.objective.value(x) for x in points]
    np.testing.assert_allclose(p1.objective.values(points), expected, rtol=1e-12)


def test_signomial_constant_and_posynomial():
    assert len(Signomial.constant(0.0)) == 0
    assert Signomial.constant(2.0).is_posynomial
    assert Monomial(3.0, ((0, 2.0),)).log_value([math.log(2.0)]) == pytest.approx(math.log(12.0))


def test_corpus_has_eight_instances():
    names = [e.name for e in builtin_corpus()]
    assert names == [f"P{k}" for k in range(1, 9)]


def test_load_source_builtin_and_file(tmp_path):
    problem, entry = load_source("builtin:p8")
    assert entry.name == "P8"
    path = tmp_path / "p.sgp"
    path.write_text(serialize(problem))
    again, none = load_source(str(path))
    assert none is None
    assert again == problem


def test_unknown_builtin():
    with pytest.raises(SgpRelaxError):
        load_source("builtin:P99")


def test_bound_overrides(tmp_path):
    assert load_bound_overrides(None) == {}
    assert load_bound_overrides("P1paper")["x3"] == Interval(7.5, 750.0)
    assert load_bound_overrides("P1published") == load_bound_overrides("P1paper")
    path = tmp_path / "bounds.csv"
    path.write_text("name,lo,hi\nx1,1,5\n")
    assert load_bound_overrides(str(path)) == {"x1": Interval(1.0, 5.0)}
    with pytest.raises(SgpRelaxError):
        load_bound_overrides(str(tmp_path / "missing.csv"))
