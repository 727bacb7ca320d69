import itertools
import math

import numpy as np
import pytest

from conftest import conic_feasible, sample_feasible
from sgprelax.corpus import get_entry
from sgprelax.exceptions import BadStatus, DegenerateInterval, InfeasibleInput
from sgprelax.fixtures import FIXTURES, run_fixture
from sgprelax.model import Interval
from sgprelax.parser import parse_problem
from sgprelax.reformulate import concise
from sgprelax.relax import (
    RelaxOptions,
    build_ecpr,
    build_relaxation,
    build_secpr,
    forced_fixings,
    hull_gamma_cuts,
    hull_x_cuts,
    lift_point,
    monomial_lb_cuts,
    monomial_ub_cuts,
    propagate_bounds,
    recover,
    relaxation_counts,
    secant_coeffs,
)
from sgprelax.schemas import CutFamily, ObjectiveMode, RelaxLevel, RowKind, SolveStatus
from sgprelax.solver import solve

EXPECTED_COUNTS = {
    "P1": ((14, 5, 8), (14, 11, 8)),
    "P2": ((19, 5, 13), (19, 11, 13)),
    "P3": ((40, 8, 27), (40, 21, 27)),
    "P5": ((18, 3, 13), (18, 8, 13)),
    "P6": ((43, 16, 28), (43, 31, 28)),
    "P7": ((21, 5, 13), (21, 13, 13)),
}


def _concise(name):
    return concise(get_entry(name).problem, mode=ObjectiveMode.AUTO)


@pytest.mark.parametrize("name", sorted(EXPECTED_COUNTS))
def test_structural_counts(name):
    cs = _concise(name)
    ecpr, secpr = EXPECTED_COUNTS[name]
    assert relaxation_counts(build_ecpr(cs)) == ecpr
    assert relaxation_counts(build_secpr(cs)) == secpr


def test_p1_layout_and_names():
    artifact = build_ecpr(_concise("P1"))
    names = artifact.map.names
    assert names[:6] == ("x1", "x2", "x3", "x1_tilde", "x2_tilde", "x3_tilde")
    assert "lambda[objective:0]" in names
    assert "gamma[c1:0]_tilde" in names
    assert artifact.level == RelaxLevel.ECPR
    assert artifact.cuts_applied == frozenset()


def test_default_cuts_applied():
    artifact = build_secpr(_concise("P1"))
    assert artifact.cuts_applied == frozenset({CutFamily.VAR_HULL, CutFamily.GAMMA_HULL})
    kinds = artifact.problem.row_kinds
    assert kinds.count(RowKind.SECANT) == 6


def test_reuse_linear_drops_degree_one_columns():
    cs = _concise("P1")
    plain = build_ecpr(cs)
    reused = build_ecpr(cs, RelaxOptions(reuse_linear=True))
    assert reused.problem.n_vars == plain.problem.n_vars - 2
    assert reused.problem.n_exp_cones == plain.problem.n_exp_cones - 1


def test_propagated_gamma_bounds():
    derived = propagate_bounds(_concise("P1"))
    for name in ("gamma[c1:0]", "lambda[objective:0]"):
        assert derived[name].lo == pytest.approx(1.0)
        assert derived[name].hi == pytest.approx(100.0)


def test_secant_coefficients():
    slope, intercept = secant_coeffs(1.0, math.e)
    assert slope == pytest.approx(math.e - 1.0)
    assert intercept == pytest.approx(1.0)


@pytest.mark.parametrize("lo,hi", [(2.0, 2.0), (0.0, 1.0), (1.0, 1.0 + 1e-14)])
def test_secant_degenerate(lo, hi):
    with pytest.raises(DegenerateInterval):
        secant_coeffs(lo, hi)


@pytest.mark.parametrize("lo,hi", [(1.0, 10.0), (0.1, 10.0), (7.5, 750.0), (1e-3, 1e3)])
def test_secant_overestimates_exp_on_interval(lo, hi):
    slope, intercept = secant_coeffs(lo, hi)
    z = np.linspace(math.log(lo), math.log(hi), 401)
    chord = slope * z + intercept
    assert np.all(np.exp(z) <= chord * (1 + 1e-12) + 1e-12)
    assert chord[0] == pytest.approx(lo)
    assert chord[-1] == pytest.approx(hi)


def _satisfies(rows, point):
    return all(sum(c * point[k] for k, c in row.coeffs.items()) <= row.rhs + 1e-9 for row in rows)


def test_hull_rows_contain_graph_and_cut_outside():
    artifact = build_ecpr(_concise("P1"))
    vmap = artifact.map
    box = Interval(1.0, 10.0)
    rows = hull_x_cuts(vmap, [box])
    assert [r.kind for r in rows] == [RowKind.SECANT, RowKind.BOUND, RowKind.BOUND]
    point = np.zeros(vmap.n_cols)
    for z in np.linspace(0.0, math.log(10.0), 11):
        point[vmap.x[0]], point[vmap.x_tilde[0]] = math.exp(z), z
        assert _satisfies(rows, point)
    point[vmap.x[0]], point[vmap.x_tilde[0]] = 10.0, 0.0
    assert not _satisfies(rows, point)


@pytest.mark.parametrize("lo,hi", [(1.0, 10.0), (0.5, 4.0), (7.5, 750.0)])
def test_hull_rows_are_tight_on_the_graph(lo, hi):
    artifact = build_ecpr(_concise("P1"))
    vmap = artifact.map
    secant, upper, lower = hull_x_cuts(vmap, [Interval(lo, hi)])

    def residual(row, x, z):
        point = np.zeros(vmap.n_cols)
        point[vmap.x[0]], point[vmap.x_tilde[0]] = x, z
        return row.rhs - sum(c * point[k] for k, c in row.coeffs.items())

    # each row touches the graph, so none can be tightened
    assert residual(secant, lo, math.log(lo)) == pytest.approx(0.0, abs=1e-9 * hi)
    assert residual(secant, hi, math.log(hi)) == pytest.approx(0.0, abs=1e-9 * hi)
    assert residual(upper, hi, math.log(hi)) == pytest.approx(0.0, abs=1e-12)
    assert residual(lower, lo, math.log(lo)) == pytest.approx(0.0, abs=1e-12)
    # chord points lie in the hull, strictly inside the exp epigraph
    for t in (0.25, 0.5, 0.75):
        x = (1 - t) * lo + t * hi
        z = (1 - t) * math.log(lo) + t * math.log(hi)
        assert math.exp(z) < x
        assert min(residual(row, x, z) for row in (secant, upper, lower)) >= -1e-9 * hi


def test_hull_skips_fixed_and_unbounded():
    artifact = build_ecpr(_concise("P1"))
    assert hull_x_cuts(artifact.map, [Interval(2.0, 2.0), Interval(1.0, None)]) == []


def test_monomial_lb_cut_on_p8():
    cs = _concise("P8")
    assert monomial_lb_cuts(cs, cs.bounds) == []
    p = parse_problem("var x in [1, 4]\nvar y in [1, 4]\nminimize x + y\nsubject to\n  c1: 0.1*x*y <= 1\n")
    cuts = monomial_lb_cuts(concise(p, mode=ObjectiveMode.AUTO), p.bounds)
    assert len(cuts) == 1
    assert cuts[0].lower == pytest.approx(0.1)


def test_all_cut_families_build_and_solve():
    cs = _concise("P5")
    options = RelaxOptions(cuts=frozenset(CutFamily))
    artifact = build_secpr(cs, options)
    result = solve(artifact.problem)
    assert result.status == SolveStatus.OPTIMAL
    default = solve(build_secpr(cs).problem)
    assert result.objective >= default.objective - 1e-6 * (1 + abs(default.objective))


def test_gp_relaxation_is_tight(gp_problem):
    cs = concise(gp_problem, mode=ObjectiveMode.AUTO)
    artifact = build_relaxation(cs, RelaxLevel.ECPR)
    solution = recover(artifact, solve(artifact.problem))
    assert solution.lb == pytest.approx(2.0, abs=1e-6)
    np.testing.assert_allclose(np.exp(solution.x_tilde), [1.0, 1.0], atol=1e-3)


def test_recover_rejects_non_optimal():
    p = parse_problem("var x in [1, 2]\nminimize x\nsubject to\n  c1: x^(-1) <= 0.1\n")
    artifact = build_ecpr(concise(p, mode=ObjectiveMode.AUTO))
    result = solve(artifact.problem)
    assert result.status == SolveStatus.PRIMAL_INFEASIBLE
    with pytest.raises(BadStatus):
        recover(artifact, result)


# P7's data admits points below its reported optimum, so it is left out
LIFT_INSTANCES = [
    "P1",
    "P2",
    pytest.param("P3", marks=pytest.mark.slow),
    pytest.param("P4", marks=pytest.mark.slow),
    "P5",
    "P6",
    "P8",
]


@pytest.mark.parametrize("name", LIFT_INSTANCES)
@pytest.mark.parametrize("level", [RelaxLevel.ECPR, RelaxLevel.SECPR])
def test_lift_point_is_relaxation_feasible(name, level, rng):
    problem = get_entry(name).problem
    artifact = build_relaxation(
        concise(problem, mode=ObjectiveMode.AUTO), level, RelaxOptions(cuts=frozenset(CutFamily))
    )
    points = sample_feasible(problem, rng, 25, max_draws=400000)
    assert points
    for x in points:
        v = lift_point(artifact, x)
        assert conic_feasible(artifact.problem, v)
        objective = float(artifact.problem.c @ v) + artifact.offset
        assert objective == pytest.approx(problem.objective.value(x), rel=1e-9)


def test_lift_point_rejects_infeasible():
    artifact = build_ecpr(_concise("P1"))
    with pytest.raises(InfeasibleInput):
        lift_point(artifact, [1.0, 1.0])
    with pytest.raises(InfeasibleInput):
        lift_point(artifact, [-1.0, 9.0])


@pytest.mark.parametrize("name", ["P1", "P8"])
def test_lower_bound_below_sampled_objective(name, rng):
    problem = get_entry(name).problem
    cs = concise(problem, mode=ObjectiveMode.AUTO)
    artifact = build_secpr(cs)
    lb = recover(artifact, solve(artifact.problem)).lb
    sampled = min(problem.objective.value(x) for x in sample_feasible(problem, rng, 100))
    assert sampled >= lb - 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("name", ["P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8"])
def test_strengthening_is_monotone(name):
    cs = _concise(name)
    ecpr = solve(build_ecpr(cs).problem)
    secpr = solve(build_secpr(cs).problem)
    assert ecpr.status == secpr.status == SolveStatus.OPTIMAL
    assert secpr.objective >= ecpr.objective - 1e-6 * (1 + abs(ecpr.objective))


def _cut_subsets():
    families = sorted(CutFamily)
    for size in range(len(families) + 1):
        yield from (frozenset(s) for s in itertools.combinations(families, size))


@pytest.mark.parametrize("name", ["P1", "P2", "P5"])
def test_strengthening_is_monotone_in_every_cut_subset(name):
    cs = _concise(name)
    bounds = {}
    for cuts in _cut_subsets():
        result = solve(build_secpr(cs, RelaxOptions(cuts=cuts)).problem)
        assert result.status.has_solution
        bounds[cuts] = result.objective
    ecpr = solve(build_ecpr(cs).problem).objective
    for cuts, lb in bounds.items():
        tol = 1e-6 * (1 + abs(lb))
        assert lb >= ecpr - tol
        for family in set(CutFamily) - cuts:
            assert bounds[cuts | {family}] >= lb - tol


def _random_sgp(rng, n_vars, n_cons):
    names = [f"x{i + 1}" for i in range(n_vars)]
    lines = [f"var {v} in [0.5, 4]" for v in names]

    def monomial(sign):
        coef = rng.uniform(0.5, 2.0)
        factors = [f"{v}^({rng.choice([-1.0, 1.0, 2.0, 0.5])})" for v in names if rng.random() < 0.6]
        body = "*".join([f"{coef:.4f}"] + factors)
        return f"{sign} {body}"

    objective = " ".join(monomial(rng.choice(["+", "-"])) for _ in range(3))
    lines.append(f"minimize 0 {objective}")
    lines.append("subject to")
    for k in range(n_cons):
        lhs = " ".join(monomial(rng.choice(["+", "-"])) for _ in range(2))
        lines.append(f"  c{k + 1}: 0 {lhs} <= 20")
    return parse_problem("\n".join(lines) + "\n")


@pytest.mark.slow
def test_strengthening_is_monotone_on_random_problems(rng):
    checked = 0
    for _ in range(50):
        problem = _random_sgp(rng, int(rng.integers(2, 6)), int(rng.integers(1, 5)))
        cs = concise(problem, mode=ObjectiveMode.AUTO)
        ecpr = solve(build_ecpr(cs).problem)
        secpr = solve(build_secpr(cs).problem)
        if ecpr.status != SolveStatus.OPTIMAL:
            continue
        if secpr.status == SolveStatus.PRIMAL_INFEASIBLE:
            checked += 1
            continue
        assert secpr.status == SolveStatus.OPTIMAL
        assert secpr.objective >= ecpr.objective - 1e-6 * (1 + abs(ecpr.objective))
        checked += 1
    assert checked >= 10


@pytest.mark.parametrize("fixture", FIXTURES, ids=lambda f: f.name)
def test_fixture_values(fixture):
    outcome = run_fixture(fixture)
    assert outcome.status == SolveStatus.OPTIMAL.value
    assert outcome.passed, outcome.note


def test_gamma_hull_rows_per_bounded_gamma():
    cs = _concise("P1")
    artifact = build_ecpr(cs)
    rows = hull_gamma_cuts(artifact.map, propagate_bounds(cs))
    assert [r.kind for r in rows].count(RowKind.SECANT) == len(artifact.map.gamma)
    assert len(rows) == 3 * len(artifact.map.gamma)


def test_monomial_ub_caps_and_aggregate():
    cs = _concise("P1")
    artifact = build_ecpr(cs)
    rows = monomial_ub_cuts(cs, artifact.map, propagate_bounds(cs))
    kinds = [r.kind for r in rows]
    assert kinds.count(RowKind.AGGREGATE) == 1
    assert kinds.count(RowKind.BOUND) == len(artifact.map.gamma)


def test_monomial_ub_skips_constant_only_neg_side():
    p = parse_problem("var x1 in [0.1, 1]\nvar x2 in [0.1, 1]\nminimize x1^(-1) + x2^(-1)\nsubject to\n  c1: x1 + x2 <= 1\n")
    cs = concise(p, mode=ObjectiveMode.AUTO)
    artifact = build_ecpr(cs)
    assert monomial_ub_cuts(cs, artifact.map, propagate_bounds(cs)) == []


def test_constraint_at_box_minimum_fixes_variables():
    p = parse_problem("var x in [1, 4]\nvar y in [1, 4]\nminimize x + y\nsubject to\n  c1: x*y <= 1\n")
    cs = concise(p, mode=ObjectiveMode.AUTO)
    assert monomial_lb_cuts(cs, cs.bounds) == []
    assert forced_fixings(cs) == {"x": Interval(1.0, 1.0), "y": Interval(1.0, 1.0)}
    artifact = build_secpr(cs, RelaxOptions(cuts=frozenset({CutFamily.MONOMIAL_LB})))
    assert artifact.concise.bounds[0].is_fixed and artifact.concise.bounds[1].is_fixed
    result = solve(artifact.problem)
    assert result.status == SolveStatus.OPTIMAL
    assert result.objective + artifact.offset == pytest.approx(2.0, abs=1e-6)
    # ECPR ignores cut families, so nothing is fixed there
    assert not build_ecpr(cs, RelaxOptions(cuts=frozenset(CutFamily))).concise.bounds[0].is_fixed


def test_constraint_above_one_on_box_is_not_fixed():
    p = parse_problem("var x in [2, 4]\nvar y in [2, 4]\nminimize x + y\nsubject to\n  c1: x*y <= 1\n")
    assert forced_fixings(concise(p, mode=ObjectiveMode.AUTO)) == {}
