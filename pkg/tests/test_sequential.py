import math

import numpy as np
import pytest

from sgprelax.exceptions import SubproblemFailed
from sgprelax.model import check_feasible
from sgprelax.parser import parse_problem
from sgprelax.reformulate import concise
from sgprelax.relax import build_secpr, relaxation_counts
from sgprelax.schemas import ObjectiveMode, RowKind, SeqSettings, SeqStatus
from sgprelax.sequential import (
    TRACE_COLUMNS,
    affine_estimator,
    build_subproblem,
    clamp_center,
    run,
    trace_frame,
    write_trace_csv,
)
from sgprelax.solver import solve


def test_affine_estimator_at_zero():
    assert affine_estimator(0.0) == (1.0, 1.0)
    value, slope = affine_estimator(1.0)
    assert value == slope == pytest.approx(math.e)


def test_clamp_center():
    assert clamp_center(1000.0) == 700.0
    assert clamp_center(-1000.0) == -700.0
    assert clamp_center(3.5) == 3.5
    with pytest.raises(ValueError):
        clamp_center(float("nan"))
    with pytest.raises(ValueError):
        affine_estimator(float("inf"))


def test_subproblem_adds_one_tangent_per_pair(p8):
    cs = concise(p8, mode=ObjectiveMode.AUTO)
    init = build_secpr(cs)
    primal = solve(init.problem).x
    vmap = init.map
    x_tilde = primal[list(vmap.x_tilde)]
    gamma_tilde = primal[[vmap.gamma_tilde[key] for key in sorted(vmap.gamma_tilde)]]
    artifact = build_subproblem(cs, x_tilde, gamma_tilde)
    kinds = np.array(artifact.problem.row_kinds, dtype=object)
    tangent_rows = np.flatnonzero(kinds == RowKind.TANGENT)
    # every P8 cost is positive, so only the gamma pairs bind from above
    assert len(tangent_rows) == len(vmap.gamma) == 2
    assert len(artifact.map.penalty) == len(tangent_rows)
    assert relaxation_counts(artifact)[2] == relaxation_counts(init)[2] - len(vmap.gamma)

    # zero slack at the center puts the point on every tangent
    point = np.zeros(artifact.problem.n_vars)
    for key, c in zip(sorted(vmap.gamma_tilde), gamma_tilde):
        point[artifact.map.gamma[key]] = math.exp(c)
        point[artifact.map.gamma_tilde[key]] = c
    residual = artifact.problem.b[tangent_rows] - artifact.problem.A[tangent_rows] @ point
    np.testing.assert_allclose(residual, 0.0, atol=1e-12 * max(1.0, float(np.max(np.exp(gamma_tilde)))))

    with pytest.raises(ValueError):
        build_subproblem(cs, x_tilde[:1], gamma_tilde)


def test_subproblem_linearizes_x_with_negative_cost():
    p = parse_problem("var x in [1, 4]\nvar y in [1, 4]\nminimize y - x\nsubject to\n  c1: x*y^(-1) <= 1\n")
    cs = concise(p, mode=ObjectiveMode.AUTO)
    assert cs.d[0] < 0
    init = build_secpr(cs)
    artifact = build_subproblem(cs, np.zeros(len(init.map.x)), np.zeros(len(init.map.gamma)))
    assert artifact.problem.row_kinds.count(RowKind.TANGENT) == 1
    assert artifact.map.names[artifact.map.penalty[0]] == "eta[x]"


def test_p8_converges_to_known_optimum(p8):
    result = run(p8)
    assert result.status == SeqStatus.CONVERGED
    assert result.feasible
    assert result.objective == pytest.approx(2.0, abs=1e-6)
    np.testing.assert_allclose(result.x, [1.0, 0.5, 0.5], atol=1e-4)
    assert check_feasible(p8, result.x, 1e-6).feasible
    assert result.trace.records[-1].penalty <= 1e-6
    assert 1 <= result.iterations <= 10
    assert result.iterations == len(result.trace.records) - 1


def test_gp_converges_in_one_iteration(gp_problem):
    result = run(gp_problem)
    assert result.status == SeqStatus.CONVERGED
    assert result.iterations == 1
    assert result.objective == pytest.approx(2.0, abs=1e-6)
    assert result.trace.records[-1].penalty == 0.0


def test_penalty_above_tolerance_blocks_convergence(p8):
    # weights below the constraint multiplier (1) keep slack in the optimum
    result = run(p8, SeqSettings(w=1e-3, w_prime=1e-3, max_iters=4))
    assert result.status == SeqStatus.MAX_ITERS
    assert result.iterations == 4
    assert result.trace.records[-1].penalty > 1e-6


@pytest.mark.slow
def test_p1_converges_to_known_optimum(p1):
    result = run(p1)
    assert result.status == SeqStatus.CONVERGED
    assert result.objective == pytest.approx(58.38488, rel=1e-3)


def test_iteration_cap(p8):
    result = run(p8, SeqSettings(eps=1e-30, max_iters=1))
    assert result.status == SeqStatus.MAX_ITERS
    assert result.iterations == 1


def test_trace_frame_and_csv(p8, tmp_path):
    result = run(p8, SeqSettings(max_iters=3))
    frame = trace_frame(result.trace)
    assert list(frame.columns) == TRACE_COLUMNS
    assert frame["iter"].tolist() == list(range(len(frame)))
    path = tmp_path / "trace.csv"
    write_trace_csv(result.trace, str(path))
    assert path.read_text().splitlines()[0] == ",".join(TRACE_COLUMNS)


def test_infeasible_relaxation_raises_with_trace():
    p = parse_problem("var x in [1, 2]\nminimize x\nsubject to\n  c1: x^(-1) <= 0.1\n")
    with pytest.raises(SubproblemFailed) as info:
        run(p)
    assert info.value.trace.status == SeqStatus.SUBPROBLEM_FAILED
    assert info.value.trace.records == []
