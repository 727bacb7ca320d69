import numpy as np
import pytest

from sgprelax.cones import in_exp_cone
from sgprelax.corpus import get_entry
from sgprelax.model import check_feasible
from sgprelax.parser import parse_problem
from sgprelax.schemas import ConeKind, SolverSettings


@pytest.fixture
def p1():
    return get_entry("P1").problem


@pytest.fixture
def p8():
    return get_entry("P8").problem


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def settings():
    return SolverSettings()


@pytest.fixture
def gp_problem():
    """Pure GP: its exponential-conic relaxation is exact"""
    return parse_problem(
        """\
problem gp
var x in [0.5, 4]
var y in [0.5, 4]
minimize x + y
subject to
  c1: x^(-1)*y^(-1) <= 1
"""
    )


def sample_feasible(problem, rng, count, max_draws=200000):
    """Uniform log-box samples that satisfy every constraint"""
    lo = np.log([box.lo for box in problem.bounds])
    hi = np.log([box.hi for box in problem.bounds])
    points = []
    for _ in range(max_draws):
        x = np.exp(rng.uniform(lo, hi))
        if check_feasible(problem, x, 1e-12).feasible:
            points.append(x)
            if len(points) == count:
                break
    return points


def conic_feasible(problem, v, tol=1e-7):
    """A v + s = b with s in the cones, up to tol"""
    s = problem.b - problem.A @ v
    r = 0
    for cone in problem.cones:
        block = s[r:r + cone.dim]
        if cone.kind == ConeKind.ZERO and np.max(np.abs(block)) > tol:
            return False
        if cone.kind == ConeKind.NONNEG and np.min(block) < -tol:
            return False
        if cone.kind == ConeKind.EXP and not in_exp_cone(block, tol=tol):
            return False
        r += cone.dim
    return True
