"""
Hard-coded relaxations of P1 with known optimal values

Two encode the exponential-conic relaxations of P1 row by row; three are
the comparator relaxations written in log variables. They pin the conic
solver and the relaxation structure to published numbers independently
of the reformulation pipeline.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from sgprelax.conic import ConicBuilder, ConicProblem
from sgprelax.relax import secant_coeffs
from sgprelax.schemas import FixtureResult, RowKind, SolverSettings
from sgprelax.solver import solve

logger = logging.getLogger(__name__)

LOG10 = math.log(10.0)
FIXTURE_RTOL = 1e-3


@dataclass(frozen=True)
class Fixture:
    name: str
    build: Callable[[], ConicProblem]
    expected: float
    offset: float = 0.0
    # objective at the published solution; must equal `expected`, the solver may only do better
    printed: Optional[Callable[[], float]] = None


def _p1_columns(b: ConicBuilder) -> Dict[str, int]:
    cols = {}
    for name in ("x1", "x2", "x3", "x1_tilde", "x2_tilde", "x3_tilde",
                 "lambda11", "lambda12", "gamma13", "gamma14", "gamma21",
                 "gamma13_tilde", "gamma14_tilde", "gamma21_tilde"):
        cols[name] = b.add_var(name, 1.0 if name == "x3" else 0.0)
    return cols


def _p1_ecpr_rows(b: ConicBuilder, v: Dict[str, int]) -> None:
    b.add_le({v["lambda11"]: 6.0, v["lambda12"]: 4.0, v["gamma13"]: -2.5, v["gamma14"]: -1.0},
             0.0, RowKind.BALANCE)
    b.add_le({v["gamma21"]: -1.0}, -8.0, RowKind.BALANCE)
    b.add_exp_epigraph(v["lambda11"], {v["x1_tilde"]: 2.0})
    b.add_exp_epigraph(v["lambda12"], {v["x2_tilde"]: 2.0})
    b.add_le({v["gamma13_tilde"]: 1.0, v["x1_tilde"]: -1.0, v["x2_tilde"]: -1.0}, 0.0, RowKind.LINK)
    b.add_le({v["gamma14_tilde"]: 1.0, v["x3_tilde"]: -1.0}, 0.0, RowKind.LINK)
    b.add_le({v["gamma21_tilde"]: 1.0, v["x1_tilde"]: -1.0, v["x2_tilde"]: -1.0}, 0.0, RowKind.LINK)
    for i in (1, 2, 3):
        b.add_exp_epigraph(v[f"x{i}"], {v[f"x{i}_tilde"]: 1.0})
    for g in ("gamma13", "gamma14", "gamma21"):
        b.add_exp_epigraph(v[g], {v[f"{g}_tilde"]: 1.0})
    for i, (lo, hi) in ((1, (1.0, 10.0)), (2, (1.0, 10.0)), (3, (7.5, 750.0))):
        b.add_bounds(v[f"x{i}"], lo, hi)
        b.add_bounds(v[f"x{i}_tilde"], math.log(lo), math.log(hi))


def p1_ecpr() -> ConicProblem:
    b = ConicBuilder()
    v = _p1_columns(b)
    _p1_ecpr_rows(b, v)
    return b.build()


def p1_secpr() -> ConicProblem:
    b = ConicBuilder()
    v = _p1_columns(b)
    _p1_ecpr_rows(b, v)
    hulls: List[Tuple[str, float, float]] = [
        ("x1", 1.0, 10.0), ("x2", 1.0, 10.0), ("x3", 7.5, 750.0),
        ("gamma13", 1.0, 100.0), ("gamma14", 7.5, 750.0), ("gamma21", 1.0, 100.0),
    ]
    for name, lo, hi in hulls:
        slope, intercept = secant_coeffs(lo, hi)
        b.add_le({v[name]: 1.0, v[f"{name}_tilde"]: -slope}, intercept, RowKind.SECANT)
        b.add_le({v[f"{name}_tilde"]: 1.0}, math.log(hi), RowKind.BOUND)
        b.add_le({v[name]: -1.0}, -lo, RowKind.BOUND)
    return b.build()


def _log_box(b: ConicBuilder, costs: Tuple[float, float]) -> Tuple[int, int]:
    x1 = b.add_var("x1_tilde", costs[0])
    x2 = b.add_var("x2_tilde", costs[1])
    for col in (x1, x2):
        b.add_bounds(col, 0.0, LOG10)
    return x1, x2


def qu() -> ConicProblem:
    b = ConicBuilder()
    x1, x2 = _log_box(b, (1.0235, 5.9967))
    b.add_le({x1: -1.001, x2: -2.995}, -6.0172, RowKind.BALANCE)
    return b.build()


def shen() -> ConicProblem:
    b = ConicBuilder()
    x1, x2 = _log_box(b, (204.227, 118.237))
    b.add_le({x1: -21.4976, x2: -21.4976}, -7.0, RowKind.BALANCE)
    return b.build()


def maranas() -> ConicProblem:
    b = ConicBuilder()
    x1, x2 = _log_box(b, (-53.744, -53.744))
    t1 = b.add_var("t1", 6.0)
    t2 = b.add_var("t2", 4.0)
    b.add_le({x1: -21.4976, x2: -21.4976}, -6.0, RowKind.BALANCE)
    b.add_exp_epigraph(t1, {x1: 2.0})
    b.add_exp_epigraph(t2, {x2: 2.0})
    return b.build()


def _maranas_value(x1: float, x2: float) -> float:
    return 6 * math.exp(2 * x1) + 4 * math.exp(2 * x2) + 5 - 53.744 * (x1 + x2)


FIXTURES: Tuple[Fixture, ...] = (
    Fixture("p1_ecpr", p1_ecpr, 7.4998),
    Fixture("p1_secpr", p1_secpr, 56.7598),
    Fixture("qu", qu, 50.7862, offset=40.997),
    Fixture("shen", shen, 10.2094, offset=-28.290),
    Fixture("maranas", maranas, -31.2595, offset=5.0,
            printed=lambda: _maranas_value(0.9, 1.0)),
)


def _close(value: float, expected: float) -> bool:
    return abs(value - expected) <= FIXTURE_RTOL * abs(expected)


def run_fixture(fixture: Fixture, settings: Optional[SolverSettings] = None) -> FixtureResult:
    result = solve(fixture.build(), settings)
    if not result.status.has_solution:
        return FixtureResult(
            name=fixture.name, expected=fixture.expected, status=result.status.value, passed=False,
            note="solver finished without a solution",
        )
    objective = result.objective + fixture.offset
    note = ""
    if fixture.printed is None:
        passed = _close(objective, fixture.expected)
    else:
        printed = fixture.printed()
        passed = _close(printed, fixture.expected) and objective <= printed + FIXTURE_RTOL * abs(printed)
        note = f"printed solution evaluates to {printed:.4f}; model optimum {objective:.4f}"
    return FixtureResult(
        name=fixture.name, expected=fixture.expected, objective=objective,
        status=result.status.value, passed=passed, note=note,
    )


def run_fixtures(settings: Optional[SolverSettings] = None) -> List[FixtureResult]:
    results = []
    for fixture in FIXTURES:
        outcome = run_fixture(fixture, settings)
        marker = "✅" if outcome.passed else "❌"
        logger.info(f"{marker} {fixture.name}: {outcome.objective} (expected {fixture.expected})")
        results.append(outcome)
    return results
