import math

import numpy as np
import pytest

from sgprelax.bounds import (
    is_bounded,
    monomial_bounds,
    monomial_range,
    posynomial_sum_range,
    refine_range,
    signomial_range,
)
from sgprelax.corpus import get_entry
from sgprelax.model import Interval, Monomial, Signomial
from sgprelax.reformulate import concise
from sgprelax.relax import gamma_name, lambda_name, propagate_bounds
from sgprelax.schemas import ObjectiveMode

BOX = [Interval(1.0, 2.0), Interval(1.0, 4.0)]


def test_monomial_range_uses_exponent_signs():
    m = Monomial(2.0, ((0, 2.0), (1, -1.0)))
    lo, hi = monomial_range(m, BOX)
    assert lo == pytest.approx(0.5)
    assert hi == pytest.approx(8.0)


def test_monomial_range_of_negative_coefficient_is_magnitude():
    lo, hi = monomial_range(Monomial(-3.0, ((0, 1.0),)), BOX)
    assert (lo, hi) == (pytest.approx(3.0), pytest.approx(6.0))


def test_missing_box_gives_none():
    m = Monomial(1.0, ((0, 1.0), (1, 1.0)))
    assert monomial_range(m, [Interval(1.0, 2.0), Interval()]) is None
    assert monomial_bounds(m, [Interval(1.0, 2.0)]) is None


def test_constant_monomial_bounds():
    box = monomial_bounds(Monomial(5.0), BOX)
    assert box == Interval(5.0, 5.0)


def test_signomial_and_posynomial_ranges():
    s = Signomial.of([Monomial(1.0, ((0, 1.0),)), Monomial(-1.0, ((1, 1.0),))])
    assert signomial_range(s, BOX) == (pytest.approx(-3.0), pytest.approx(1.0))
    assert posynomial_sum_range(s.positive_terms, BOX) == (pytest.approx(1.0), pytest.approx(2.0))


def test_is_bounded():
    assert is_bounded(Interval(1.0, 10.0))
    assert not is_bounded(Interval(1.0, None))
    assert not is_bounded(None)
    assert not is_bounded(Interval(1e-9, 1e9))


def test_refine_range_p1_objective(p1):
    lo, hi = refine_range(p1.objective, p1.bounds)
    assert lo == pytest.approx(7.5, rel=1e-4)
    assert hi == pytest.approx(750.0, rel=1e-4)
    natural = signomial_range(p1.objective, p1.bounds)
    assert natural[0] < lo and hi <= natural[1]


@pytest.mark.parametrize("name", ["P1", "P3", "P7"])
def test_refine_range_encloses_samples(name, rng):
    p = get_entry(name).problem
    lo, hi = refine_range(p.objective, p.bounds)
    log_lo = np.log([b.lo for b in p.bounds])
    log_hi = np.log([b.hi for b in p.bounds])
    points = np.exp(rng.uniform(log_lo, log_hi, size=(2000, p.n_vars)))
    values = p.objective.values(points)
    assert values.min() >= lo - 1e-9 * max(1.0, abs(lo))
    assert values.max() <= hi + 1e-9 * max(1.0, abs(hi))


def _log_box(bounds):
    """Log-space box, unbounded ends pinned to 1 so those columns stay at 1"""
    lo = np.array([math.log(b.lo) if b is not None and b.is_finite else 0.0 for b in bounds])
    hi = np.array([math.log(b.hi) if b is not None and b.is_finite else 0.0 for b in bounds])
    return lo, hi


@pytest.mark.parametrize("name", ["P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8"])
def test_propagated_bounds_enclose_monomial_values(name, rng):
    cs = concise(get_entry(name).problem, mode=ObjectiveMode.AUTO)
    derived = propagate_bounds(cs)
    lo, hi = _log_box(cs.bounds)
    log_points = rng.uniform(lo, hi, size=(1000, cs.n_vars))
    checked = 0
    for con in cs.constraints:
        sides = [(lambda_name, con.pos_terms), (gamma_name, con.neg_terms)]
        for naming, terms in sides:
            for j, t in enumerate(terms):
                box = derived.get(naming(con.label, j))
                if t.is_constant or box is None:
                    continue
                exponents = np.zeros(cs.n_vars)
                for i, a in t.exponents:
                    exponents[i] = a
                values = np.exp(log_points @ exponents)
                assert values.min() >= box.lo * (1 - 1e-12)
                assert values.max() <= box.hi * (1 + 1e-12)
                checked += 1
    assert checked > 0
