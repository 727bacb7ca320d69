"""
Interval arithmetic over positive boxes

Monomials are monotone in every variable, so their exact range over a box
is read off the corners selected by exponent signs. Signomials get the
natural interval extension, optionally tightened by a best-first
branch and bound.
"""
import heapq
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from sgprelax.config import BOUNDED_RATIO
from sgprelax.model import Interval, Monomial, Signomial

logger = logging.getLogger(__name__)

Range = Tuple[float, float]


def is_bounded(box: Optional[Interval]) -> bool:
    """Finite box usable by secant cuts"""
    return (
        box is not None
        and box.is_finite
        and box.lo > 0
        and box.hi / box.lo <= BOUNDED_RATIO
    )


def monomial_range(m: Monomial, bounds: Sequence[Optional[Interval]]) -> Optional[Range]:
    """Range of |c| * prod x^a over the box, None when a needed end is missing"""
    log_lo = math.log(abs(m.coef))
    log_hi = log_lo
    for i, a in m.exponents:
        box = bounds[i] if i < len(bounds) else None
        if box is None or not box.is_finite:
            return None
        lo_end, hi_end = (box.lo, box.hi) if a > 0 else (box.hi, box.lo)
        log_lo += a * math.log(lo_end)
        log_hi += a * math.log(hi_end)
    return math.exp(log_lo), math.exp(log_hi)


def monomial_bounds(m: Monomial, bounds: Sequence[Optional[Interval]]) -> Optional[Interval]:
    """monomial_range as an Interval; constants give [c, c]"""
    rng = monomial_range(m, bounds)
    if rng is None:
        return None
    return Interval(rng[0], max(rng))


def signomial_range(s: Signomial, bounds: Sequence[Optional[Interval]]) -> Optional[Range]:
    """Natural interval extension: sum of per-monomial ranges with signs"""
    lo = hi = 0.0
    for term in s.terms:
        rng = monomial_range(term, bounds)
        if rng is None:
            return None
        if term.coef > 0:
            lo += rng[0]
            hi += rng[1]
        else:
            lo -= rng[1]
            hi -= rng[0]
    return lo, hi


def posynomial_sum_range(
    terms: Sequence[Monomial], bounds: Sequence[Optional[Interval]]
) -> Optional[Range]:
    """Range of a sum of positive monomials"""
    lo = hi = 0.0
    for term in terms:
        rng = monomial_range(term, bounds)
        if rng is None:
            return None
        lo += rng[0]
        hi += rng[1]
    return lo, hi


class _BoxEvaluator:
    """Vectorized interval extension of one signomial in log coordinates"""

    def __init__(self, s: Signomial, variables: Sequence[int]):
        position = {v: k for k, v in enumerate(variables)}
        self.signs = np.array([1.0 if t.coef > 0 else -1.0 for t in s.terms])
        self.log_coef = np.array([math.log(abs(t.coef)) for t in s.terms])
        self.coef = np.array([t.coef for t in s.terms])
        A = np.zeros((len(s.terms), len(variables)))
        for r, t in enumerate(s.terms):
            for i, a in t.exponents:
                A[r, position[i]] = a
        self.A = A
        self.A_pos = np.maximum(A, 0.0)
        self.A_neg = np.minimum(A, 0.0)

    def lower(self, L: np.ndarray, U: np.ndarray) -> float:
        m_lo = np.exp(self.log_coef + self.A_pos @ L + self.A_neg @ U)
        m_hi = np.exp(self.log_coef + self.A_pos @ U + self.A_neg @ L)
        return float(np.sum(np.where(self.signs > 0, m_lo, -m_hi)))

    def value(self, log_x: np.ndarray) -> float:
        return float(np.sum(self.coef * np.exp(self.A @ log_x)))


def _min_over_box(
    s: Signomial,
    bounds: Sequence[Optional[Interval]],
    max_boxes: int,
    rtol: float,
) -> Optional[float]:
    """Valid lower bound on min s over the box by best-first branch and bound"""
    variables = s.variables()
    if not variables:
        return s.value([])
    if any(i >= len(bounds) or bounds[i] is None or not bounds[i].is_finite for i in variables):
        return None
    evaluator = _BoxEvaluator(s, variables)
    L0 = np.array([math.log(bounds[i].lo) for i in variables])
    U0 = np.array([math.log(bounds[i].hi) for i in variables])

    incumbent = min(evaluator.value(L0), evaluator.value(U0), evaluator.value((L0 + U0) / 2))
    heap: List[Tuple[float, int, np.ndarray, np.ndarray]] = [(evaluator.lower(L0, U0), 0, L0, U0)]
    counter = 1
    while heap:
        lb, _, L, U = heapq.heappop(heap)
        if incumbent - lb <= rtol * max(1.0, abs(incumbent)) or counter >= max_boxes:
            return min(lb, incumbent)
        k = int(np.argmax(U - L))
        if U[k] - L[k] <= 1e-15:
            return min(lb, incumbent)
        mid = 0.5 * (L[k] + U[k])
        for lo_k, hi_k in ((L[k], mid), (mid, U[k])):
            L2, U2 = L.copy(), U.copy()
            L2[k], U2[k] = lo_k, hi_k
            incumbent = min(incumbent, evaluator.value(0.5 * (L2 + U2)))
            child_lb = evaluator.lower(L2, U2)
            if child_lb <= incumbent:
                heapq.heappush(heap, (child_lb, counter, L2, U2))
            counter += 1
    return incumbent


def refine_range(
    s: Signomial,
    bounds: Sequence[Optional[Interval]],
    max_boxes: int = 4096,
    rtol: float = 1e-5,
) -> Optional[Range]:
    """Enclosure of the range of s over the box, tighter than signomial_range"""
    natural = signomial_range(s, bounds)
    if natural is None:
        return None
    lo = _min_over_box(s, bounds, max_boxes, rtol)
    neg_hi = _min_over_box(-s, bounds, max_boxes, rtol)
    lo = natural[0] if lo is None else max(natural[0], lo)
    hi = natural[1] if neg_hi is None else min(natural[1], -neg_hi)
    logger.debug(f"🔧 Range refined from [{natural[0]:.6g}, {natural[1]:.6g}] to [{lo:.6g}, {hi:.6g}]")
    return lo, hi
