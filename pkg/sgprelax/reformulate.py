"""
Concise canonical form of a signomial program

    min  d^T x + offset
    s.t. f+_k(x) <= f-_k(x)      k = 0..K
         x > 0

Every stored coefficient is positive; the side a monomial sits on carries
its sign. Constants stay literal monomials and never get lifted columns.
"""
import logging
import warnings
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from sgprelax.bounds import posynomial_sum_range, refine_range
from sgprelax.exceptions import EmptyPositiveSide, InfeasibleConstant, InfeasibleInput
from sgprelax.model import (
    Constraint,
    Interval,
    Monomial,
    SgpProblem,
    Signomial,
    VarId,
    serialize,
)
from sgprelax.schemas import ObjectiveMode

logger = logging.getLogger(__name__)

OBJECTIVE_LABEL = "objective"


@dataclass(frozen=True)
class ConciseConstraint:
    """pos_terms <= neg_terms with positive coefficients on both sides"""
    label: str
    pos_terms: Tuple[Monomial, ...]
    neg_terms: Tuple[Monomial, ...]

    def __post_init__(self):
        if not self.pos_terms:
            raise EmptyPositiveSide(f"constraint {self.label} has an empty positive side")
        if any(t.coef <= 0 for t in self.pos_terms + self.neg_terms):
            raise ValueError(f"constraint {self.label} stores a non-positive coefficient")

    @property
    def pos_constant(self) -> float:
        return sum(t.coef for t in self.pos_terms if t.is_constant)

    @property
    def neg_constant(self) -> float:
        return sum(t.coef for t in self.neg_terms if t.is_constant)

    def slack(self, x: Sequence[float]) -> float:
        """f-(x) - f+(x); nonnegative when satisfied"""
        return sum(t.value(x) for t in self.neg_terms) - sum(t.value(x) for t in self.pos_terms)


@dataclass(frozen=True)
class TransferredProblem:
    """Result of moving the objective into a constraint"""
    problem: SgpProblem
    mode: ObjectiveMode
    d: Tuple[float, ...]
    offset: float
    aux_plus: Optional[int]
    aux_minus: Optional[int]
    aux_shift: float
    n_orig: int


@dataclass(frozen=True)
class ConciseSgp:
    """Canonical form with linear objective d^T x + offset"""
    source: SgpProblem
    names: Tuple[str, ...]
    n_orig: int
    mode: ObjectiveMode
    d: Tuple[float, ...]
    offset: float
    aux_plus: Optional[int]
    aux_minus: Optional[int]
    aux_shift: float
    constraints: Tuple[ConciseConstraint, ...]
    bounds: Tuple[Optional[Interval], ...]

    @property
    def n_vars(self) -> int:
        return len(self.names)

    def objective_value(self, x: Sequence[float]) -> float:
        return float(np.dot(self.d, x)) + self.offset

    def with_bounds(self, overrides: dict) -> "ConciseSgp":
        """Replace bounds by variable name; unknown names are ignored with a warning"""
        bounds = list(self.bounds)
        for name, box in overrides.items():
            if name not in self.names:
                logger.warning(f"⚠️  Bound override for unknown variable {name} ignored")
                continue
            bounds[self.names.index(name)] = box
        return ConciseSgp(
            self.source, self.names, self.n_orig, self.mode, self.d, self.offset,
            self.aux_plus, self.aux_minus, self.aux_shift, self.constraints, tuple(bounds),
        )


def _is_linear_objective(objective: Signomial) -> bool:
    return all(t.is_constant or t.linear_var is not None for t in objective.terms)


def _aux_name(taken: Sequence[str], position: int, fallback: str) -> str:
    name = f"x{position}"
    return name if name not in taken else fallback


def resolve_mode(
    p: SgpProblem, mode: ObjectiveMode, assume_nonnegative: bool = False
) -> ObjectiveMode:
    """Pick the objective treatment; SINGLE_AUX falls back to GENERAL when unsafe"""
    objective = p.objective
    if mode == ObjectiveMode.LINEAR:
        if _is_linear_objective(objective):
            return mode
        logger.warning("⚠️  Objective is not linear, using the general transfer")
        return ObjectiveMode.GENERAL
    if mode == ObjectiveMode.AUTO:
        if _is_linear_objective(objective):
            return ObjectiveMode.LINEAR
        mode = ObjectiveMode.SINGLE_AUX
    if mode == ObjectiveMode.SINGLE_AUX:
        if assume_nonnegative or objective.is_posynomial:
            return mode
        rng = refine_range(objective, p.bounds)
        if rng is not None and rng[0] > 0:
            return mode
        logger.info("🔧 Objective not provably positive, using two auxiliary variables")
        return ObjectiveMode.GENERAL
    return mode


def transfer_objective(
    p: SgpProblem,
    mode: ObjectiveMode = ObjectiveMode.GENERAL,
    assume_nonnegative: bool = False,
) -> TransferredProblem:
    """Replace the objective by aux variables and add f0(x) <= x_{n+1} - x_{n+2}"""
    n = p.n_vars
    mode = resolve_mode(p, mode, assume_nonnegative)
    objective = p.objective
    constant = sum(t.coef for t in objective.terms if t.is_constant)

    if mode == ObjectiveMode.LINEAR or not objective.variables():
        d = np.zeros(n)
        for t in objective.terms:
            if t.linear_var is not None:
                d[t.linear_var] += t.coef
        return TransferredProblem(
            p, ObjectiveMode.LINEAR, tuple(d), constant, None, None, 0.0, n
        )

    names = p.var_names
    variables = list(p.vars)
    plus = VarId(n, _aux_name(names, n + 1, "aux_plus"))
    variables.append((plus, Interval()))
    rhs = [Monomial(1.0, ((plus.index, 1.0),))]
    d = [0.0] * n + [1.0]
    aux_minus = None
    shift = 0.0
    if mode == ObjectiveMode.GENERAL:
        minus = VarId(n + 1, _aux_name(names + [plus.name], n + 2, "aux_minus"))
        variables.append((minus, Interval()))
        rhs.append(Monomial(-1.0, ((minus.index, 1.0),)))
        d.append(-1.0)
        aux_minus = minus.index
        if not objective.positive_terms or not objective.negative_terms:
            shift = 1.0
    transfer = Constraint(OBJECTIVE_LABEL, objective, Signomial.of(rhs))
    problem = SgpProblem(p.name, tuple(variables), Signomial.of(rhs), (transfer,) + p.constraints)
    return TransferredProblem(problem, mode, tuple(d), 0.0, plus.index, aux_minus, shift, n)


def _aux_bounds(t: TransferredProblem, original: SgpProblem) -> List[Optional[Interval]]:
    """Boxes for the aux variables consistent with their lift values"""
    bounds: List[Optional[Interval]] = list(original.bounds)
    objective = original.objective
    if t.mode == ObjectiveMode.SINGLE_AUX:
        rng = refine_range(objective, original.bounds)
        if rng is not None and rng[0] > 0:
            bounds.append(Interval(rng[0], max(rng)))
        else:
            bounds.append(None)
    elif t.mode == ObjectiveMode.GENERAL:
        pos = objective.positive_terms
        neg = [-m for m in objective.negative_terms]
        for side in (pos, neg):
            rng = posynomial_sum_range(side, original.bounds)
            if rng is None:
                bounds.append(None)
            else:
                bounds.append(Interval(rng[0] + t.aux_shift, rng[1] + t.aux_shift))
    return bounds


def split_posynomials(t: TransferredProblem, original: Optional[SgpProblem] = None) -> ConciseSgp:
    """Route monomials of every lhs <= rhs so both sides carry positive coefficients"""
    original = original or t.problem
    constraints = []
    for c in t.problem.constraints:
        diff = c.lhs - c.rhs
        pos = tuple(diff.positive_terms)
        neg = tuple(-m for m in diff.negative_terms)
        if not pos:
            message = f"constraint {c.label} reduces to 0 <= posynomial and is dropped"
            logger.warning(f"⚠️  {message}")
            warnings.warn(message)
            continue
        if not neg:
            raise InfeasibleConstant(
                f"constraint {c.label} reduces to a positive quantity <= 0"
            )
        constraints.append(ConciseConstraint(c.label, pos, neg))
    bounds = _aux_bounds(t, original) if t.mode != ObjectiveMode.LINEAR else list(original.bounds)
    return ConciseSgp(
        source=original,
        names=tuple(t.problem.var_names),
        n_orig=t.n_orig,
        mode=t.mode,
        d=t.d,
        offset=t.offset,
        aux_plus=t.aux_plus,
        aux_minus=t.aux_minus,
        aux_shift=t.aux_shift,
        constraints=tuple(constraints),
        bounds=tuple(bounds),
    )


def concise(
    p: SgpProblem,
    single_aux: bool = False,
    mode: Optional[ObjectiveMode] = None,
    assume_nonnegative: bool = False,
) -> ConciseSgp:
    """Concise form of p; `mode` wins over the `single_aux` flag when given"""
    if mode is None:
        mode = ObjectiveMode.SINGLE_AUX if single_aux else ObjectiveMode.GENERAL
    try:
        cs = split_posynomials(transfer_objective(p, mode, assume_nonnegative), p)
    except Exception as e:
        logger.error(f"❌ Reformulation of {p.name} failed: {e}")
        raise
    logger.debug(
        f"🔧 {p.name}: {cs.mode.value} objective, {cs.n_vars} variables, "
        f"{len(cs.constraints)} concise constraints"
    )
    return cs


def lift_variables(cs: ConciseSgp, x: Sequence[float]) -> np.ndarray:
    """Extend an original point with the aux values that make the objectives agree"""
    x = np.asarray(x, dtype=float)[: cs.n_orig]
    objective = cs.source.objective
    values = list(x)
    if cs.mode == ObjectiveMode.SINGLE_AUX:
        f0 = objective.value(x)
        if f0 <= 0:
            raise InfeasibleInput(f"objective value {f0} is not positive; single aux cannot lift it")
        values.append(f0)
    elif cs.mode == ObjectiveMode.GENERAL:
        plus = sum(t.value(x) for t in objective.positive_terms)
        minus = -sum(t.value(x) for t in objective.negative_terms)
        values.extend([plus + cs.aux_shift, minus + cs.aux_shift])
    return np.array(values)


def serialize_concise(cs: ConciseSgp) -> str:
    """Write the concise form back as .sgp text"""
    variables = tuple(
        (VarId(i, name), box if box is not None else Interval())
        for i, (name, box) in enumerate(zip(cs.names, cs.bounds))
    )
    objective_terms = [
        Monomial(coef, ((i, 1.0),)) for i, coef in enumerate(cs.d) if coef != 0
    ]
    if cs.offset:
        objective_terms.append(Monomial(cs.offset))
    constraints = tuple(
        Constraint(c.label, Signomial.of(c.pos_terms), Signomial.of(c.neg_terms))
        for c in cs.constraints
    )
    problem = SgpProblem(
        f"{cs.source.name}_concise", variables, Signomial.of(objective_terms), constraints
    )
    return serialize(problem)
