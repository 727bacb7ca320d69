"""
Exponential-conic relaxations of a concise signomial program

The relaxation keeps the convex half of the exact log-space reformulation:

    sum c lambda <= sum c' gamma         (one balance row per constraint)
    exp(sum a x~) <= lambda              (epigraph, pos-side monomials)
    gamma~ <= sum a x~                   (link, neg-side monomials)
    exp(x~) <= x,   exp(gamma~) <= gamma

and drops the hypograph halves x <= exp(x~), gamma <= exp(gamma~). The
strengthened level adds secant/hull rows and monomial-bound cuts that are
valid for every feasible point of the original problem.

Column order: x (original then aux), x~, lambda, gamma, gamma~, X/X~,
then any penalty columns a caller appends.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from sgprelax.bounds import is_bounded, monomial_bounds, monomial_range
from sgprelax.conic import ConicBuilder, ConicProblem
from sgprelax.exceptions import BadStatus, DegenerateInterval, InfeasibleInput
from sgprelax.model import Interval, Monomial, check_feasible
from sgprelax.reformulate import ConciseSgp, lift_variables
from sgprelax.schemas import DEFAULT_CUTS, CutFamily, RelaxLevel, RowKind, SolveStatus

logger = logging.getLogger(__name__)

DEGENERATE_RTOL = 1e-12

TermKey = Tuple[int, int]


@dataclass(frozen=True)
class LiftedVarMap:
    """Column indices of every lifted quantity; (k, j) keys are constraint and term positions"""
    names: Tuple[str, ...]
    x: Tuple[int, ...]
    x_tilde: Tuple[int, ...]
    lam: Dict[TermKey, int] = field(default_factory=dict)
    gamma: Dict[TermKey, int] = field(default_factory=dict)
    gamma_tilde: Dict[TermKey, int] = field(default_factory=dict)
    mono: Dict[int, Tuple[int, int]] = field(default_factory=dict)
    penalty: Tuple[int, ...] = ()

    @property
    def n_cols(self) -> int:
        return len(self.names)


@dataclass(frozen=True)
class LinearRow:
    """sum coeffs * col <= rhs"""
    coeffs: Dict[int, float]
    rhs: float
    kind: RowKind


@dataclass(frozen=True)
class MonomialLbCut:
    """Single-monomial constraint (c / C) prod x^a <= 1 with 0 < lower < 1"""
    k: int
    label: str
    log_coef: float
    exponents: Tuple[Tuple[int, float], ...]
    lower: float


@dataclass(frozen=True)
class RelaxOptions:
    cuts: FrozenSet[CutFamily] = DEFAULT_CUTS
    reuse_linear: bool = False
    bound_overrides: Dict[str, Interval] = field(default_factory=dict)


@dataclass(frozen=True)
class RelaxationArtifact:
    problem: ConicProblem
    map: LiftedVarMap
    level: RelaxLevel
    cuts_applied: FrozenSet[CutFamily]
    derived_bounds: Dict[str, Interval]
    concise: ConciseSgp
    offset: float = 0.0


@dataclass(frozen=True)
class RelaxationSolution:
    x: np.ndarray
    x_tilde: np.ndarray
    lam: Dict[str, float]
    gamma: Dict[str, float]
    gamma_tilde: Dict[str, float]
    lb: float
    gap: float
    status: SolveStatus


def lambda_name(label: str, j: int) -> str:
    return f"lambda[{label}:{j}]"


def gamma_name(label: str, j: int) -> str:
    return f"gamma[{label}:{j}]"


def _reused(t: Monomial, reuse_linear: bool) -> bool:
    return reuse_linear and t.linear_var is not None


def _unit(t: Monomial) -> Monomial:
    """Monomial with its coefficient stripped"""
    return Monomial(1.0, t.exponents)


def propagate_bounds(cs: ConciseSgp, reuse_linear: bool = False) -> Dict[str, Interval]:
    """Intervals for x, lambda and gamma columns; entries with a missing box are absent"""
    derived: Dict[str, Interval] = {}
    for name, box in zip(cs.names, cs.bounds):
        if box is not None and box.is_finite:
            derived[name] = box
    for k, con in enumerate(cs.constraints):
        for j, t in enumerate(con.pos_terms):
            if t.is_constant or _reused(t, reuse_linear):
                continue
            box = monomial_bounds(_unit(t), cs.bounds)
            if box is not None:
                derived[lambda_name(con.label, j)] = box
        for j, t in enumerate(con.neg_terms):
            if t.is_constant or _reused(t, reuse_linear):
                continue
            box = monomial_bounds(_unit(t), cs.bounds)
            if box is not None:
                derived[gamma_name(con.label, j)] = box
    return derived


def secant_coeffs(lo: float, hi: float) -> Tuple[float, float]:
    """Chord of exp between log lo and log hi: y <= slope * y~ + intercept"""
    if lo <= 0 or hi <= 0:
        raise DegenerateInterval(f"secant needs positive ends, got [{lo}, {hi}]")
    if hi / lo - 1.0 < DEGENERATE_RTOL:
        raise DegenerateInterval(f"interval [{lo}, {hi}] is too narrow for a secant")
    slope = (hi - lo) / (math.log(hi) - math.log(lo))
    return slope, lo - slope * math.log(lo)


def _hull_rows(col: int, log_col: int, box: Interval) -> List[LinearRow]:
    slope, intercept = secant_coeffs(box.lo, box.hi)
    return [
        LinearRow({col: 1.0, log_col: -slope}, intercept, RowKind.SECANT),
        LinearRow({log_col: 1.0}, math.log(box.hi), RowKind.BOUND),
        LinearRow({col: -1.0}, -box.lo, RowKind.BOUND),
    ]


def _hull_eligible(box: Optional[Interval]) -> bool:
    return is_bounded(box) and box.hi / box.lo - 1.0 >= DEGENERATE_RTOL


def hull_x_cuts(vmap: LiftedVarMap, bounds: Sequence[Optional[Interval]]) -> List[LinearRow]:
    """Three rows per bounded, non-fixed variable describing the hull of {(x~, e^x~)}"""
    rows: List[LinearRow] = []
    for i, box in enumerate(bounds):
        if _hull_eligible(box):
            rows.extend(_hull_rows(vmap.x[i], vmap.x_tilde[i], box))
    return rows


def hull_gamma_cuts(vmap: LiftedVarMap, derived: Dict[str, Interval]) -> List[LinearRow]:
    rows: List[LinearRow] = []
    for key, col in vmap.gamma.items():
        box = derived.get(vmap.names[col])
        if _hull_eligible(box):
            rows.extend(_hull_rows(col, vmap.gamma_tilde[key], box))
    return rows


def _single_monomial(cs: ConciseSgp, bounds: Sequence[Optional[Interval]]):
    """(k, label, scaled coef, monomial, box minimum) per constraint coef * prod x^a <= 1"""
    for k, con in enumerate(cs.constraints):
        variable_terms = [t for t in con.pos_terms if not t.is_constant]
        if len(con.pos_terms) != 1 or len(variable_terms) != 1:
            continue
        if con.neg_terms and any(not t.is_constant for t in con.neg_terms):
            continue
        term = variable_terms[0]
        coef = term.coef / con.neg_constant
        rng = monomial_range(_unit(term), bounds)
        if rng is None:
            continue
        yield k, con.label, coef, term, coef * rng[0]


def _forces_equality(lower: float) -> bool:
    return lower >= 1.0 or 1.0 / lower - 1.0 < DEGENERATE_RTOL


def monomial_lb_cuts(cs: ConciseSgp, bounds: Sequence[Optional[Interval]]) -> List[MonomialLbCut]:
    cuts: List[MonomialLbCut] = []
    for k, label, coef, term, lower in _single_monomial(cs, bounds):
        if lower <= 0.0 or _forces_equality(lower):
            continue
        cuts.append(MonomialLbCut(k, label, math.log(coef), term.exponents, lower))
    return cuts


def forced_fixings(cs: ConciseSgp) -> Dict[str, Interval]:
    """Fixed boxes for constraints whose monomial minimum over the box is already 1

    Such a constraint only holds at the minimizing corner: every variable with a
    positive exponent sits at its lower bound, every other one at its upper bound.
    """
    fixings: Dict[str, Interval] = {}
    for _, label, _, term, lower in _single_monomial(cs, cs.bounds):
        if not _forces_equality(lower):
            continue
        if lower - 1.0 > DEGENERATE_RTOL:
            logger.warning(f"⚠️  Constraint {label} cannot hold on the box (minimum {lower:.6g} > 1)")
            continue
        for i, a in term.exponents:
            box = cs.bounds[i]
            value = box.lo if a > 0 else box.hi
            fixings[cs.names[i]] = Interval(value, value)
        logger.info(f"🔧 Constraint {label} forces equality; fixed {[cs.names[i] for i, _ in term.exponents]}")
    return fixings


def monomial_ub_cuts(cs: ConciseSgp, vmap: LiftedVarMap, derived: Dict[str, Interval]) -> List[LinearRow]:
    """Caps gamma <= upper, plus the aggregate row when every neg-side monomial is capped

    A constraint whose neg side is only a constant gets no aggregate row: it
    would repeat the balance row.
    """
    rows: List[LinearRow] = []
    for k, con in enumerate(cs.constraints):
        if all(t.is_constant for t in con.neg_terms):
            continue
        capped_total = con.neg_constant
        complete = True
        for j, t in enumerate(con.neg_terms):
            if t.is_constant:
                continue
            col = vmap.gamma.get((k, j))
            box = derived.get(vmap.names[col]) if col is not None else monomial_bounds(_unit(t), cs.bounds)
            if box is None:
                complete = False
                continue
            if col is not None:
                rows.append(LinearRow({col: 1.0}, box.hi, RowKind.BOUND))
            capped_total += t.coef * box.hi
        if not complete:
            continue
        coeffs: Dict[int, float] = {}
        for j, t in enumerate(con.pos_terms):
            if t.is_constant:
                continue
            col = vmap.lam.get((k, j), vmap.x[t.linear_var] if t.linear_var is not None else None)
            coeffs[col] = coeffs.get(col, 0.0) + t.coef
        if coeffs:
            rows.append(LinearRow(coeffs, capped_total - con.pos_constant, RowKind.AGGREGATE))
    return rows


def _layout(cs: ConciseSgp, reuse_linear: bool) -> Tuple[ConicBuilder, LiftedVarMap]:
    builder = ConicBuilder()
    x = tuple(builder.add_var(name, cost) for name, cost in zip(cs.names, cs.d))
    x_tilde = tuple(builder.add_var(f"{name}_tilde") for name in cs.names)
    lam: Dict[TermKey, int] = {}
    gamma: Dict[TermKey, int] = {}
    gamma_tilde: Dict[TermKey, int] = {}
    for k, con in enumerate(cs.constraints):
        for j, t in enumerate(con.pos_terms):
            if not (t.is_constant or _reused(t, reuse_linear)):
                lam[(k, j)] = builder.add_var(lambda_name(con.label, j))
    for k, con in enumerate(cs.constraints):
        for j, t in enumerate(con.neg_terms):
            if not (t.is_constant or _reused(t, reuse_linear)):
                gamma[(k, j)] = builder.add_var(gamma_name(con.label, j))
    for key in gamma:
        gamma_tilde[key] = builder.add_var(f"{builder.names[gamma[key]]}_tilde")
    vmap = LiftedVarMap(tuple(builder.names), x, x_tilde, lam, gamma, gamma_tilde)
    return builder, vmap


def _log_weights(vmap: LiftedVarMap, t: Monomial) -> Dict[int, float]:
    return {vmap.x_tilde[i]: a for i, a in t.exponents}


def _emit_ecpr(
    builder: ConicBuilder,
    vmap: LiftedVarMap,
    cs: ConciseSgp,
    linearized: FrozenSet[int] = frozenset(),
) -> None:
    """ECPR rows; columns in linearized get no exponential epigraph"""
    for k, con in enumerate(cs.constraints):
        coeffs: Dict[int, float] = {}
        for j, t in enumerate(con.pos_terms):
            if t.is_constant:
                continue
            col = vmap.lam.get((k, j), vmap.x[t.linear_var] if t.linear_var is not None else None)
            coeffs[col] = coeffs.get(col, 0.0) + t.coef
        for j, t in enumerate(con.neg_terms):
            if t.is_constant:
                continue
            col = vmap.gamma.get((k, j), vmap.x[t.linear_var] if t.linear_var is not None else None)
            coeffs[col] = coeffs.get(col, 0.0) - t.coef
        builder.add_le(coeffs, con.neg_constant - con.pos_constant, RowKind.BALANCE)

    for (k, j), col in vmap.lam.items():
        builder.add_exp_epigraph(col, _log_weights(vmap, cs.constraints[k].pos_terms[j]))
    for (k, j), col in vmap.gamma_tilde.items():
        row = {col: 1.0}
        for x_col, a in _log_weights(vmap, cs.constraints[k].neg_terms[j]).items():
            row[x_col] = row.get(x_col, 0.0) - a
        builder.add_le(row, 0.0, RowKind.LINK)
    for i in range(cs.n_vars):
        if vmap.x[i] not in linearized:
            builder.add_exp_epigraph(vmap.x[i], {vmap.x_tilde[i]: 1.0})
    for key, col in vmap.gamma.items():
        if col not in linearized:
            builder.add_exp_epigraph(col, {vmap.gamma_tilde[key]: 1.0})

    for i, box in enumerate(cs.bounds):
        if box is None:
            continue
        if box.is_fixed:
            # x~ = log x would leave the cone without interior
            builder.add_eq({vmap.x[i]: 1.0}, box.lo, RowKind.BOUND)
            builder.add_bounds(vmap.x_tilde[i], None, math.log(box.hi))
            continue
        builder.add_bounds(vmap.x[i], box.lo, box.hi)
        builder.add_bounds(
            vmap.x_tilde[i],
            math.log(box.lo) if box.lo is not None else None,
            math.log(box.hi) if box.hi is not None else None,
        )


def _emit_rows(builder: ConicBuilder, rows: Iterable[LinearRow]) -> int:
    count = 0
    for row in rows:
        builder.add_le(row.coeffs, row.rhs, row.kind)
        count += 1
    return count


def _emit_monomial_lb(builder: ConicBuilder, vmap: LiftedVarMap, cut: MonomialLbCut) -> Tuple[int, int]:
    X = builder.add_var(f"X[{cut.label}]")
    X_tilde = builder.add_var(f"X_tilde[{cut.label}]")
    link = {X_tilde: 1.0}
    for i, a in cut.exponents:
        link[vmap.x_tilde[i]] = link.get(vmap.x_tilde[i], 0.0) - a
    builder.add_eq(link, cut.log_coef, RowKind.LINK)
    builder.add_bounds(X, cut.lower, 1.0)
    builder.add_bounds(X_tilde, math.log(cut.lower), 0.0)
    builder.add_exp_epigraph(X, {X_tilde: 1.0})
    slope, intercept = secant_coeffs(cut.lower, 1.0)
    builder.add_le({X: 1.0, X_tilde: -slope}, intercept, RowKind.MONO_LB)
    return X, X_tilde


@dataclass
class _Assembly:
    """Mutable relaxation under construction"""
    cs: ConciseSgp
    builder: ConicBuilder
    vmap: LiftedVarMap
    derived: Dict[str, Interval]
    cuts_applied: set = field(default_factory=set)
    tangent: Tuple[Tuple[int, int], ...] = ()

    def apply_cuts(self, cuts: Iterable[CutFamily]) -> None:
        cuts = set(cuts)
        if CutFamily.VAR_HULL in cuts and _emit_rows(self.builder, hull_x_cuts(self.vmap, self.cs.bounds)):
            self.cuts_applied.add(CutFamily.VAR_HULL)
        if CutFamily.GAMMA_HULL in cuts and _emit_rows(self.builder, hull_gamma_cuts(self.vmap, self.derived)):
            self.cuts_applied.add(CutFamily.GAMMA_HULL)
        if CutFamily.MONOMIAL_UB in cuts and _emit_rows(
            self.builder, monomial_ub_cuts(self.cs, self.vmap, self.derived)
        ):
            self.cuts_applied.add(CutFamily.MONOMIAL_UB)
        if CutFamily.MONOMIAL_LB in cuts:
            mono = dict(self.vmap.mono)
            for cut in monomial_lb_cuts(self.cs, self.cs.bounds):
                mono[cut.k] = _emit_monomial_lb(self.builder, self.vmap, cut)
            if mono:
                self.cuts_applied.add(CutFamily.MONOMIAL_LB)
                self.vmap = replace(self.vmap, names=tuple(self.builder.names), mono=mono)

    def add_penalty(self, name: str, weight: float) -> int:
        col = self.builder.add_var(name, weight)
        self.builder.add_bounds(col, 0.0, None)
        self.vmap = replace(
            self.vmap, names=tuple(self.builder.names), penalty=self.vmap.penalty + (col,)
        )
        return col

    def finish(self, level: RelaxLevel) -> RelaxationArtifact:
        return RelaxationArtifact(
            problem=self.builder.build(),
            map=self.vmap,
            level=level,
            cuts_applied=frozenset(self.cuts_applied),
            derived_bounds=self.derived,
            concise=self.cs,
            offset=self.cs.offset,
        )


def tangent_pairs(cs: ConciseSgp, vmap: LiftedVarMap) -> List[Tuple[int, int]]:
    """(col, log col) pairs whose upper side col <= exp(log col) binds

    Every gamma sits on the larger side of its balance row. An x column only
    binds from above when its objective cost is negative; without linear reuse
    x enters no balance row.
    """
    pairs = [
        (vmap.x[i], vmap.x_tilde[i])
        for i, (cost, box) in enumerate(zip(cs.d, cs.bounds))
        if cost < 0 and not (box is not None and box.is_fixed)
    ]
    pairs.extend((col, vmap.gamma_tilde[key]) for key, col in sorted(vmap.gamma.items()))
    return pairs


def assemble(
    cs: ConciseSgp, options: Optional[RelaxOptions] = None, linearize: bool = False
) -> _Assembly:
    """ECPR rows in a builder that callers may extend with cuts or penalty columns

    With linearize, the tangent pairs lose their exponential epigraph; the
    caller supplies an upper row for each of them instead. With MonomialLB
    requested, constraints that force equality fix their variables first.
    """
    options = options or RelaxOptions()
    if options.bound_overrides:
        cs = cs.with_bounds(options.bound_overrides)
    if CutFamily.MONOMIAL_LB in options.cuts:
        fixings = forced_fixings(cs)
        if fixings:
            cs = cs.with_bounds(fixings)
    if linearize and options.reuse_linear:
        raise ValueError("linearized assemblies need reuse_linear=False")
    builder, vmap = _layout(cs, options.reuse_linear)
    tangent = tuple(tangent_pairs(cs, vmap)) if linearize else ()
    _emit_ecpr(builder, vmap, cs, frozenset(col for col, _ in tangent))
    return _Assembly(cs, builder, vmap, propagate_bounds(cs, options.reuse_linear), tangent=tangent)


def build_ecpr(cs: ConciseSgp, options: Optional[RelaxOptions] = None) -> RelaxationArtifact:
    options = replace(options or RelaxOptions(), cuts=frozenset())
    artifact = assemble(cs, options).finish(RelaxLevel.ECPR)
    logger.debug(f"🔧 ECPR for {cs.source.name}: {_counts_text(artifact)}")
    return artifact


def build_secpr(cs: ConciseSgp, options: Optional[RelaxOptions] = None) -> RelaxationArtifact:
    options = options or RelaxOptions()
    assembly = assemble(cs, options)
    assembly.apply_cuts(options.cuts)
    artifact = assembly.finish(RelaxLevel.SECPR)
    skipped = set(options.cuts) - set(artifact.cuts_applied)
    if skipped:
        logger.debug(f"🔧 Cut families without applicable rows: {sorted(c.value for c in skipped)}")
    logger.debug(f"🔧 s-ECPR for {cs.source.name}: {_counts_text(artifact)}")
    return artifact


def build_relaxation(
    cs: ConciseSgp, level: RelaxLevel, options: Optional[RelaxOptions] = None
) -> RelaxationArtifact:
    if level == RelaxLevel.ECPR:
        return build_ecpr(cs, options)
    return build_secpr(cs, options)


def relaxation_counts(artifact: RelaxationArtifact) -> Tuple[int, int, int]:
    """(variables, linear constraints, exponential cones)"""
    p = artifact.problem
    return p.n_vars, p.n_linear_constraints, p.n_exp_cones


def _counts_text(artifact: RelaxationArtifact) -> str:
    n, m, k = relaxation_counts(artifact)
    return f"{n} vars, {m} linear constraints, {k} exp cones"


def lift_point(artifact: RelaxationArtifact, x: Sequence[float], tol: float = 1e-9) -> np.ndarray:
    """Exact lift of a feasible point into the relaxation's column space"""
    cs, vmap = artifact.concise, artifact.map
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise InfeasibleInput("lift needs a strictly positive point")
    report = check_feasible(cs.source, x[: cs.n_orig], tol)
    if not report.feasible:
        raise InfeasibleInput(f"point violates the problem by {report.max_violation:.3e}")
    full = lift_variables(cs, x) if len(x) == cs.n_orig else x
    log_x = np.log(full)

    out = np.zeros(vmap.n_cols)
    out[list(vmap.x)] = full
    out[list(vmap.x_tilde)] = log_x
    for (k, j), col in vmap.lam.items():
        out[col] = math.exp(_unit(cs.constraints[k].pos_terms[j]).log_value(log_x))
    for (k, j), col in vmap.gamma.items():
        log_value = _unit(cs.constraints[k].neg_terms[j]).log_value(log_x)
        out[col] = math.exp(log_value)
        out[vmap.gamma_tilde[(k, j)]] = log_value
    for k, (X, X_tilde) in vmap.mono.items():
        con = cs.constraints[k]
        log_value = con.pos_terms[0].log_value(log_x) - math.log(con.neg_constant)
        out[X] = math.exp(log_value)
        out[X_tilde] = log_value
    return out


def recover(artifact: RelaxationArtifact, result) -> RelaxationSolution:
    """Named values of a solved relaxation"""
    if not result.status.has_solution:
        raise BadStatus(result.status.value)
    vmap = artifact.map
    primal = result.x
    return RelaxationSolution(
        x=primal[list(vmap.x)],
        x_tilde=primal[list(vmap.x_tilde)],
        lam={vmap.names[c]: float(primal[c]) for c in vmap.lam.values()},
        gamma={vmap.names[c]: float(primal[c]) for c in vmap.gamma.values()},
        gamma_tilde={vmap.names[c]: float(primal[c]) for c in vmap.gamma_tilde.values()},
        lb=float(result.objective) + artifact.offset,
        gap=float(result.gap),
        status=result.status,
    )
