"""
Sequential exponential-conic algorithm

Starts from a relaxation solution, then repeatedly solves the relaxation
with every binding hypograph constraint y <= exp(y~) replaced by its tangent
at the previous iterate plus a penalized slack. Those pairs keep no
exponential epigraph, so each subproblem is an inner approximation: with
zero slack, x = exp(x~) is feasible for the original problem and the
previous iterate stays feasible for the next subproblem.
"""
import logging
import math
import time
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from sgprelax.exceptions import SgpRelaxError, SubproblemFailed
from sgprelax.model import SgpProblem, check_feasible
from sgprelax.reformulate import ConciseSgp, concise
from sgprelax.relax import (
    RelaxationArtifact,
    RelaxOptions,
    assemble,
    build_relaxation,
)
from sgprelax.schemas import (
    DEFAULT_CUTS,
    IterRecord,
    ObjectiveMode,
    RelaxLevel,
    RowKind,
    SeqSettings,
    SeqStatus,
    SolverMethod,
    SolverSettings,
    StepNorm,
)
from sgprelax.solver import SolveResult, solve

logger = logging.getLogger(__name__)

CENTER_CLAMP = 700.0
TRACE_COLUMNS = ["iter", "objective", "penalty", "step_norm", "solve_time_s"]


def affine_estimator(center: float) -> Tuple[float, float]:
    """Value and slope of the tangent of exp at center (clamped to +-700)"""
    c = clamp_center(center)
    value = math.exp(c)
    return value, value


def clamp_center(center: float) -> float:
    if not math.isfinite(center):
        raise ValueError(f"tangent center must be finite, got {center}")
    return min(max(center, -CENTER_CLAMP), CENTER_CLAMP)


@dataclass
class IterTrace:
    records: List[IterRecord] = field(default_factory=list)
    status: SeqStatus = SeqStatus.MAX_ITERS

    @property
    def iterations(self) -> int:
        """Subproblem iterations after the initial relaxation"""
        return max(len(self.records) - 1, 0)


@dataclass
class SeqResult:
    status: SeqStatus
    x: np.ndarray
    objective: float
    feasible: bool
    trace: IterTrace

    @property
    def iterations(self) -> int:
        return self.trace.iterations


def _tilde_vectors(artifact: RelaxationArtifact, primal: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    vmap = artifact.map
    x_tilde = primal[list(vmap.x_tilde)]
    gamma_tilde = primal[[vmap.gamma_tilde[key] for key in sorted(vmap.gamma_tilde)]]
    return x_tilde, gamma_tilde


def build_subproblem(
    cs: ConciseSgp,
    prev_x_tilde: np.ndarray,
    prev_gamma_tilde: np.ndarray,
    settings: Optional[SeqSettings] = None,
    options: Optional[RelaxOptions] = None,
) -> RelaxationArtifact:
    """Relaxation plus cuts plus one penalized tangent row per binding (x, x~) and (gamma, gamma~) pair

    x pairs whose cost is nonnegative keep their exponential epigraph and get
    no tangent; see tangent_pairs.
    """
    settings = settings or SeqSettings()
    options = replace(options or RelaxOptions(cuts=DEFAULT_CUTS), reuse_linear=False)
    assembly = assemble(cs, options, linearize=True)
    assembly.apply_cuts(options.cuts)
    vmap = assembly.vmap
    if len(prev_x_tilde) != len(vmap.x) or len(prev_gamma_tilde) != len(vmap.gamma):
        raise ValueError("previous iterate does not match the relaxation layout")

    centers = dict(zip(vmap.x_tilde, prev_x_tilde))
    centers.update(zip((vmap.gamma_tilde[key] for key in sorted(vmap.gamma_tilde)), prev_gamma_tilde))
    x_cols = set(vmap.x)
    for col, log_col in assembly.tangent:
        c = clamp_center(float(centers[log_col]))
        value, slope = affine_estimator(c)
        if col in x_cols:
            eta = assembly.add_penalty(f"eta[{vmap.names[col]}]", settings.w)
        else:
            eta = assembly.add_penalty(f"eta'[{vmap.names[col]}]", settings.w_prime)
        # col <= value + slope * (log_col - c) + eta
        assembly.builder.add_le(
            {col: 1.0, log_col: -slope, eta: -1.0}, value - slope * c, RowKind.TANGENT
        )
    return assembly.finish(RelaxLevel.SECPR if options.cuts else RelaxLevel.ECPR)


def _step_norm(delta: np.ndarray, norm: StepNorm) -> float:
    if delta.size == 0:
        return 0.0
    if norm == StepNorm.INF:
        return float(np.max(np.abs(delta)))
    return float(np.linalg.norm(delta))


def _penalty_mass(artifact: RelaxationArtifact, result: SolveResult) -> float:
    cost = artifact.problem.c
    cols = list(artifact.map.penalty)
    return float(np.dot(cost[cols], np.maximum(result.x[cols], 0.0))) if cols else 0.0


def _record(
    t: int,
    artifact: RelaxationArtifact,
    result: SolveResult,
    x_tilde: np.ndarray,
    gamma_tilde: np.ndarray,
    step: float,
) -> IterRecord:
    cs = artifact.concise
    x = result.x[list(artifact.map.x)]
    return IterRecord(
        iter=t,
        x=[float(v) for v in x[: cs.n_orig]],
        x_tilde=[float(v) for v in x_tilde],
        gamma_tilde=[float(v) for v in gamma_tilde],
        objective=cs.objective_value(x),
        penalty=_penalty_mass(artifact, result),
        step_norm=step,
        solve_time_s=result.solve_time_s,
    )


def _subproblem_settings(settings: SeqSettings) -> SolverSettings:
    """Interior point tolerances tightened to subproblem_eps"""
    solver = settings.solver
    if solver.method != SolverMethod.IPM:
        return solver
    eps = settings.subproblem_eps
    return solver.model_copy(
        update={"eps_abs": min(solver.eps_abs, eps), "eps_rel": min(solver.eps_rel, eps)}
    )


def _candidate(p: SgpProblem, cs: ConciseSgp, x_tilde: np.ndarray, tol: float):
    """exp(x~) on the original variables and whether it is feasible"""
    x = np.exp(np.clip(x_tilde[: cs.n_orig], -CENTER_CLAMP, CENTER_CLAMP))
    try:
        feasible = check_feasible(p, x, tol).feasible
    except SgpRelaxError:
        feasible = False
    return x, feasible


def run(
    p: SgpProblem,
    settings: Optional[SeqSettings] = None,
    mode: ObjectiveMode = ObjectiveMode.AUTO,
    options: Optional[RelaxOptions] = None,
) -> SeqResult:
    """Run the sequential algorithm from the relaxation solution"""
    settings = settings or SeqSettings()
    options = options or RelaxOptions()
    cs = concise(p, mode=mode)
    trace = IterTrace()
    started = time.perf_counter()
    solver_settings = _subproblem_settings(settings)
    logger.info(f"🚀 Sequential run on {p.name} (eps={settings.eps}, w={settings.w})")

    init = build_relaxation(cs, settings.init_level, options)
    result = solve(init.problem, solver_settings)
    if not result.status.has_solution:
        error = SubproblemFailed(result.status.value, 0)
        error.trace = trace
        trace.status = SeqStatus.SUBPROBLEM_FAILED
        logger.error(f"❌ Initial relaxation of {p.name} failed: {result.status.value}")
        raise error
    x_tilde, gamma_tilde = _tilde_vectors(init, result.x)
    trace.records.append(_record(0, init, result, x_tilde, gamma_tilde, 0.0))

    best: Optional[Tuple[float, np.ndarray]] = None
    last_x, feasible = _candidate(p, cs, x_tilde, settings.feas_tol)
    if feasible:
        best = (p.objective.value(last_x), last_x)

    for t in range(1, settings.max_iters + 1):
        artifact = build_subproblem(cs, x_tilde, gamma_tilde, settings, options)
        result = solve(artifact.problem, solver_settings)
        if not result.status.has_solution:
            trace.status = SeqStatus.SUBPROBLEM_FAILED
            error = SubproblemFailed(result.status.value, t)
            error.trace = trace
            logger.error(f"❌ Subproblem {t} of {p.name} failed: {result.status.value}")
            raise error
        new_x_tilde, new_gamma_tilde = _tilde_vectors(artifact, result.x)
        step = _step_norm(
            np.concatenate([new_x_tilde - x_tilde, new_gamma_tilde - gamma_tilde]), settings.norm
        )
        record = _record(t, artifact, result, new_x_tilde, new_gamma_tilde, step)
        trace.records.append(record)
        x_tilde, gamma_tilde = new_x_tilde, new_gamma_tilde
        logger.debug(
            f"📊 iter {t}: obj={record.objective:.8g} penalty={record.penalty:.2e} step={step:.2e}"
        )

        last_x, feasible = _candidate(p, cs, x_tilde, settings.feas_tol)
        if feasible:
            value = p.objective.value(last_x)
            if best is None or value < best[0]:
                best = (value, last_x)

        if step <= settings.eps and feasible and record.penalty <= settings.penalty_tol:
            trace.status = SeqStatus.CONVERGED
            break
        if t == settings.penalty_check_iter and record.penalty > settings.penalty_check_tol:
            logger.warning(
                f"⚠️  Penalty mass {record.penalty:.2e} still above {settings.penalty_check_tol:g} "
                f"after {t} iterations; increase the penalty weights"
            )
            break

    elapsed = time.perf_counter() - started
    if trace.status == SeqStatus.CONVERGED:
        x, ok = last_x, True
    elif best is not None:
        x, ok = best[1], True
    else:
        x, ok = last_x, False
    objective = p.objective.value(x)
    summary = (
        f"{p.name}: status={trace.status.value} obj={objective:.8g} "
        f"iters={trace.iterations} time={elapsed:.2f}s"
    )
    if trace.status == SeqStatus.CONVERGED:
        logger.info(f"✅ {summary}")
    else:
        logger.warning(f"⚠️  {summary} feasible={ok}")
    return SeqResult(trace.status, x, float(objective), ok, trace)


def trace_frame(trace: IterTrace) -> pd.DataFrame:
    rows = [{column: getattr(r, column) for column in TRACE_COLUMNS} for r in trace.records]
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)


def write_trace_csv(trace: IterTrace, path: str) -> None:
    trace_frame(trace).to_csv(path, index=False)
    logger.info(f"💾 Trace written to {path}")
