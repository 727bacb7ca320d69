"""
Relaxation benchmark over the built-in corpus

Builds ECPR and s-ECPR for each instance, solves them and lays the lower
bounds, root gaps and structural counts out next to the published table.
"""
import logging
import time
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import pandas as pd

from sgprelax import sequential
from sgprelax.conic import write_conic
from sgprelax.corpus import CorpusEntry, builtin_corpus
from sgprelax.exceptions import SgpRelaxError
from sgprelax.model import SgpProblem
from sgprelax.reformulate import concise
from sgprelax.relax import RelaxOptions, build_relaxation, relaxation_counts
from sgprelax.schemas import (
    BenchRow,
    ObjectiveMode,
    OutputFormat,
    RelaxLevel,
    SeqSettings,
    SolverSettings,
    SolveStatus,
)
from sgprelax.solver import solve

logger = logging.getLogger(__name__)

LB_DEVIATION_RTOL = 0.05
TABLE_INSTANCES = ("P1", "P2", "P3", "P4", "P5", "P6", "P7")
BENCH_COLUMNS = list(BenchRow.model_fields)
SEQ_SUMMARY_COLUMNS = ["instance", "status", "objective", "z_star", "iterations", "time_s", "note"]


@dataclass(frozen=True)
class PublishedRow:
    lb: float
    rgap_pct: float
    counts: Tuple[int, int, int]
    time_s: float


@dataclass(frozen=True)
class PublishedEntry:
    z_star: float
    ecpr: PublishedRow
    secpr: PublishedRow

    def row(self, level: RelaxLevel) -> PublishedRow:
        return self.ecpr if level == RelaxLevel.ECPR else self.secpr


def _entry(z_star, ecpr_lb, ecpr_gap, secpr_lb, secpr_gap, n_vars, rows, secpr_rows, cones, time_s):
    return PublishedEntry(
        z_star,
        PublishedRow(ecpr_lb, ecpr_gap, (n_vars, rows, cones), time_s),
        PublishedRow(secpr_lb, secpr_gap, (n_vars, secpr_rows, cones), time_s),
    )


PUBLISHED_TABLE: Dict[str, PublishedEntry] = {
    "P1": _entry(58.38488, 7.4998, 87.15, 56.7598, 2.78, 14, 5, 11, 8, 0.1),
    "P2": _entry(468479.9969, 296032.51004, 36.81, 464029.43693, 0.95, 19, 5, 11, 13, 0.2),
    "P3": _entry(3.95116, 2.01193, 49.08, 3.70697, 6.18, 40, 8, 21, 27, 0.9),
    "P4": _entry(7049.24803, 2153.54527, 69.45, 6760.93408, 4.09, 28, 10, 21, 17, 1.1),
    "P5": _entry(6217.46549, 3471.83273, 44.16, 6019.75009, 3.18, 18, 3, 8, 13, 0.1),
    "P6": _entry(10122.85643, 4139.23598, 59.11, 9865.73588, 2.54, 43, 16, 31, 28, 1.9),
    "P7": _entry(-83.66157, -31.364723, 62.51, -75.54639, 9.70, 21, 5, 13, 13, 0.3),
}


def published_table() -> Dict[str, PublishedEntry]:
    return dict(PUBLISHED_TABLE)


def rgap(z_star: float, lb: float) -> float:
    """Root gap in percent, 100 (z* - LB) / z*"""
    if z_star == 0:
        raise ValueError("root gap undefined for z* = 0")
    return 100.0 * (z_star - lb) / z_star


def _notes(entry: Optional[CorpusEntry], row: BenchRow) -> str:
    notes = []
    if entry is not None and entry.note:
        notes.append(entry.note)
    if row.status == SolveStatus.OPTIMAL_INACCURATE.value:
        notes.append("reduced solver accuracy")
    reference = PUBLISHED_TABLE.get(row.instance)
    if reference is None or row.lb is None:
        return "; ".join(notes)
    published = reference.row(row.level)
    if abs(row.lb - published.lb) > LB_DEVIATION_RTOL * abs(published.lb):
        notes.append(f"deviation: LB {row.lb:.6g} vs published {published.lb:.6g}")
    counts = (row.n_vars, row.n_linear_constraints, row.n_exp_cones)
    if counts != published.counts:
        notes.append(f"deviation: counts {counts} vs published {published.counts}")
    return "; ".join(notes)


def relax_row(
    problem: SgpProblem,
    level: RelaxLevel,
    entry: Optional[CorpusEntry] = None,
    options: Optional[RelaxOptions] = None,
    settings: Optional[SolverSettings] = None,
    dump_path: Optional[str] = None,
) -> BenchRow:
    """Build, solve and summarize one relaxation"""
    cs = concise(problem, mode=ObjectiveMode.AUTO)
    artifact = build_relaxation(cs, level, options)
    if dump_path:
        with open(dump_path, "w", encoding="utf-8") as handle:
            handle.write(write_conic(artifact.problem))
        logger.info(f"💾 Conic dump written to {dump_path}")
    n_vars, n_linear, n_exp = relaxation_counts(artifact)
    result = solve(artifact.problem, settings)
    row = BenchRow(
        instance=problem.name,
        level=level,
        n_vars=n_vars,
        n_linear_constraints=n_linear,
        n_exp_cones=n_exp,
        solve_time_s=round(result.solve_time_s, 1),
        status=result.status.value,
    )
    z_star = entry.known_optimum if entry is not None else None
    if result.status.has_solution:
        row.lb = result.objective + artifact.offset
        if z_star is not None:
            row.z_star = z_star
            row.rgap_pct = rgap(z_star, row.lb)
    row.note = _notes(entry, row)
    return row


def bench_rows(
    include_all: bool = False,
    only: Iterable[str] = (),
    settings: Optional[SolverSettings] = None,
) -> List[BenchRow]:
    """Rows for every selected instance and both levels, in corpus order"""
    selected = {name.upper() for name in only}
    rows: List[BenchRow] = []
    for entry in builtin_corpus():
        if not include_all and entry.name not in TABLE_INSTANCES:
            continue
        if selected and entry.name.upper() not in selected:
            continue
        for level in (RelaxLevel.ECPR, RelaxLevel.SECPR):
            try:
                row = relax_row(entry.problem, level, entry, settings=settings)
            except SgpRelaxError as e:
                logger.error(f"❌ {entry.name} {level.value}: {e}")
                row = BenchRow(instance=entry.name, level=level, status="Error", note=str(e))
            rows.append(row)
            logger.info(
                f"📊 {row.instance} {row.level.value}: LB={row.lb} rgap={row.rgap_pct} "
                f"status={row.status}"
            )
    return rows


def bench_frame(rows: List[BenchRow]) -> pd.DataFrame:
    frame = pd.DataFrame([row.model_dump(mode="json") for row in rows], columns=BENCH_COLUMNS)
    return frame


def render(rows: List[BenchRow], output_format: OutputFormat = OutputFormat.TABLE) -> str:
    frame = bench_frame(rows)
    if output_format == OutputFormat.CSV:
        return frame.to_csv(index=False, float_format="%.10g")
    if frame.empty:
        return "(no rows)\n"
    return frame.to_string(index=False, float_format=lambda v: f"{v:.6g}") + "\n"


def sequential_summary(
    include_all: bool = True,
    only: Iterable[str] = (),
    settings: Optional[SeqSettings] = None,
) -> pd.DataFrame:
    """Iteration count, final objective and wall time of the sequential run per instance"""
    selected = {name.upper() for name in only}
    rows = []
    for entry in builtin_corpus():
        if not include_all and entry.name not in TABLE_INSTANCES:
            continue
        if selected and entry.name.upper() not in selected:
            continue
        started = time.perf_counter()
        row = {"instance": entry.name, "z_star": entry.known_optimum, "note": ""}
        try:
            result = sequential.run(entry.problem, settings)
            row.update(
                status=result.status.value,
                objective=result.objective,
                iterations=result.iterations,
            )
        except SgpRelaxError as e:
            logger.error(f"❌ Sequential run on {entry.name} failed: {e}")
            row.update(status=type(e).__name__, objective=None, iterations=None, note=str(e))
        row["time_s"] = round(time.perf_counter() - started, 1)
        rows.append(row)
    return pd.DataFrame(rows, columns=SEQ_SUMMARY_COLUMNS)
