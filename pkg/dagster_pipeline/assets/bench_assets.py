"""
Relaxation benchmark assets for the Dagster pipeline
"""
from typing import List

import pandas as pd
from dagster import AssetExecutionContext, MaterializeResult, MetadataValue, asset, get_dagster_logger

from sgprelax import bench, fixtures, sequential
from sgprelax.corpus import builtin_corpus, get_entry
from sgprelax.exceptions import SgpRelaxError
from sgprelax.schemas import OutputFormat, SeqStatus

SEQUENTIAL_INSTANCES = ("P1", "P8")


@asset(
    description="Built-in signomial corpus P1..P8",
    compute_kind="python",
    group_name="corpus",
)
def sgp_corpus(context: AssetExecutionContext) -> MaterializeResult:
    """Parse every built-in instance and summarize its size"""
    logger = get_dagster_logger()
    entries = builtin_corpus()
    sizes = [
        f"{e.name}: {e.problem.n_vars} vars, {len(e.problem.constraints)} constraints"
        for e in entries
    ]
    logger.info(f"📊 Loaded {len(entries)} instances")
    return MaterializeResult(
        metadata={
            "instances": MetadataValue.int(len(entries)),
            "sizes": MetadataValue.text("; ".join(sizes)),
            "status": MetadataValue.text("success"),
        }
    )


@asset(
    description="ECPR and s-ECPR lower bounds for P1..P7",
    compute_kind="conic",
    group_name="relaxations",
    deps=["sgp_corpus"],
    required_resource_keys={"solver_settings_resource", "bench_output_resource"},
)
def relaxation_bounds(context: AssetExecutionContext) -> MaterializeResult:
    """Solve every relaxation and write the bench table as CSV"""
    logger = get_dagster_logger()
    settings = context.resources.solver_settings_resource
    output_path = context.resources.bench_output_resource

    rows = bench.bench_rows(settings=settings)
    path = output_path("relaxation_bounds.csv")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(bench.render(rows, OutputFormat.CSV))

    solved = [r for r in rows if r.lb is not None]
    deviations = [f"{r.instance} {r.level.value}" for r in rows if "deviation" in r.note]
    logger.info(f"✅ {len(solved)}/{len(rows)} relaxations solved, table at {path}")
    return MaterializeResult(
        metadata={
            "rows": MetadataValue.int(len(rows)),
            "solved": MetadataValue.int(len(solved)),
            "deviations": MetadataValue.text(", ".join(deviations) or "none"),
            "path": MetadataValue.path(path),
            "preview": MetadataValue.md(f"```\n{bench.render(rows)}```"),
        }
    )


@asset(
    description="Sequential ECP runs on P1 and P8",
    compute_kind="conic",
    group_name="relaxations",
    deps=["sgp_corpus"],
    required_resource_keys={
        "solver_settings_resource",
        "seq_settings_resource",
        "bench_output_resource",
    },
)
def sequential_runs(context: AssetExecutionContext) -> MaterializeResult:
    """Run the sequential algorithm and keep one trace CSV per instance"""
    logger = get_dagster_logger()
    seq = context.resources.seq_settings_resource.model_copy(
        update={"solver": context.resources.solver_settings_resource}
    )
    output_path = context.resources.bench_output_resource

    summary: List[str] = []
    converged = 0
    for name in SEQUENTIAL_INSTANCES:
        entry = get_entry(name)
        try:
            result = sequential.run(entry.problem, seq)
        except SgpRelaxError as e:
            logger.error(f"❌ Sequential run on {name} failed: {e}")
            summary.append(f"{name}: error ({e})")
            continue
        sequential.write_trace_csv(result.trace, output_path(f"trace_{name}.csv"))
        if result.status == SeqStatus.CONVERGED:
            converged += 1
        summary.append(
            f"{name}: {result.status.value} obj={result.objective:.6g} "
            f"(known {entry.known_optimum}) iters={result.iterations}"
        )

    return MaterializeResult(
        metadata={
            "converged": MetadataValue.int(converged),
            "runs": MetadataValue.int(len(SEQUENTIAL_INSTANCES)),
            "summary": MetadataValue.text("; ".join(summary)),
        }
    )


@asset(
    description="Hard-coded relaxations checked against their published values",
    compute_kind="conic",
    group_name="validation",
    required_resource_keys={"solver_settings_resource"},
)
def fixture_checks(context: AssetExecutionContext) -> MaterializeResult:
    """Solve the hard-coded fixtures"""
    logger = get_dagster_logger()
    results = fixtures.run_fixtures(context.resources.solver_settings_resource)
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.warning(f"⚠️  Fixtures failed: {', '.join(failed)}")
    return MaterializeResult(
        metadata={
            "passed": MetadataValue.int(len(results) - len(failed)),
            "failed": MetadataValue.text(", ".join(failed) or "none"),
            "status": MetadataValue.text("success" if not failed else "failed"),
        }
    )


@asset(
    description="Bench table next to the published bounds",
    compute_kind="pandas",
    group_name="validation",
    deps=["relaxation_bounds", "fixture_checks"],
    required_resource_keys={"bench_output_resource"},
)
def bench_report(context: AssetExecutionContext) -> MaterializeResult:
    """Join the bench CSV with the published table and write a plain-text report"""
    logger = get_dagster_logger()
    output_path = context.resources.bench_output_resource
    frame = pd.read_csv(output_path("relaxation_bounds.csv"))

    published = bench.published_table()
    frame["published_lb"] = [
        published[i].row(lvl).lb if i in published else float("nan")
        for i, lvl in zip(frame["instance"], frame["level"])
    ]
    frame["lb_diff"] = frame["lb"] - frame["published_lb"]

    path = output_path("bench_report.txt")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(frame.to_string(index=False))
        handle.write("\n")
    logger.info(f"💾 Report written to {path}")
    return MaterializeResult(
        metadata={
            "max_abs_lb_diff": MetadataValue.float(float(frame["lb_diff"].abs().fillna(0.0).max())),
            "path": MetadataValue.path(path),
        }
    )
