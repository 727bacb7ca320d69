"""
Dagster Jobs for the sgprelax benchmark pipeline
"""
import os
import sys

# Add the project root to Python path
project_root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from dagster import AssetMaterialization, AssetSelection, OpExecutionContext
from dagster import define_asset_job, get_dagster_logger, job, op

from dagster_pipeline.assets.bench_assets import (
    bench_report,
    fixture_checks,
    relaxation_bounds,
    sequential_runs,
    sgp_corpus,
)
from sgprelax.cones import EXP_CENTRAL_POINT, in_exp_cone
from sgprelax.fixtures import p1_ecpr
from sgprelax.solver import solve

# Relaxation bounds plus the report built from them
bench_job = define_asset_job(
    name="bench_job",
    selection=AssetSelection.assets(sgp_corpus, relaxation_bounds, fixture_checks, bench_report),
    description="Solve every relaxation of the corpus and compare with the published table",
    tags={"pipeline": "bench", "stage": "relaxation"},
)

sequential_job = define_asset_job(
    name="sequential_job",
    selection=AssetSelection.assets(sgp_corpus, sequential_runs),
    description="Run the sequential algorithm on the reference instances",
    tags={"pipeline": "bench", "stage": "sequential"},
)

full_bench_job = define_asset_job(
    name="full_bench_job",
    selection=AssetSelection.all(),
    description="Every benchmark asset",
    tags={"pipeline": "bench", "stage": "complete"},
)


@op(
    description="Check the solver stack on a tiny known problem",
    tags={"type": "health_check"},
)
def solver_health_check(context: OpExecutionContext):
    """Solve the P1 ECPR fixture and confirm the cone central point"""
    logger = get_dagster_logger()

    health_status = {"cone_membership": False, "solver": False}
    try:
        health_status["cone_membership"] = bool(in_exp_cone(EXP_CENTRAL_POINT))
        result = solve(p1_ecpr())
        health_status["solver"] = result.status.has_solution and abs(result.objective - 7.5) < 1e-2
        logger.info(f"✅ Solver returned {result.status.value} objective {result.objective:.6f}")
    except Exception as e:
        logger.error(f"❌ Solver health check failed: {e}")

    healthy = sum(health_status.values())
    context.log_event(
        AssetMaterialization(
            asset_key="solver_health_status",
            metadata={
                "health_score": 100.0 * healthy / len(health_status),
                "component_status": str(health_status),
            },
        )
    )
    logger.info(f"📊 Solver health check completed: {healthy}/{len(health_status)} healthy")


@job(
    description="Solver health check",
    tags={"type": "monitoring"},
)
def health_check_job():
    """Job to check the solver stack"""
    solver_health_check()


ALL_JOBS = [
    bench_job,
    sequential_job,
    full_bench_job,
    health_check_job,
]
