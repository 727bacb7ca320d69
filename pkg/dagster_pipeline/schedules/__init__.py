"""
Dagster Schedules for the sgprelax benchmark pipeline
"""
import os
import sys

# Add the project root to Python path
project_root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from datetime import datetime

from dagster import DefaultScheduleStatus, RunRequest, ScheduleEvaluationContext, SkipReason, schedule

from dagster_pipeline.jobs import bench_job, health_check_job, sequential_job

BENCH_TOL = float(os.getenv("SGPRELAX_BENCH_TOL", 1e-8))


@schedule(
    job=bench_job,
    cron_schedule="0 3 * * 1",  # Monday 3 AM
    default_status=DefaultScheduleStatus.RUNNING,
    description="Weekly relaxation benchmark",
)
def weekly_bench_schedule(context: ScheduleEvaluationContext):
    """Weekly bench run at the configured tolerance"""
    current_time = datetime.now()
    run_config = {
        "resources": {
            "solver_settings_resource": {"config": {"tol": BENCH_TOL}},
        }
    }
    return RunRequest(
        run_key=f"weekly_bench_{current_time.strftime('%Y%m%d')}",
        run_config=run_config,
        tags={
            "schedule": "weekly_bench",
            "date": current_time.strftime("%Y-%m-%d"),
            "type": "automated",
        },
    )


@schedule(
    job=sequential_job,
    cron_schedule="0 4 * * 1",  # Monday 4 AM
    default_status=DefaultScheduleStatus.STOPPED,
    description="Weekly sequential runs on P1 and P8",
)
def weekly_sequential_schedule(context: ScheduleEvaluationContext):
    """Sequential runs, skipped when disabled through the environment"""
    if os.getenv("SGPRELAX_SKIP_SEQUENTIAL", "").lower() in ("1", "true", "yes"):
        return SkipReason("Sequential runs disabled by SGPRELAX_SKIP_SEQUENTIAL")
    current_time = datetime.now()
    return RunRequest(
        run_key=f"weekly_sequential_{current_time.strftime('%Y%m%d')}",
        tags={"schedule": "weekly_sequential", "type": "automated"},
    )


@schedule(
    job=health_check_job,
    cron_schedule="0 6 * * *",  # 6 AM daily
    default_status=DefaultScheduleStatus.RUNNING,
    description="Daily solver health check",
)
def health_check_schedule(context: ScheduleEvaluationContext):
    """Daily solver health check"""
    current_time = datetime.now()
    return RunRequest(
        run_key=f"health_check_{current_time.strftime('%Y%m%d')}",
        tags={"schedule": "health_check", "type": "monitoring"},
    )


ALL_SCHEDULES = [
    weekly_bench_schedule,
    weekly_sequential_schedule,
    health_check_schedule,
]
