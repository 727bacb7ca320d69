"""
Dagster Pipeline Definition for the sgprelax benchmark
"""
import os
import sys

# Add the project root to Python path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from dagster import Definitions

from dagster_pipeline.assets.bench_assets import (
    bench_report,
    fixture_checks,
    relaxation_bounds,
    sequential_runs,
    sgp_corpus,
)
from dagster_pipeline.jobs import ALL_JOBS
from dagster_pipeline.resources import (
    bench_output_resource,
    seq_settings_resource,
    solver_settings_resource,
)
from dagster_pipeline.schedules import ALL_SCHEDULES

all_assets = [
    sgp_corpus,
    relaxation_bounds,
    sequential_runs,
    fixture_checks,
    bench_report,
]

all_resources = {
    "solver_settings_resource": solver_settings_resource,
    "seq_settings_resource": seq_settings_resource,
    "bench_output_resource": bench_output_resource,
}

defs = Definitions(
    assets=all_assets,
    resources=all_resources,
    jobs=ALL_JOBS,
    schedules=ALL_SCHEDULES,
)
