"""
Dagster Resources for the sgprelax benchmark pipeline
"""
import os
from typing import Callable

from dagster import Field, get_dagster_logger, resource

from sgprelax.config import OUTPUT_DIR, get_seq_settings, get_solver_settings
from sgprelax.schemas import SeqSettings, SolverMethod, SolverSettings


@resource(
    config_schema={
        "tol": Field(float, is_required=False, description="Absolute and relative tolerance"),
        "method": Field(str, is_required=False, description="ipm or admm"),
        "time_limit": Field(float, is_required=False),
    },
    description="Conic solver settings, environment defaults plus run config overrides",
)
def solver_settings_resource(context) -> SolverSettings:
    """Solver settings resource"""
    logger = get_dagster_logger()
    config = context.resource_config or {}
    tol = config.get("tol")
    method = config.get("method")
    settings = get_solver_settings(
        eps_abs=tol,
        eps_rel=tol,
        method=SolverMethod(method) if method else None,
        time_limit=config.get("time_limit"),
    )
    logger.info(f"⚙️  Solver: {settings.method.value} eps_abs={settings.eps_abs:g}")
    return settings


@resource(
    config_schema={
        "eps": Field(float, is_required=False),
        "max_iters": Field(int, is_required=False),
        "penalty": Field(float, is_required=False),
    },
    description="Sequential algorithm settings",
)
def seq_settings_resource(context) -> SeqSettings:
    """Sequential settings resource"""
    config = context.resource_config or {}
    penalty = config.get("penalty")
    return get_seq_settings(
        eps=config.get("eps"),
        max_iters=config.get("max_iters"),
        w=penalty,
        w_prime=penalty,
    )


@resource(
    config_schema={"output_dir": Field(str, default_value=OUTPUT_DIR)},
    description="Directory that receives bench tables and traces",
)
def bench_output_resource(context) -> Callable[[str], str]:
    """Output location resource"""
    logger = get_dagster_logger()
    output_dir = context.resource_config["output_dir"]

    def output_path(filename: str) -> str:
        """Path inside the output directory, created on first use"""
        try:
            os.makedirs(output_dir, exist_ok=True)
        except OSError as e:
            logger.error(f"❌ Cannot create output directory {output_dir}: {e}")
            raise
        return os.path.join(output_dir, filename)

    return output_path
