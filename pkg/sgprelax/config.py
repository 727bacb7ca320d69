"""
Environment-driven configuration for sgprelax

Values are read from the process environment (optionally seeded from a
.env file) and fall back to the defaults below.
"""
import logging
import os

from dotenv import load_dotenv

from sgprelax.schemas import SeqSettings, SolverMethod, SolverSettings

load_dotenv()

LOG_LEVEL = os.getenv("SGPRELAX_LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

SOLVER_METHOD = os.getenv("SGPRELAX_SOLVER_METHOD", SolverMethod.IPM.value)
EPS_ABS = float(os.getenv("SGPRELAX_EPS_ABS", 1e-8))
EPS_REL = float(os.getenv("SGPRELAX_EPS_REL", 1e-8))
MAX_ITERS = int(os.getenv("SGPRELAX_MAX_ITERS", 100000))
TIME_LIMIT = float(os.getenv("SGPRELAX_TIME_LIMIT", 60.0))

SEQ_EPS = float(os.getenv("SGPRELAX_SEQ_EPS", 1e-6))
SEQ_MAX_ITERS = int(os.getenv("SGPRELAX_SEQ_MAX_ITERS", 100))
PENALTY = float(os.getenv("SGPRELAX_PENALTY", 1e3))

OUTPUT_DIR = os.getenv("SGPRELAX_OUTPUT_DIR", os.path.join("data", "bench"))

# Bounds wider than this ratio never feed secant cuts
BOUNDED_RATIO = 1e12


def configure_logging(verbose: bool = False) -> None:
    """Set up root logging for entry points"""
    level = logging.DEBUG if verbose else getattr(logging, LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT)


def get_solver_settings(**overrides) -> SolverSettings:
    """Solver settings from the environment, with keyword overrides"""
    values = {
        "eps_abs": EPS_ABS,
        "eps_rel": EPS_REL,
        "max_iters": MAX_ITERS,
        "time_limit": TIME_LIMIT,
        "method": SolverMethod(SOLVER_METHOD),
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return SolverSettings(**values)


def get_seq_settings(**overrides) -> SeqSettings:
    """Sequential-algorithm settings from the environment"""
    values = {
        "eps": SEQ_EPS,
        "max_iters": SEQ_MAX_ITERS,
        "w": PENALTY,
        "w_prime": PENALTY,
        "solver": get_solver_settings(),
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return SeqSettings(**values)
