"""
sgprelax: exponential-conic relaxations of signomial programs
"""
from sgprelax.model import SgpProblem, check_feasible, evaluate
from sgprelax.parser import parse_problem
from sgprelax.reformulate import concise
from sgprelax.relax import build_ecpr, build_relaxation, build_secpr, lift_point, recover
from sgprelax.schemas import CutFamily, RelaxLevel, SeqSettings, SolverSettings, SolveStatus
from sgprelax.sequential import run as run_sequential
from sgprelax.solver import solve

__version__ = "0.1.0"

__all__ = [
    "SgpProblem",
    "check_feasible",
    "evaluate",
    "parse_problem",
    "concise",
    "build_ecpr",
    "build_secpr",
    "build_relaxation",
    "lift_point",
    "recover",
    "CutFamily",
    "RelaxLevel",
    "SeqSettings",
    "SolverSettings",
    "SolveStatus",
    "run_sequential",
    "solve",
]
