"""
Exception hierarchy for sgprelax

Every error carries the process exit code the CLI returns for it.
"""
from typing import Optional


class SgpRelaxError(Exception):
    """Base class for all sgprelax errors"""

    exit_code = 1


# Input / parse errors (exit 1)

class SgpSyntaxError(SgpRelaxError):
    """Malformed .sgp text"""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class NonPositiveBound(SgpRelaxError):
    """Variable bound violates 0 < lo <= hi"""


class UndeclaredVariable(SgpRelaxError):
    """Expression references a variable that was never declared"""


class DuplicateVariable(SgpRelaxError):
    """Variable declared twice"""


class MissingVariable(SgpRelaxError):
    """Evaluation point lacks a variable used by the expression"""


class NonPositivePoint(SgpRelaxError):
    """Evaluation point has a non-positive coordinate"""


class InfeasibleConstant(SgpRelaxError):
    """Constraint reduces to a positive constant <= 0"""


class InfeasibleInput(SgpRelaxError):
    """Point handed to lift_point is not feasible"""


class EmptyPositiveSide(SgpRelaxError):
    """Constraint reduces to 0 <= posynomial (vacuous)"""


class DegenerateInterval(SgpRelaxError):
    """Interval too narrow for a secant cut; fix the variable instead"""


# Solver errors (exit 2)

class SolverError(SgpRelaxError):
    exit_code = 2


class DimensionMismatch(SolverError):
    """Conic data with inconsistent shapes"""


class NonFiniteData(SolverError):
    """Conic data containing NaN or inf"""


class BadStatus(SolverError):
    """Solution requested from a solve that finished without one"""

    def __init__(self, status: str, message: Optional[str] = None):
        super().__init__(message or f"solver finished with status {status}")
        self.status = status


class SubproblemFailed(SolverError):
    """Sequential subproblem solve finished without a solution"""

    def __init__(self, status: str, iteration: int):
        super().__init__(f"subproblem {iteration} finished with status {status}")
        self.status = status
        self.iteration = iteration
        self.trace = None


# Sequential errors (exit 3)

class NotConverged(SgpRelaxError):
    exit_code = 3
