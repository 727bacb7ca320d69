"""
Pydantic schemas and enums shared across sgprelax
"""
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator


class ConeKind(str, Enum):
    """Cone types understood by the conic solver"""
    ZERO = "zero"
    NONNEG = "nonneg"
    EXP = "exp"


class SolveStatus(str, Enum):
    """Terminal status of a conic solve"""
    OPTIMAL = "Optimal"
    OPTIMAL_INACCURATE = "OptimalInaccurate"
    PRIMAL_INFEASIBLE = "PrimalInfeasible"
    DUAL_INFEASIBLE = "DualInfeasible"
    MAX_ITERS = "MaxIters"
    TIME_LIMIT = "TimeLimit"

    @property
    def has_solution(self) -> bool:
        """Optimal, or optimal only to the reduced tolerance after a stall"""
        return self in (SolveStatus.OPTIMAL, SolveStatus.OPTIMAL_INACCURATE)


class SolverMethod(str, Enum):
    """Algorithm behind solve()"""
    IPM = "ipm"
    ADMM = "admm"


class RelaxLevel(str, Enum):
    """Relaxation strength"""
    ECPR = "ecpr"
    SECPR = "secpr"


class CutFamily(str, Enum):
    """Valid-inequality families of the strengthened relaxation"""
    VAR_HULL = "varhull"
    GAMMA_HULL = "gammahull"
    MONOMIAL_LB = "monolb"
    MONOMIAL_UB = "monoub"


DEFAULT_CUTS = frozenset({CutFamily.VAR_HULL, CutFamily.GAMMA_HULL})


class ObjectiveMode(str, Enum):
    """How the objective is moved into the concise form"""
    AUTO = "auto"
    GENERAL = "general"
    SINGLE_AUX = "single"
    LINEAR = "linear"


class RowKind(str, Enum):
    """Role of a linear row inside a relaxation"""
    BALANCE = "balance"
    LINK = "link"
    SECANT = "secant"
    BOUND = "bound"
    MONO_LB = "monolb"
    MONO_UB = "monoub"
    TANGENT = "tangent"
    AGGREGATE = "aggregate"


class SeqStatus(str, Enum):
    """Final status of a sequential run"""
    CONVERGED = "Converged"
    MAX_ITERS = "MaxIters"
    SUBPROBLEM_FAILED = "SubproblemFailed"


class StepNorm(str, Enum):
    L2 = "l2"
    INF = "inf"


class OutputFormat(str, Enum):
    TABLE = "table"
    CSV = "csv"


class SolverSettings(BaseModel):
    """Tolerances and limits of a conic solve"""
    eps_abs: float = 1e-8
    eps_rel: float = 1e-8
    max_iters: int = 100000
    time_limit: float = 60.0
    method: SolverMethod = SolverMethod.IPM
    infeas_tol: float = 1e-7

    @field_validator("eps_abs", "eps_rel", "time_limit", "infeas_tol")
    @classmethod
    def _positive(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("must be > 0")
        return value

    @field_validator("max_iters")
    @classmethod
    def _positive_iters(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be >= 1")
        return value


class SolveInfo(BaseModel):
    """Status and residuals of a finished solve"""
    status: SolveStatus
    objective: float
    iterations: int
    pres: float
    dres: float
    gap: float
    solve_time_s: float = 0.0


class SeqSettings(BaseModel):
    """Settings of the sequential ECP algorithm"""
    eps: float = 1e-6
    max_iters: int = 100
    w: float = 1e3
    w_prime: float = 1e3
    init_level: RelaxLevel = RelaxLevel.SECPR
    norm: StepNorm = StepNorm.L2
    penalty_check_iter: int = 20
    penalty_check_tol: float = 1e-4
    penalty_tol: float = 1e-6
    feas_tol: float = 1e-6
    subproblem_eps: float = 1e-12
    solver: SolverSettings = Field(default_factory=SolverSettings)

    @field_validator("eps", "w", "w_prime", "penalty_tol", "feas_tol", "subproblem_eps")
    @classmethod
    def _positive(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("must be > 0")
        return value


class IterRecord(BaseModel):
    """One row of the sequential trace"""
    iter: int
    x: List[float]
    x_tilde: List[float]
    gamma_tilde: List[float]
    objective: float
    penalty: float
    step_norm: float
    solve_time_s: float


class BenchRow(BaseModel):
    """One line of the relaxation benchmark table"""
    instance: str
    level: RelaxLevel
    lb: Optional[float] = None
    z_star: Optional[float] = None
    rgap_pct: Optional[float] = None
    n_vars: int = 0
    n_linear_constraints: int = 0
    n_exp_cones: int = 0
    solve_time_s: float = 0.0
    status: str = SolveStatus.OPTIMAL.value
    note: str = ""


class FixtureResult(BaseModel):
    """Outcome of one hard-coded relaxation fixture"""
    name: str
    expected: float
    objective: Optional[float] = None
    status: str
    passed: bool
    note: str = ""


class RunConfig(BaseModel):
    """Validated CLI invocation"""
    subcommand: str
    source: Optional[str] = None
    level: RelaxLevel = RelaxLevel.SECPR
    cuts: List[CutFamily] = Field(default_factory=lambda: sorted(DEFAULT_CUTS))
    override_bounds: Optional[str] = None
    dump_conic: Optional[str] = None
    solver: SolverSettings = Field(default_factory=SolverSettings)
    seq: SeqSettings = Field(default_factory=SeqSettings)
    trace: Optional[str] = None
    include_all: bool = False
    output_format: OutputFormat = OutputFormat.TABLE
    out: Optional[str] = None
    only: List[str] = Field(default_factory=list)
