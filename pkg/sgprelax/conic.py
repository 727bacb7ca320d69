"""
Standard-form conic problems

    min c^T x   s.t.   A x + s = b,   s in K_1 x ... x K_p

with K_i a zero cone, a nonnegative orthant or the exponential cone
{(u, v, w): v exp(w / v) <= u, v > 0} (closure). Exponential blocks are
three consecutive rows ordered (u, v, w).
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from sgprelax.exceptions import DimensionMismatch, NonFiniteData, SgpSyntaxError
from sgprelax.schemas import ConeKind, RowKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConeSpec:
    kind: ConeKind
    dim: int

    def __post_init__(self):
        if self.kind == ConeKind.EXP and self.dim != 3:
            raise DimensionMismatch("exponential cone blocks have dimension 3")
        if self.dim < 1:
            raise DimensionMismatch("cone dimension must be >= 1")


@dataclass(frozen=True)
class ConicProblem:
    """Immutable conic data plus optional row/column annotations"""
    c: np.ndarray
    A: sp.csc_matrix
    b: np.ndarray
    cones: Tuple[ConeSpec, ...]
    row_kinds: Tuple[Optional[RowKind], ...] = ()
    var_names: Tuple[str, ...] = ()

    @property
    def n_vars(self) -> int:
        return self.A.shape[1]

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    @property
    def n_exp_cones(self) -> int:
        return sum(1 for cone in self.cones if cone.kind == ConeKind.EXP)

    @property
    def n_linear_constraints(self) -> int:
        """Linear rows that are not plain variable bounds"""
        kinds = self.row_cone_kinds()
        if not self.row_kinds:
            return int(np.sum(kinds != ConeKind.EXP.value))
        return sum(
            1
            for cone_kind, tag in zip(kinds, self.row_kinds)
            if cone_kind != ConeKind.EXP.value and tag != RowKind.BOUND
        )

    def row_cone_kinds(self) -> np.ndarray:
        return np.array([cone.kind.value for cone in self.cones for _ in range(cone.dim)])

    def validate(self) -> None:
        m, n = self.A.shape
        if self.c.shape != (n,) or self.b.shape != (m,):
            raise DimensionMismatch(
                f"c has shape {self.c.shape}, b {self.b.shape}, A {self.A.shape}"
            )
        if sum(cone.dim for cone in self.cones) != m:
            raise DimensionMismatch("cone dimensions do not cover the rows of A")
        if not (np.all(np.isfinite(self.c)) and np.all(np.isfinite(self.b))
                and np.all(np.isfinite(self.A.data))):
            raise NonFiniteData("conic data contains NaN or inf")


@dataclass
class _Row:
    coeffs: Dict[int, float]
    rhs: float
    cone: ConeKind
    kind: Optional[RowKind]


@dataclass
class ConicBuilder:
    """Incremental construction of a ConicProblem, rows in insertion order"""
    names: List[str] = field(default_factory=list)
    objective: Dict[int, float] = field(default_factory=dict)
    rows: List[_Row] = field(default_factory=list)
    exp_starts: List[int] = field(default_factory=list)

    def add_var(self, name: str, cost: float = 0.0) -> int:
        self.names.append(name)
        col = len(self.names) - 1
        if cost:
            self.objective[col] = cost
        return col

    def set_cost(self, col: int, cost: float) -> None:
        self.objective[col] = self.objective.get(col, 0.0) + cost

    def add_le(self, coeffs: Dict[int, float], rhs: float, kind: RowKind) -> int:
        """sum coeffs * x <= rhs"""
        self.rows.append(_Row(_clean(coeffs), float(rhs), ConeKind.NONNEG, kind))
        return len(self.rows) - 1

    def add_eq(self, coeffs: Dict[int, float], rhs: float, kind: RowKind) -> int:
        self.rows.append(_Row(_clean(coeffs), float(rhs), ConeKind.ZERO, kind))
        return len(self.rows) - 1

    def add_bounds(self, col: int, lo: Optional[float], hi: Optional[float]) -> None:
        if lo is not None:
            self.add_le({col: -1.0}, -lo, RowKind.BOUND)
        if hi is not None:
            self.add_le({col: 1.0}, hi, RowKind.BOUND)

    def add_exp_epigraph(self, t_col: int, w: Dict[int, float], w_const: float = 0.0) -> int:
        """exp(sum w * x + w_const) <= x[t_col] as one exponential block"""
        start = len(self.rows)
        self.rows.append(_Row({t_col: -1.0}, 0.0, ConeKind.EXP, None))
        self.rows.append(_Row({}, 1.0, ConeKind.EXP, None))
        self.rows.append(_Row({k: -v for k, v in _clean(w).items()}, float(w_const), ConeKind.EXP, None))
        self.exp_starts.append(start)
        return start

    def build(self) -> ConicProblem:
        n = len(self.names)
        data, ri, ci = [], [], []
        b = np.zeros(len(self.rows))
        for r, row in enumerate(self.rows):
            b[r] = row.rhs
            for col, val in row.coeffs.items():
                ri.append(r)
                ci.append(col)
                data.append(val)
        A = sp.csc_matrix((data, (ri, ci)), shape=(len(self.rows), n))
        c = np.zeros(n)
        for col, val in self.objective.items():
            c[col] = val
        problem = ConicProblem(
            c=c,
            A=A,
            b=b,
            cones=_compress_cones([row.cone for row in self.rows]),
            row_kinds=tuple(row.kind for row in self.rows),
            var_names=tuple(self.names),
        )
        problem.validate()
        return problem


def _clean(coeffs: Dict[int, float]) -> Dict[int, float]:
    return {int(k): float(v) for k, v in coeffs.items() if v != 0.0}


def _compress_cones(kinds: List[ConeKind]) -> Tuple[ConeSpec, ...]:
    cones: List[ConeSpec] = []
    r = 0
    while r < len(kinds):
        kind = kinds[r]
        if kind == ConeKind.EXP:
            cones.append(ConeSpec(kind, 3))
            r += 3
            continue
        end = r
        while end < len(kinds) and kinds[end] == kind:
            end += 1
        cones.append(ConeSpec(kind, end - r))
        r = end
    return tuple(cones)


def write_conic(problem: ConicProblem) -> str:
    """Conic dump: header, objective, triplets, rhs, cones in row order"""
    lines = [f"conic {problem.n_vars} {problem.n_rows}"]
    nz = np.flatnonzero(problem.c)
    lines.append("c " + " ".join(f"{i} {float(problem.c[i])!r}" for i in nz) if len(nz) else "c")
    coo = problem.A.tocoo()
    order = np.lexsort((coo.col, coo.row))
    for k in order:
        lines.append(f"A {coo.row[k]} {coo.col[k]} {float(coo.data[k])!r}")
    for r in np.flatnonzero(problem.b):
        lines.append(f"b {r} {float(problem.b[r])!r}")
    for cone in problem.cones:
        lines.append(f"cone {cone.kind.value} {cone.dim}")
    return "\n".join(lines) + "\n"


def read_conic(text: str) -> ConicProblem:
    """Parse the conic dump format"""
    n = m = None
    c_entries: List[Tuple[int, float]] = []
    triplets: List[Tuple[int, int, float]] = []
    b_entries: List[Tuple[int, float]] = []
    cones: List[ConeSpec] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        head = parts[0]
        try:
            if head == "conic":
                n, m = int(parts[1]), int(parts[2])
            elif head == "c":
                vals = parts[1:]
                c_entries.extend((int(vals[k]), float(vals[k + 1])) for k in range(0, len(vals), 2))
            elif head == "A":
                triplets.append((int(parts[1]), int(parts[2]), float(parts[3])))
            elif head == "b":
                b_entries.append((int(parts[1]), float(parts[2])))
            elif head == "cone":
                cones.append(ConeSpec(ConeKind(parts[1]), int(parts[2])))
            else:
                raise SgpSyntaxError(f"unknown record {head}", lineno)
        except (IndexError, ValueError) as e:
            raise SgpSyntaxError(f"malformed {head} record: {e}", lineno)
    if n is None:
        raise SgpSyntaxError("missing conic header", 1)
    c = np.zeros(n)
    for i, v in c_entries:
        c[i] = v
    b = np.zeros(m)
    for r, v in b_entries:
        b[r] = v
    if triplets:
        rows, cols, vals = zip(*triplets)
    else:
        rows, cols, vals = (), (), ()
    A = sp.csc_matrix((vals, (rows, cols)), shape=(m, n))
    problem = ConicProblem(c=c, A=A, b=b, cones=tuple(cones))
    problem.validate()
    return problem
