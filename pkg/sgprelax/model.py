"""
Signomial geometric program model

Monomials, signomials, variable boxes and problems, plus evaluation,
feasibility checking and .sgp serialization.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from sgprelax.exceptions import (
    DuplicateVariable,
    MissingVariable,
    NonPositiveBound,
    NonPositivePoint,
    UndeclaredVariable,
)


@dataclass(frozen=True)
class VarId:
    """Variable handle: contiguous index plus a unique name"""
    index: int
    name: str


@dataclass(frozen=True)
class Monomial:
    """c * prod x_i^a_i, exponents kept as sorted (index, exponent) pairs"""
    coef: float
    exponents: Tuple[Tuple[int, float], ...] = ()

    def __post_init__(self):
        if self.coef == 0 or not math.isfinite(self.coef):
            raise ValueError(f"monomial coefficient must be finite and nonzero, got {self.coef}")
        cleaned: Dict[int, float] = {}
        for index, power in self.exponents:
            cleaned[index] = cleaned.get(index, 0.0) + float(power)
        pairs = tuple(sorted((i, a) for i, a in cleaned.items() if a != 0.0))
        object.__setattr__(self, "coef", float(self.coef))
        object.__setattr__(self, "exponents", pairs)

    @classmethod
    def from_map(cls, coef: float, exponents: Mapping[int, float]) -> "Monomial":
        return cls(coef, tuple(exponents.items()))

    @property
    def exps(self) -> Dict[int, float]:
        return dict(self.exponents)

    @property
    def is_constant(self) -> bool:
        return not self.exponents

    @property
    def linear_var(self) -> Optional[int]:
        """Index i when the monomial is c * x_i^1, else None"""
        if len(self.exponents) == 1 and self.exponents[0][1] == 1.0:
            return self.exponents[0][0]
        return None

    def variables(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self.exponents)

    def scaled(self, factor: float) -> "Monomial":
        return Monomial(self.coef * factor, self.exponents)

    def value(self, x: Sequence[float]) -> float:
        out = self.coef
        for i, a in self.exponents:
            out *= x[i] ** a
        return out

    def log_value(self, log_x: Sequence[float]) -> float:
        """log |value| from log-coordinates"""
        return math.log(abs(self.coef)) + sum(a * log_x[i] for i, a in self.exponents)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.coef * other.coef, self.exponents + other.exponents)

    def __neg__(self) -> "Monomial":
        return Monomial(-self.coef, self.exponents)


@dataclass(frozen=True)
class Signomial:
    """Signed sum of monomials; like terms merged and zeros dropped"""
    terms: Tuple[Monomial, ...] = ()

    def __post_init__(self):
        merged: Dict[Tuple[Tuple[int, float], ...], float] = {}
        for term in self.terms:
            merged[term.exponents] = merged.get(term.exponents, 0.0) + term.coef
        kept = tuple(Monomial(c, e) for e, c in merged.items() if c != 0.0)
        object.__setattr__(self, "terms", kept)

    @classmethod
    def of(cls, terms: Iterable[Monomial]) -> "Signomial":
        return cls(tuple(terms))

    @classmethod
    def constant(cls, value: float) -> "Signomial":
        return cls((Monomial(value),)) if value != 0 else cls()

    @property
    def positive_terms(self) -> List[Monomial]:
        return [t for t in self.terms if t.coef > 0]

    @property
    def negative_terms(self) -> List[Monomial]:
        return [t for t in self.terms if t.coef < 0]

    @property
    def is_posynomial(self) -> bool:
        return all(t.coef > 0 for t in self.terms)

    def variables(self) -> Tuple[int, ...]:
        return tuple(sorted({i for t in self.terms for i in t.variables()}))

    def value(self, x: Sequence[float]) -> float:
        return math.fsum(t.value(x) for t in self.terms)

    def values(self, points: np.ndarray) -> np.ndarray:
        """Vectorized evaluation over rows of an (N, n) array of positive points"""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(points.shape[0])
        for t in self.terms:
            col = np.full(points.shape[0], t.coef)
            for i, a in t.exponents:
                col = col * points[:, i] ** a
            out += col
        return out

    def __add__(self, other: "Signomial") -> "Signomial":
        return Signomial(self.terms + other.terms)

    def __neg__(self) -> "Signomial":
        return Signomial(tuple(-t for t in self.terms))

    def __sub__(self, other: "Signomial") -> "Signomial":
        return self + (-other)

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class Interval:
    """Box for one positive variable; either end may be absent"""
    lo: Optional[float] = None
    hi: Optional[float] = None

    def __post_init__(self):
        if self.lo is not None and self.lo <= 0:
            raise NonPositiveBound(f"lower bound must be > 0, got {self.lo}")
        if self.hi is not None and self.hi <= 0:
            raise NonPositiveBound(f"upper bound must be > 0, got {self.hi}")
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise NonPositiveBound(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def is_finite(self) -> bool:
        return self.lo is not None and self.hi is not None

    @property
    def is_fixed(self) -> bool:
        return self.is_finite and self.hi <= self.lo

    def contains(self, value: float, tol: float = 0.0) -> bool:
        if self.lo is not None and value < self.lo - tol:
            return False
        if self.hi is not None and value > self.hi + tol:
            return False
        return True

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class Constraint:
    """lhs <= rhs"""
    label: str
    lhs: Signomial
    rhs: Signomial

    def violation(self, x: Sequence[float]) -> float:
        return max(0.0, self.lhs.value(x) - self.rhs.value(x))


@dataclass(frozen=True)
class SgpProblem:
    """Signomial program: minimize objective subject to lhs <= rhs rows"""
    name: str
    vars: Tuple[Tuple[VarId, Interval], ...]
    objective: Signomial
    constraints: Tuple[Constraint, ...] = ()

    def __post_init__(self):
        if not self.vars:
            raise UndeclaredVariable("problem declares no variables")
        seen = set()
        for position, (var, _) in enumerate(self.vars):
            if var.index != position:
                raise ValueError(f"variable {var.name} has index {var.index}, expected {position}")
            if var.name in seen:
                raise DuplicateVariable(f"variable {var.name} declared twice")
            seen.add(var.name)
        n = len(self.vars)
        for where, sig in [("objective", self.objective)] + [
            (c.label, s) for c in self.constraints for s in (c.lhs, c.rhs)
        ]:
            for i in sig.variables():
                if i >= n:
                    raise UndeclaredVariable(f"{where} references undeclared variable #{i}")

    @property
    def n_vars(self) -> int:
        return len(self.vars)

    @property
    def var_names(self) -> List[str]:
        return [v.name for v, _ in self.vars]

    @property
    def bounds(self) -> List[Interval]:
        return [b for _, b in self.vars]

    def var(self, name: str) -> VarId:
        for v, _ in self.vars:
            if v.name == name:
                return v
        raise UndeclaredVariable(f"no variable named {name}")

    def point(self, values: Union[Mapping, Sequence[float], np.ndarray]) -> np.ndarray:
        return as_point(values, self.n_vars, self.var_names)

    def with_bounds(self, bounds: Sequence[Interval]) -> "SgpProblem":
        return SgpProblem(
            self.name,
            tuple((v, b) for (v, _), b in zip(self.vars, bounds)),
            self.objective,
            self.constraints,
        )


def as_point(
    values: Union[Mapping, Sequence[float], np.ndarray],
    n: int,
    names: Optional[Sequence[str]] = None,
) -> np.ndarray:
    """Normalize a point given as sequence or mapping (VarId, index or name keys)"""
    if isinstance(values, Mapping):
        out = np.full(n, np.nan)
        for key, val in values.items():
            if isinstance(key, VarId):
                idx = key.index
            elif isinstance(key, str):
                if names is None or key not in names:
                    raise MissingVariable(f"unknown variable {key}")
                idx = list(names).index(key)
            else:
                idx = int(key)
            out[idx] = float(val)
        return out
    return np.asarray(values, dtype=float)


def evaluate(
    s: Signomial,
    point: Union[Mapping, Sequence[float], np.ndarray],
    names: Optional[Sequence[str]] = None,
) -> float:
    """Exact signed sum of the monomial values of s at point

    Name keys in a mapping point resolve through names, e.g. SgpProblem.var_names.
    """
    needed = s.variables()
    n = (max(needed) + 1) if needed else 0
    if isinstance(point, Mapping):
        x = as_point(point, max(n, _mapping_extent(point, names)), names)
    else:
        x = np.asarray(point, dtype=float)
    for i in needed:
        if i >= len(x) or np.isnan(x[i]):
            raise MissingVariable(f"point has no value for variable #{i}")
        if x[i] <= 0:
            raise NonPositivePoint(f"variable #{i} must be > 0, got {x[i]}")
    return s.value(x)


def _mapping_extent(point: Mapping, names: Optional[Sequence[str]] = None) -> int:
    extent = len(names) if names is not None else 0
    for key in point:
        if isinstance(key, VarId):
            extent = max(extent, key.index + 1)
        elif isinstance(key, int):
            extent = max(extent, key + 1)
    return extent


@dataclass
class FeasibilityReport:
    """Per-constraint and per-bound violations at a point"""
    constraint_violations: Dict[str, float] = field(default_factory=dict)
    bound_violations: Dict[str, float] = field(default_factory=dict)
    tol: float = 1e-8

    @property
    def feasible(self) -> bool:
        return self.max_violation <= self.tol

    @property
    def max_violation(self) -> float:
        values = list(self.constraint_violations.values()) + list(
            self.bound_violations.values()
        )
        return max(values, default=0.0)


def check_feasible(
    p: SgpProblem, point: Union[Mapping, Sequence[float], np.ndarray], tol: float = 1e-8
) -> FeasibilityReport:
    """Constraint and bound violations of point for problem p"""
    if tol <= 0:
        raise ValueError("tol must be > 0")
    x = p.point(point)
    if len(x) != p.n_vars or np.any(np.isnan(x)):
        raise MissingVariable(f"point must give all {p.n_vars} variables")
    if np.any(x <= 0):
        raise NonPositivePoint("all coordinates must be > 0")
    report = FeasibilityReport(tol=tol)
    for c in p.constraints:
        report.constraint_violations[c.label] = c.violation(x)
    for (var, box), value in zip(p.vars, x):
        below = (box.lo - value) if box.lo is not None else 0.0
        above = (value - box.hi) if box.hi is not None else 0.0
        report.bound_violations[var.name] = max(0.0, below, above)
    return report


def _format_number(value: float) -> str:
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def format_monomial(m: Monomial, names: Sequence[str], leading: bool) -> str:
    """Render a monomial with its sign (' + ' / ' - ' separators after the first term)"""
    sign = "-" if m.coef < 0 else "+"
    magnitude = abs(m.coef)
    factors = []
    for i, a in m.exponents:
        if a == 1.0:
            factors.append(names[i])
        elif a < 0:
            factors.append(f"{names[i]}^({_format_number(a)})")
        else:
            factors.append(f"{names[i]}^{_format_number(a)}")
    if not factors:
        body = _format_number(magnitude)
    elif magnitude == 1.0:
        body = "*".join(factors)
    else:
        body = "*".join([_format_number(magnitude)] + factors)
    if leading:
        return body if sign == "+" else f"-{body}"
    return f" {sign} {body}"


def format_signomial(s: Signomial, names: Sequence[str]) -> str:
    if not s.terms:
        return "0"
    return "".join(format_monomial(t, names, k == 0) for k, t in enumerate(s.terms))


def serialize(p: SgpProblem) -> str:
    """Write p in .sgp text form"""
    names = p.var_names
    lines = [f"problem {p.name}"]
    for var, box in p.vars:
        if box.is_finite:
            lines.append(f"var {var.name} in [{_format_number(box.lo)}, {_format_number(box.hi)}]")
        else:
            lines.append(f"var {var.name}")
    lines.append(f"minimize {format_signomial(p.objective, names)}")
    if p.constraints:
        lines.append("subject to")
        for c in p.constraints:
            lines.append(
                f"  {c.label}: {format_signomial(c.lhs, names)} <= {format_signomial(c.rhs, names)}"
            )
    return "\n".join(lines) + "\n"
