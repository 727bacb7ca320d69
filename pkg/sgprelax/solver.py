"""
Conic solver for zero, nonnegative and exponential cones

Two methods share one front end:

- ``ipm``: homogeneous self-dual interior point method driven by the
  logarithmic barrier of the exponential cone (predictor and centering
  directions from one factorization, combined step with a neighborhood
  check).
- ``admm``: operator splitting on the homogeneous self-dual embedding;
  the only cone operation it needs is Euclidean projection.

Data are equilibrated (one row scale per exponential block) before the
solve and all residuals are reported on the original data.
A run that stalls or hits its iteration cap with residuals inside the
reduced tolerance (1e-6) reports OptimalInaccurate, never Optimal.
"""
import logging
import time
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from sgprelax.cones import (
    EXP_CENTRAL_POINT,
    dual_exp_interior,
    exp_barrier,
    exp_interior,
    project_dual_exp,
)
from sgprelax.conic import ConicProblem
from sgprelax.schemas import ConeKind, SolveInfo, SolverMethod, SolverSettings, SolveStatus

logger = logging.getLogger(__name__)

ALPHA_SCHEDULE = (
    0.9999, 0.999, 0.99, 0.97, 0.95, 0.9, 0.85, 0.8, 0.7,
    0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.05, 0.01, 0.0,
)
NEIGHBORHOOD = 0.95
STATIC_REG = 1e-10
REFINE_STEPS = 3
IPM_ITER_CAP = 500
STALL_ITERS = 5
STALL_RATIO = 0.999
EPS_REDUCED = 1e-6
RUIZ_PASSES = 15
SCALE_RANGE = (1e-4, 1e4)


@dataclass(frozen=True)
class SolveResult:
    """Primal/dual pair in the row order of the input problem"""
    status: SolveStatus
    x: np.ndarray
    s: np.ndarray
    y: np.ndarray
    objective: float
    dual_objective: float
    pres: float
    dres: float
    gap: float
    iterations: int
    solve_time_s: float

    @property
    def primal(self) -> np.ndarray:
        return self.x

    @property
    def dual(self) -> np.ndarray:
        return self.y

    @property
    def residuals(self) -> Tuple[float, float, float]:
        return self.pres, self.dres, self.gap

    @property
    def info(self) -> SolveInfo:
        return SolveInfo(
            status=self.status,
            objective=self.objective,
            iterations=self.iterations,
            pres=self.pres,
            dres=self.dres,
            gap=self.gap,
            solve_time_s=self.solve_time_s,
        )


@dataclass
class _Data:
    """Rows regrouped as equalities (A, b) and cone rows (G, h), equilibrated"""
    A: sp.csr_matrix
    b: np.ndarray
    G: sp.csr_matrix
    h: np.ndarray
    c: np.ndarray
    n_nonneg: int
    n_exp: int
    D: np.ndarray
    E_eq: np.ndarray
    E_cone: np.ndarray
    perm: np.ndarray
    raw: "_Data" = None

    @property
    def n(self) -> int:
        return self.c.size

    @property
    def p(self) -> int:
        return self.b.size

    @property
    def m(self) -> int:
        return self.h.size


def _partition(problem: ConicProblem) -> Tuple[np.ndarray, int, int, int]:
    kinds = problem.row_cone_kinds()
    zero = np.flatnonzero(kinds == ConeKind.ZERO.value)
    nonneg = np.flatnonzero(kinds == ConeKind.NONNEG.value)
    exp = np.flatnonzero(kinds == ConeKind.EXP.value)
    return np.concatenate([zero, nonneg, exp]).astype(int), zero.size, nonneg.size, exp.size // 3


def _row_max(M: sp.csr_matrix) -> np.ndarray:
    if M.shape[1] == 0 or M.nnz == 0:
        return np.zeros(M.shape[0])
    return np.asarray(abs(M).max(axis=1).todense()).ravel()


def _col_max(M: sp.csr_matrix) -> np.ndarray:
    if M.shape[0] == 0 or M.nnz == 0:
        return np.zeros(M.shape[1])
    return np.asarray(abs(M).max(axis=0).todense()).ravel()


def _equilibrate(M: sp.csr_matrix, first_exp_row: int, n_exp: int) -> Tuple[np.ndarray, np.ndarray]:
    """Ruiz scaling; every exponential block shares one row scale"""
    m, n = M.shape
    D = np.ones(n)
    E = np.ones(m)
    S = M.copy()
    for _ in range(RUIZ_PASSES):
        col = _col_max(S)
        row = _row_max(S)
        if n_exp:
            block = row[first_exp_row:].reshape(n_exp, 3).max(axis=1)
            row[first_exp_row:] = np.repeat(block, 3)
        dc = 1.0 / np.sqrt(np.where(col > 0, col, 1.0))
        dr = 1.0 / np.sqrt(np.where(row > 0, row, 1.0))
        D *= dc
        E *= dr
        S = sp.diags(dr) @ S @ sp.diags(dc)
    return np.clip(D, *SCALE_RANGE), np.clip(E, *SCALE_RANGE)


def _prepare(problem: ConicProblem) -> _Data:
    perm, p, n_nonneg, n_exp = _partition(problem)
    M = problem.A.tocsr()[perm]
    rhs = problem.b[perm]
    D, E = _equilibrate(M, p + n_nonneg, n_exp)
    S = (sp.diags(E) @ M @ sp.diags(D)).tocsr()
    raw = _Data(
        A=M[:p], b=rhs[:p], G=M[p:], h=rhs[p:], c=problem.c.copy(),
        n_nonneg=n_nonneg, n_exp=n_exp, D=np.ones_like(D), E_eq=np.ones(p),
        E_cone=np.ones(M.shape[0] - p), perm=perm,
    )
    return _Data(
        A=S[:p], b=E[:p] * rhs[:p], G=S[p:], h=E[p:] * rhs[p:], c=D * problem.c,
        n_nonneg=n_nonneg, n_exp=n_exp, D=D, E_eq=E[:p], E_cone=E[p:], perm=perm, raw=raw,
    )


@dataclass
class _Measure:
    pobj: float
    dobj: float
    pres: float
    dres: float
    gap: float


def _measure(raw: _Data, x: np.ndarray, y: np.ndarray, z: np.ndarray, s: np.ndarray) -> _Measure:
    """Normalized residuals of a candidate solution on unscaled data"""
    norm_b = max(np.max(np.abs(raw.b), initial=0.0), np.max(np.abs(raw.h), initial=0.0))
    r_eq = raw.A @ x - raw.b
    r_cone = raw.G @ x + s - raw.h
    pres = max(np.max(np.abs(r_eq), initial=0.0), np.max(np.abs(r_cone), initial=0.0)) / (1 + norm_b)
    r_dual = raw.A.T @ y + raw.G.T @ z + raw.c
    dres = np.max(np.abs(r_dual), initial=0.0) / (1 + np.max(np.abs(raw.c), initial=0.0))
    pobj = float(raw.c @ x)
    dobj = float(-(raw.b @ y) - (raw.h @ z))
    gap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
    return _Measure(pobj, dobj, float(pres), float(dres), float(gap))


def _converged(meas: _Measure, settings: SolverSettings, eps: Optional[float] = None) -> bool:
    tol = eps if eps is not None else settings.eps_rel
    gap_abs = abs(meas.pobj - meas.dobj)
    gap_ok = gap_abs <= settings.eps_abs + tol * (abs(meas.pobj) + abs(meas.dobj)) or meas.gap <= tol
    return meas.pres <= tol and meas.dres <= tol and gap_ok


def _primal_infeasible(raw: _Data, y: np.ndarray, z: np.ndarray, tol: float) -> bool:
    certificate = float(raw.b @ y + raw.h @ z)
    if certificate >= 0:
        return False
    residual = np.max(np.abs(raw.A.T @ y + raw.G.T @ z), initial=0.0)
    return residual <= tol * abs(certificate)


def _dual_infeasible(raw: _Data, x: np.ndarray, s: np.ndarray, tol: float) -> bool:
    certificate = float(raw.c @ x)
    if certificate >= 0:
        return False
    residual = max(
        np.max(np.abs(raw.A @ x), initial=0.0), np.max(np.abs(raw.G @ x + s), initial=0.0)
    )
    return residual <= tol * abs(certificate)


class _InteriorPoint:
    """Homogeneous self-dual interior point iterations on equilibrated data"""

    def __init__(self, data: _Data, settings: SolverSettings, start: float):
        self.data = data
        self.settings = settings
        self.start = start
        n, p, m = data.n, data.p, data.m
        self.k1 = data.n_nonneg
        self.exp_rows = np.arange(self.k1, m).reshape(data.n_exp, 3)
        self.nu = self.k1 + 3 * data.n_exp
        self.ox, self.oy, self.oz = 0, n, n + p
        self.os = n + p + m
        self.ot = n + p + 2 * m
        self.ok = self.ot + 1
        self.N = self.ok + 1
        self._static = self._static_triplets()
        hr, hc = [np.arange(self.k1)], [np.arange(self.k1)]
        for block in self.exp_rows:
            hr.append(np.repeat(block, 3))
            hc.append(np.tile(block, 3))
        self.h_rows = np.concatenate(hr).astype(int)
        self.h_cols = np.concatenate(hc).astype(int)

    def _static_triplets(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        d = self.data
        n, p, m = d.n, d.p, d.m
        A, G = d.A.tocoo(), d.G.tocoo()
        rows, cols, vals = [], [], []

        def put(r, c, v):
            rows.append(np.asarray(r, dtype=int).ravel())
            cols.append(np.asarray(c, dtype=int).ravel())
            vals.append(np.asarray(v, dtype=float).ravel())

        ar, ac = np.arange, np.full
        # r1: A'dy + G'dz + c dtau
        put(self.ox + A.col, self.oy + A.row, A.data)
        put(self.ox + G.col, self.oz + G.row, G.data)
        put(self.ox + ar(n), ac(n, self.ot), d.c)
        # r2: -A dx + b dtau
        put(self.oy + A.row, self.ox + A.col, -A.data)
        put(self.oy + ar(p), ac(p, self.ot), d.b)
        # r3: -G dx + h dtau - ds
        put(self.oz + G.row, self.ox + G.col, -G.data)
        put(self.oz + ar(m), self.os + ar(m), -np.ones(m))
        put(self.oz + ar(m), ac(m, self.ot), d.h)
        # r4: -c'dx - b'dy - h'dz - dkappa
        put(ac(n, self.ot), self.ox + ar(n), -d.c)
        put(ac(p, self.ot), self.oy + ar(p), -d.b)
        put(ac(m, self.ot), self.oz + ar(m), -d.h)
        put([self.ot], [self.ok], [-1.0])
        # r5: dz + mu H ds
        put(self.os + ar(m), self.oz + ar(m), np.ones(m))
        return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)

    def _barrier(self, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        g = np.empty(self.data.m)
        g[: self.k1] = -1.0 / s[: self.k1]
        hvals = [1.0 / s[: self.k1] ** 2]
        if self.data.n_exp:
            _, ge, he = exp_barrier(s[self.exp_rows])
            g[self.exp_rows] = ge
            hvals.append(he.reshape(-1))
        return g, np.concatenate(hvals)

    def _matrix(self, mu: float, hvals: np.ndarray, tau: float, kappa: float, reg: float) -> sp.csc_matrix:
        r, c, v = self._static
        rows = [r, self.os + self.h_rows, [self.ok, self.ok]]
        cols = [c, self.os + self.h_cols, [self.ot, self.ok]]
        vals = [v, mu * hvals, [kappa, tau]]
        if reg:
            n, p = self.data.n, self.data.p
            rows += [self.ox + np.arange(n), self.oy + np.arange(p)]
            cols += [self.ox + np.arange(n), self.oy + np.arange(p)]
            vals += [np.full(n, reg), np.full(p, -reg)]
        rows = np.concatenate([np.asarray(a, dtype=int) for a in rows])
        cols = np.concatenate([np.asarray(a, dtype=int) for a in cols])
        vals = np.concatenate([np.asarray(a, dtype=float) for a in vals])
        return sp.csc_matrix((vals, (rows, cols)), shape=(self.N, self.N))

    def _split(self, vec: np.ndarray):
        return (
            vec[self.ox:self.oy], vec[self.oy:self.oz], vec[self.oz:self.os],
            vec[self.os:self.ot], vec[self.ot], vec[self.ok],
        )

    def _pack(self, x, y, z, s, tau, kappa) -> np.ndarray:
        return np.concatenate([x, y, z, s, [tau, kappa]])

    def _residuals(self, x, y, z, s, tau, kappa):
        d = self.data
        e1 = d.A.T @ y + d.G.T @ z + d.c * tau
        e2 = -(d.A @ x) + d.b * tau
        e3 = -(d.G @ x) + d.h * tau - s
        e4 = -(d.c @ x) - (d.b @ y) - (d.h @ z) - kappa
        return e1, e2, e3, e4

    def _in_neighborhood(self, vec: np.ndarray, eta: float) -> bool:
        x, y, z, s, tau, kappa = self._split(vec)
        if not (tau > 0 and kappa > 0):
            return False
        k1 = self.k1
        if np.any(s[:k1] <= 0) or np.any(z[:k1] <= 0):
            return False
        if self.data.n_exp:
            se, ze = s[self.exp_rows], z[self.exp_rows]
            if not (np.all(exp_interior(se)) and np.all(dual_exp_interior(ze))):
                return False
            if np.any(np.sum(se * ze, axis=1) <= 0):
                return False
        mu = (s @ z + tau * kappa) / (self.nu + 1)
        if not mu > 0:
            return False
        if k1 and np.max(np.abs(s[:k1] * z[:k1] / mu - 1.0)) > eta:
            return False
        if abs(tau * kappa / mu - 1.0) > eta:
            return False
        if self.data.n_exp:
            _, ge, he = exp_barrier(se)
            r = ze / mu + ge
            try:
                hinv_r = np.linalg.solve(he, r[..., None])[..., 0]
            except np.linalg.LinAlgError:
                return False
            prox = np.sqrt(np.maximum(np.sum(r * hinv_r, axis=1), 0.0))
            if np.max(prox) > eta:
                return False
        return True

    def _unscaled(self, vec: np.ndarray, divide: bool = True):
        x, y, z, s, tau, kappa = self._split(vec)
        d = self.data
        scale = tau if divide else 1.0
        return (
            d.D * x / scale, d.E_eq * y / scale, d.E_cone * z / scale, s / d.E_cone / scale,
        )

    def run(self):
        d, settings = self.data, self.settings
        m = d.m
        s0 = np.ones(m)
        if d.n_exp:
            s0[self.exp_rows] = EXP_CENTRAL_POINT
        cur = self._pack(np.zeros(d.n), np.zeros(d.p), s0.copy(), s0, 1.0, 1.0)
        status = SolveStatus.MAX_ITERS
        stalled = False
        flat = 0
        iters = 0
        max_iters = min(settings.max_iters, IPM_ITER_CAP)
        for iters in range(max_iters + 1):
            x, y, z, s = self._unscaled(cur)
            meas = _measure(d.raw, x, y, z, s)
            if _converged(meas, settings):
                return SolveStatus.OPTIMAL, cur, meas, iters
            xr, yr, zr, sr = self._unscaled(cur, divide=False)
            tau, kappa = cur[self.ot], cur[self.ok]
            if tau < kappa:
                if _primal_infeasible(d.raw, yr, zr, settings.infeas_tol):
                    return SolveStatus.PRIMAL_INFEASIBLE, cur, meas, iters
                if _dual_infeasible(d.raw, xr, sr, settings.infeas_tol):
                    return SolveStatus.DUAL_INFEASIBLE, cur, meas, iters
            if time.perf_counter() - self.start > settings.time_limit:
                return SolveStatus.TIME_LIMIT, cur, meas, iters
            if iters == max_iters:
                break
            nxt = self._step(cur)
            if nxt is None:
                stalled = True
                break
            flat = flat + 1 if self._mu(nxt) > STALL_RATIO * self._mu(cur) else 0
            cur = nxt
            if flat >= STALL_ITERS:
                stalled = True
                break
        x, y, z, s = self._unscaled(cur)
        meas = _measure(d.raw, x, y, z, s)
        if _converged(meas, settings, max(EPS_REDUCED, settings.eps_rel)):
            logger.info(
                f"🔧 Interior point stopped at reduced accuracy "
                f"(pres={meas.pres:.1e}, dres={meas.dres:.1e}, gap={meas.gap:.1e})"
            )
            status = SolveStatus.OPTIMAL_INACCURATE
        elif stalled:
            logger.warning("⚠️  Interior point made no progress; returning last iterate")
        return status, cur, meas, iters

    def _mu(self, vec: np.ndarray) -> float:
        _, _, z, s, tau, kappa = self._split(vec)
        return (s @ z + tau * kappa) / (self.nu + 1)

    def _solve(self, lu, K: sp.csc_matrix, rhs: np.ndarray) -> np.ndarray:
        sol = lu.solve(rhs)
        for _ in range(REFINE_STEPS):
            sol = sol + lu.solve(rhs - K @ sol)
        return sol

    def _step(self, cur: np.ndarray) -> Optional[np.ndarray]:
        x, y, z, s, tau, kappa = self._split(cur)
        mu = (s @ z + tau * kappa) / (self.nu + 1)
        g, hvals = self._barrier(s)
        K = self._matrix(mu, hvals, tau, kappa, 0.0)
        try:
            lu = spla.splu(self._matrix(mu, hvals, tau, kappa, STATIC_REG))
        except RuntimeError as e:
            logger.warning(f"⚠️  Newton system factorization failed: {e}")
            return None
        e1, e2, e3, e4 = self._residuals(x, y, z, s, tau, kappa)
        pred = self._solve(lu, K, self._order_rhs(-e1, -e2, -e3, -e4, -z, -tau * kappa))
        cent = self._solve(lu, K, self._order_rhs(0.0, 0.0, 0.0, 0.0, -z - mu * g, mu - tau * kappa))
        if not (np.all(np.isfinite(pred)) and np.all(np.isfinite(cent))):
            return None
        for alpha in ALPHA_SCHEDULE:
            cand = cur + alpha * pred + (1.0 - alpha) * cent
            if self._in_neighborhood(cand, NEIGHBORHOOD):
                return cand
        step = 0.5
        for _ in range(20):
            cand = cur + step * cent
            if self._in_neighborhood(cand, 0.99):
                return cand
            step *= 0.5
        return None

    def _order_rhs(self, r1, r2, r3, r4, r5, r6) -> np.ndarray:
        """Right-hand side laid out by equality row offsets"""
        rhs = np.zeros(self.N)
        rhs[self.ox:self.oy] = r1
        rhs[self.oy:self.oz] = r2
        rhs[self.oz:self.os] = r3
        rhs[self.ot] = r4
        rhs[self.os:self.ot] = r5
        rhs[self.ok] = r6
        return rhs


class _Splitting:
    """Operator splitting on the homogeneous self-dual embedding"""

    check_every = 10

    def __init__(self, data: _Data, settings: SolverSettings, start: float):
        self.data = data
        self.settings = settings
        self.start = start
        self.M = sp.vstack([data.A, data.G]).tocsc()
        self.q = np.concatenate([data.b, data.h])
        n, m = data.n, self.q.size
        self.n, self.m = n, m
        c_col = sp.csc_matrix(data.c.reshape(-1, 1))
        q_col = sp.csc_matrix(self.q.reshape(-1, 1))
        Q = sp.bmat(
            [
                [None, self.M.T, c_col],
                [-self.M, None, q_col],
                [-c_col.T, -q_col.T, None],
            ],
            format="csc",
        )
        self.lu = spla.splu(sp.identity(n + m + 1, format="csc") + Q)
        self.first_cone = data.p
        self.first_exp = data.p + data.n_nonneg

    def _project_u(self, u: np.ndarray) -> np.ndarray:
        n = self.n
        out = u.copy()
        y = out[n:n + self.m]
        y[self.first_cone:self.first_exp] = np.maximum(y[self.first_cone:self.first_exp], 0.0)
        for start in range(self.first_exp, self.m, 3):
            y[start:start + 3] = project_dual_exp(y[start:start + 3])
        out[-1] = max(out[-1], 0.0)
        return out

    def _unscaled(self, x, y, s):
        d = self.data
        p = d.p
        return d.D * x, d.E_eq * y[:p], d.E_cone * y[p:], s[p:] / d.E_cone

    def run(self):
        d, settings = self.data, self.settings
        n, m = self.n, self.m
        u = np.zeros(n + m + 1)
        u[-1] = 1.0
        v = np.zeros(n + m + 1)
        meas = _Measure(0.0, 0.0, np.inf, np.inf, np.inf)
        iters = 0
        for iters in range(1, settings.max_iters + 1):
            u_tilde = self.lu.solve(u + v)
            u = self._project_u(u_tilde - v)
            v = v - u_tilde + u
            if iters % self.check_every:
                continue
            tau = u[-1]
            x_raw, y_raw, s_raw = u[:n], u[n:n + m], v[n:n + m]
            if tau > 1e-12:
                x, y, z, s = self._unscaled(x_raw / tau, y_raw / tau, s_raw / tau)
                meas = _measure(d.raw, x, y, z, s)
                if _converged(meas, settings):
                    return SolveStatus.OPTIMAL, (x, y, z, s), meas, iters
            if tau <= 1e-6 * max(1.0, np.linalg.norm(u)):
                x, y, z, s = self._unscaled(x_raw, y_raw, s_raw)
                if _primal_infeasible(d.raw, y, z, settings.infeas_tol):
                    return SolveStatus.PRIMAL_INFEASIBLE, (x, y, z, s), meas, iters
                if _dual_infeasible(d.raw, x, s, settings.infeas_tol):
                    return SolveStatus.DUAL_INFEASIBLE, (x, y, z, s), meas, iters
            if time.perf_counter() - self.start > settings.time_limit:
                return SolveStatus.TIME_LIMIT, self._final(u, v), meas, iters
        final = self._final(u, v)
        if u[-1] > 1e-12:
            meas = _measure(d.raw, *final)
            if _converged(meas, settings, max(EPS_REDUCED, settings.eps_rel)):
                return SolveStatus.OPTIMAL_INACCURATE, final, meas, iters
        return SolveStatus.MAX_ITERS, final, meas, iters

    def _final(self, u, v):
        tau = max(u[-1], 1e-300)
        n, m = self.n, self.m
        return self._unscaled(u[:n] / tau, u[n:n + m] / tau, v[n:n + m] / tau)


def _assemble(problem: ConicProblem, data: _Data, x, y_eq, z, s_cone) -> Tuple[np.ndarray, np.ndarray]:
    y = np.zeros(problem.n_rows)
    s = np.zeros(problem.n_rows)
    y[data.perm] = np.concatenate([y_eq, z])
    s[data.perm] = np.concatenate([np.zeros(data.p), s_cone])
    return y, s


def solve(problem: ConicProblem, settings: Optional[SolverSettings] = None) -> SolveResult:
    """Solve min c'x s.t. Ax + s = b, s in K"""
    settings = settings or SolverSettings()
    problem.validate()
    start = time.perf_counter()
    data = _prepare(problem)
    logger.debug(
        f"🚀 Solving conic problem: {problem.n_vars} vars, {problem.n_rows} rows, "
        f"{data.n_exp} exp cones, method={settings.method.value}"
    )
    if settings.method == SolverMethod.ADMM:
        status, (x, y_eq, z, s_cone), meas, iters = _Splitting(data, settings, start).run()
    else:
        ipm = _InteriorPoint(data, settings, start)
        status, vec, meas, iters = ipm.run()
        divide = status not in (SolveStatus.PRIMAL_INFEASIBLE, SolveStatus.DUAL_INFEASIBLE)
        x, y_eq, z, s_cone = ipm._unscaled(vec, divide=divide)

    if status == SolveStatus.PRIMAL_INFEASIBLE:
        scale = abs(float(data.raw.b @ y_eq + data.raw.h @ z)) or 1.0
        y_eq, z = y_eq / scale, z / scale
        objective, dual_objective = np.inf, np.inf
    elif status == SolveStatus.DUAL_INFEASIBLE:
        scale = abs(float(data.raw.c @ x)) or 1.0
        x, s_cone = x / scale, s_cone / scale
        objective, dual_objective = -np.inf, -np.inf
    else:
        objective, dual_objective = meas.pobj, meas.dobj
    y, s = _assemble(problem, data, x, y_eq, z, s_cone)
    elapsed = time.perf_counter() - start
    result = SolveResult(
        status=status, x=x, s=s, y=y, objective=float(objective),
        dual_objective=float(dual_objective), pres=meas.pres, dres=meas.dres,
        gap=meas.gap, iterations=iters, solve_time_s=elapsed,
    )
    logger.debug(f"📊 {format_result_line(result)}")
    return result


def format_result_line(result: SolveResult) -> str:
    """status=<s> obj=<v> iters=<n> pres=<r> dres=<r> gap=<r>"""
    return (
        f"status={result.status.value} obj={result.objective:.10g} iters={result.iterations} "
        f"pres={result.pres:.3e} dres={result.dres:.3e} gap={result.gap:.3e}"
    )
