"""
Exponential cone oracles

K = cl{(u, v, w) : v exp(w / v) <= u, v > 0}
K* = cl{(u, v, w) : -w exp(v / w - 1) <= u, w < 0, u > 0}

Projection, membership tests and the logarithmic barrier
F(u, v, w) = -log(v log(u / v) - w) - log(u) - log(v) used by the
interior-point solver.
"""
import math
import warnings
from typing import Tuple

import numpy as np

ROOT_TOL = 1e-14
MAX_ROOT_ITERS = 200
RHO_CAP = 300.0

# Central point of the barrier: s = -grad F(s)
EXP_CENTRAL_POINT = np.array([1.290928, 0.805102, -0.827838])


def in_exp_cone(p: np.ndarray, tol: float = 0.0) -> bool:
    u, v, w = (float(x) for x in p)
    if v > 0:
        if u <= 0:
            return False
        # log form avoids overflow of exp(w / v)
        return math.log(v) + w / v <= math.log(u) + tol
    return abs(v) <= tol and u >= -tol and w <= tol


def in_polar_exp_cone(p: np.ndarray) -> bool:
    """p in -K*"""
    u, v, w = (float(x) for x in p)
    if w > 0:
        return u < 0 and math.log(w) + v / w - 1.0 <= math.log(-u)
    return w == 0 and u <= 0 and v <= 0


def _h(p: np.ndarray, rho: float) -> Tuple[float, float]:
    """Stationarity residual of the boundary projection along the ray family (e^rho, 1, rho)"""
    u0, v0, w0 = p
    e_pos = math.exp(rho)
    e_neg = math.exp(-rho)
    value = ((rho - 1.0) * w0 + v0) * e_pos - (w0 - rho * v0) * e_neg - (rho * (rho - 1.0) + 1.0) * u0
    slope = (rho * w0 + v0) * e_pos + (w0 - (rho - 1.0) * v0) * e_neg - (2.0 * rho - 1.0) * u0
    return value, slope


def _bracket(p: np.ndarray) -> Tuple[float, float, bool]:
    lo, hi = -1.0, 1.0
    f_lo, f_hi = _h(p, lo)[0], _h(p, hi)[0]
    while f_lo * f_hi > 0 and (lo > -RHO_CAP or hi < RHO_CAP):
        lo, hi = max(2.0 * lo, -RHO_CAP), min(2.0 * hi, RHO_CAP)
        f_lo, f_hi = _h(p, lo)[0], _h(p, hi)[0]
    return lo, hi, f_lo * f_hi <= 0


def _root(p: np.ndarray, lo: float, hi: float) -> float:
    """Safeguarded Newton with bisection fallback on a sign-changing [lo, hi]"""
    lo_sign = math.copysign(1.0, _h(p, lo)[0])
    rho = 0.5 * (lo + hi)
    for _ in range(MAX_ROOT_ITERS):
        value, slope = _h(p, rho)
        if value == 0.0:
            return rho
        if math.copysign(1.0, value) == lo_sign:
            lo = rho
        else:
            hi = rho
        step = rho - value / slope if slope != 0.0 else None
        if step is not None and abs(step - rho) <= ROOT_TOL * max(1.0, abs(rho)):
            return step
        rho = step if step is not None and lo < step < hi else 0.5 * (lo + hi)
        if hi - lo <= ROOT_TOL * max(1.0, abs(rho)):
            return rho
    warnings.warn("Reached maximum iteration in exponential cone projection")
    return rho


def project_exp(point: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the exponential cone"""
    p = np.asarray(point, dtype=float)
    u0, v0, w0 = p
    if in_exp_cone(p, tol=1e-15):
        return p.copy()
    if in_polar_exp_cone(p):
        return np.zeros(3)
    if v0 <= 0 and w0 <= 0:
        return np.array([max(u0, 0.0), 0.0, w0])

    candidates = [np.zeros(3), np.array([max(u0, 0.0), 0.0, min(w0, 0.0)])]
    lo, hi, found = _bracket(p)
    if found:
        rho = _root(p, lo, hi)
        ray = np.array([math.exp(rho), 1.0, rho])
        scale = max(0.0, float(p @ ray) / float(ray @ ray))
        candidates.append(scale * ray)
    distances = [float(np.linalg.norm(p - q)) for q in candidates]
    return candidates[int(np.argmin(distances))]


def project_dual_exp(point: np.ndarray) -> np.ndarray:
    """Projection onto K* via Moreau: z = P_K*(z) - P_K(-z)"""
    z = np.asarray(point, dtype=float)
    return z + project_exp(-z)


def dual_exp_membership(point: np.ndarray, tol: float = 1e-8) -> bool:
    """True when point lies within tol of K*"""
    z = np.asarray(point, dtype=float)
    return float(np.linalg.norm(project_exp(-z))) <= tol


# Interior-point oracles, vectorized over blocks of shape (k, 3)

def exp_interior(s: np.ndarray) -> np.ndarray:
    """Strict interior of K per block"""
    u, v, w = s[:, 0], s[:, 1], s[:, 2]
    ok = (u > 0) & (v > 0)
    psi = np.full(len(s), -1.0)
    psi[ok] = v[ok] * np.log(u[ok] / v[ok]) - w[ok]
    return ok & (psi > 0)


def dual_exp_interior(z: np.ndarray) -> np.ndarray:
    """Strict interior of K* per block"""
    u, v, w = z[:, 0], z[:, 1], z[:, 2]
    ok = (u > 0) & (w < 0)
    out = np.zeros(len(z), dtype=bool)
    out[ok] = np.log(u[ok]) > np.log(-w[ok]) + v[ok] / w[ok] - 1.0
    return out


def exp_barrier(s: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Barrier value, gradient and Hessian per block (s strictly interior)"""
    u, v, w = s[:, 0], s[:, 1], s[:, 2]
    ell = np.log(u / v)
    psi = v * ell - w
    value = -np.log(psi) - np.log(u) - np.log(v)

    dpsi_u = v / u
    dpsi_v = ell - 1.0
    grad = np.empty_like(s)
    grad[:, 0] = -dpsi_u / psi - 1.0 / u
    grad[:, 1] = -dpsi_v / psi - 1.0 / v
    grad[:, 2] = 1.0 / psi

    psi2 = psi * psi
    hess = np.empty((len(s), 3, 3))
    hess[:, 0, 0] = dpsi_u ** 2 / psi2 + v / (u * u * psi) + 1.0 / (u * u)
    hess[:, 0, 1] = dpsi_u * dpsi_v / psi2 - 1.0 / (u * psi)
    hess[:, 0, 2] = -dpsi_u / psi2
    hess[:, 1, 1] = dpsi_v ** 2 / psi2 + 1.0 / (v * psi) + 1.0 / (v * v)
    hess[:, 1, 2] = -dpsi_v / psi2
    hess[:, 2, 2] = 1.0 / psi2
    hess[:, 1, 0] = hess[:, 0, 1]
    hess[:, 2, 0] = hess[:, 0, 2]
    hess[:, 2, 1] = hess[:, 1, 2]
    return value, grad, hess
