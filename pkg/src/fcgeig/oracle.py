"""Independent checks: finite-difference derivatives and small-n enumeration."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import DimensionMismatch, ZeroVector
from .generators import rng
from .manifold import Objective, Sense, check_feasible, feas_hess, grad_h, h_eval
from .solver import EigenPair, SolveConfig, residual, solve

__all__ = [
    "EigenSet",
    "fd_check_gradient",
    "fd_check_hessian",
    "enumerate_n2",
    "enumerate_n3",
    "dedup_pairs",
]

RES_TOL = 1e-8
LAM_TOL = 1e-6
VEC_TOL = 1e-4


@dataclass
class EigenSet:
    pairs: list[EigenPair] = field(default_factory=list)

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([p.lam for p in self.pairs])

    def rounded(self, decimals: int = 4) -> set[float]:
        return {round(float(p.lam), decimals) + 0.0 for p in self.pairs}

    def __len__(self) -> int:
        return len(self.pairs)


def fd_check_gradient(obj: Objective, x, step: float = 1e-5) -> float:
    """Max coordinate error of ``grad_h`` against central differences of ``h``,
    scaled by ``1 + ||grad_h||``."""
    x = np.asarray(x, dtype=np.float64)
    if not np.any(x):
        raise ZeroVector("x must be nonzero")
    if not step > 0:
        raise ValueError("step must be positive")
    g = grad_h(obj, x)
    fd = np.empty_like(x)
    for j in range(x.shape[0]):
        e = np.zeros_like(x)
        e[j] = step
        fd[j] = (h_eval(obj, x + e) - h_eval(obj, x - e)) / (2 * step)
    return float(np.max(np.abs(fd - g)) / (1.0 + np.linalg.norm(g)))


def fd_check_hessian(obj: Objective, x, step: float = 1e-5) -> float:
    """Max entry error of ``feas_hess`` against the central-difference Jacobian
    of ``grad_h``, scaled by ``1 + max|H|``."""
    x = check_feasible(obj.B, x)
    H = feas_hess(obj, x)
    J = np.empty_like(H)
    for j in range(x.shape[0]):
        e = np.zeros_like(x)
        e[j] = step
        J[:, j] = (grad_h(obj, x + e) - grad_h(obj, x - e)) / (2 * step)
    return float(np.max(np.abs(H - J)) / (1.0 + np.max(np.abs(H))))


def dedup_pairs(pairs, lam_tol: float = LAM_TOL, vec_tol: float = VEC_TOL) -> list[EigenPair]:
    """Drop pairs equal to an earlier one in ``lam`` and in ``x`` up to sign."""
    kept: list[EigenPair] = []
    for p in sorted(pairs, key=lambda p: p.lam):
        dup = False
        for q in reversed(kept):
            if p.lam - q.lam > lam_tol:
                break
            dist = min(np.linalg.norm(p.x - q.x), np.linalg.norm(p.x + q.x))
            if dist <= vec_tol:
                dup = True
                break
        if not dup:
            kept.append(p)
    return kept


def enumerate_n2(obj: Objective, grid: int = 2048) -> EigenSet:
    """All B-eigenpairs of a two-dimensional problem.

    Walks the surface through ``x(t) = u(t) / ||u(t)||_B`` with
    ``u(t) = (cos t, sin t)``, brackets sign changes of ``d/dt h(u(t))`` on
    a uniform grid and refines each bracket with Brent's method.
    """
    if obj.dim != 2:
        raise DimensionMismatch(f"enumerate_n2 needs n = 2, got {obj.dim}")
    if grid < 360:
        raise ValueError("grid must be at least 360")

    def dh(t):
        u = np.array([np.cos(t), np.sin(t)])
        return float(grad_h(obj, u) @ np.array([-np.sin(t), np.cos(t)]))

    ts = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    vals = np.array([dh(t) for t in ts])
    roots = []
    for i in range(grid):
        a, b = ts[i], ts[i] + 2 * np.pi / grid
        fa, fb = vals[i], vals[(i + 1) % grid]
        if fa == 0.0:
            roots.append(a)
        elif fa * fb < 0.0:
            roots.append(brentq(dh, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    pairs = []
    for t in roots:
        x = obj.B.normalize(np.array([np.cos(t), np.sin(t)]))
        res = residual(obj, x)
        if res <= RES_TOL:
            pairs.append(EigenPair(x, obj.A.txm(x), res))
    return EigenSet(dedup_pairs(pairs))


def enumerate_n3(
    obj: Objective, starts: int = 1000, seed: int = 0, cfg: SolveConfig | None = None
) -> EigenSet:
    """Pool converged solves from ``starts`` random points, minimizing and maximizing."""
    if obj.dim != 3:
        raise DimensionMismatch(f"enumerate_n3 needs n = 3, got {obj.dim}")
    gen = rng(seed)
    pts = gen.uniform(-1.0, 1.0, (starts, 3))
    pairs = []
    for sense in (Sense.MINIMIZE, Sense.MAXIMIZE):
        o = Objective(obj.A, obj.B, sense)
        for u in pts:
            if not np.any(u):
                continue
            r = solve(o, u, cfg)
            if r.converged and r.residual <= RES_TOL:
                pairs.append(r.eigenpair)
    return EigenSet(dedup_pairs(pairs))
