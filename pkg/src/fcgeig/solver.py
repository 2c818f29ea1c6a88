"""Feasible conjugate gradient iteration for B-eigenpairs.

Each step builds a modified Polak-Ribiere direction ``d_k`` with
``d_k . F_k = -||F_k||^2``, takes an initial step from the local quadratic
model, backtracks along the curve ``x(a) = (x + a d) / ||x + a d||_B`` until
an Armijo-type condition holds, and stops once the eigen-residual drops
below ``tol``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import LineSearchFailed, ZeroDirection, ZeroPreviousGradient
from .manifold import Objective, check_feasible, h_diff

__all__ = [
    "SolveConfig",
    "IterateState",
    "EigenPair",
    "TraceEntry",
    "SolveResult",
    "direction",
    "initial_step",
    "line_search",
    "residual",
    "solve",
]

DELTA_MIN = 1e-10
DELTA_MAX = 1e10


@dataclass(frozen=True)
class SolveConfig:
    """Algorithm parameters.

    ``delta=None`` selects the curvature-based initial step
    ``|F.d / d^T H d|``; a number fixes the initial step instead.
    """

    sigma1: float = 1e-4
    sigma2: float = 1e-4
    rho: float = 0.1
    tol: float = 1e-8
    max_iter: int = 500
    max_backtracks: int = 60
    delta: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.sigma1 < 1.0:
            raise ValueError("sigma1 must lie in (0, 1)")
        if not self.sigma2 > 0.0:
            raise ValueError("sigma2 must be positive")
        if not 0.0 < self.rho < 1.0:
            raise ValueError("rho must lie in (0, 1)")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.max_iter < 0 or self.max_backtracks < 0:
            raise ValueError("iteration limits must be non-negative")
        if self.delta is not None and not self.delta > 0.0:
            raise ValueError("constant delta must be positive")


@dataclass
class IterateState:
    """Snapshot passed to the ``callback`` of :func:`solve` after each step.

    ``x``, ``F``, ``f`` and ``lam`` describe the iterate the step started
    from; ``alpha`` and ``backtracks`` describe the accepted step.
    """

    k: int
    x: np.ndarray
    lam: float
    f: float
    F: np.ndarray
    d: np.ndarray
    delta: float
    alpha: float
    backtracks: int
    x_next: np.ndarray
    decrease: float  # h(x_next) - h(x), computed without cancellation


@dataclass(frozen=True)
class EigenPair:
    x: np.ndarray
    lam: float
    residual: float


class TraceEntry(NamedTuple):
    k: int
    lam: float
    grad_norm: float
    res: float
    alpha: float  # step that produced this iterate; nan for x_0


@dataclass
class SolveResult:
    eigenpair: EigenPair
    residual: float
    iterations: int
    total_backtracks: int
    converged: bool
    trace: list[TraceEntry] = field(default_factory=list)
    message: str = ""

    @property
    def x(self) -> np.ndarray:
        return self.eigenpair.x

    @property
    def lam(self) -> float:
        return self.eigenpair.lam


def direction(F_k, F_prev, d_prev, k: int) -> np.ndarray:
    """Modified PRP direction ``-F_k + beta d_prev - theta y``.

    ``y = F_k - F_prev``, ``beta = F_k.y / ||F_prev||^2`` and
    ``theta = F_k.d_prev / ||F_prev||^2``, which makes ``d.F_k = -||F_k||^2``.
    """
    F_k = np.asarray(F_k, dtype=np.float64)
    if k == 0:
        return -F_k
    F_prev = np.asarray(F_prev, dtype=np.float64)
    d_prev = np.asarray(d_prev, dtype=np.float64)
    denom = float(F_prev @ F_prev)
    if denom == 0.0:
        raise ZeroPreviousGradient("previous feasible gradient is zero")
    y = F_k - F_prev
    beta = float(F_k @ y) / denom
    theta = float(F_k @ d_prev) / denom
    return -F_k + beta * d_prev - theta * y


def initial_step(F_k, d_k, dHd: float, cfg: SolveConfig) -> float:
    """First trial step of the curve search.

    ``dHd`` is ``d^T H d``; pass a matrix to have it formed here.
    """
    d_k = np.asarray(d_k, dtype=np.float64)
    dd = float(d_k @ d_k)
    if dd == 0.0:
        raise ZeroDirection("search direction is zero")
    if cfg.delta is not None:
        return float(cfg.delta)
    if np.ndim(dHd) == 2:
        dHd = float(d_k @ np.asarray(dHd) @ d_k)
    if not abs(dHd) > 1e-14 * dd:
        return 1.0
    delta = abs(float(np.asarray(F_k) @ d_k) / dHd)
    return min(max(delta, DELTA_MIN), DELTA_MAX)


def _curve_search(obj: Objective, x, Fd, dd, d, delta, cfg, a0=None):
    # returns (alpha, i, y, f(y) - f(x)); the difference is taken with
    # h_diff so the test stays meaningful when the decrease is ~eps |f|
    alpha = delta
    for i in range(cfg.max_backtracks + 1):
        z = x + alpha * d
        if not np.any(z):
            alpha *= cfg.rho
            continue
        df = h_diff(obj, x, z, a0)
        if df <= cfg.sigma1 * alpha * Fd - cfg.sigma2 * alpha * alpha * dd:
            return float(alpha), i, z / obj.B.norm(z), df
        alpha *= cfg.rho
    raise LineSearchFailed(
        f"no acceptable step after {cfg.max_backtracks} backtracks (delta={delta:g})"
    )


def line_search(obj: Objective, x, F, d, delta: float, cfg: SolveConfig) -> tuple[float, int]:
    """Largest ``delta * rho^i`` satisfying the Armijo-type condition

    ``f(x(a)) <= f(x) + sigma1 a F.d - sigma2 a^2 ||d||^2``.

    Returns ``(alpha, i)``.
    """
    x = check_feasible(obj.B, x)
    F = np.asarray(F, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    alpha, i, _, _ = _curve_search(obj, x, float(F @ d), float(d @ d), d, delta, cfg)
    return alpha, i


def _residual(lam: float, a1: np.ndarray, b: np.ndarray) -> float:
    if abs(lam) <= 1.0:
        return float(np.linalg.norm(a1 - lam * b))
    return float(np.linalg.norm(a1 / lam - b))


def residual(obj: Objective, x) -> float:
    """Eigen-residual used for stopping.

    With ``lam = A x^m``: ``||A x^(m-1) - lam B x^(m'-1)||`` if ``|lam| <= 1``,
    else ``||A x^(m-1) / lam - B x^(m'-1)||``.
    """
    x = check_feasible(obj.B, x)
    a1 = obj.A.txm1(x)
    return _residual(float(obj.A.txm(x)), a1, obj.B.grad(x))


def solve(
    obj: Objective,
    x0,
    cfg: SolveConfig | None = None,
    callback: Callable[[IterateState], None] | None = None,
) -> SolveResult:
    """Run the feasible conjugate gradient method from ``x0``.

    ``x0`` need not be feasible; it is scaled onto the surface first.
    Eigenvalues in the result refer to ``obj.A`` regardless of the sense.
    A failed curve search ends the run with ``converged=False``.
    """
    cfg = cfg or SolveConfig()
    B = obj.B
    m, mb = obj.m, obj.mb
    sign = obj.sign
    x = B.normalize(x0)

    def local(x):
        a1 = obj.work.txm1(x)
        fm = obj.work.txm(x)  # = m f(x); also -A x^m when maximizing
        b = B.grad(x)
        F = a1 - fm * b
        res = _residual(sign * fm, sign * a1, b)
        return a1, fm, b, F, res

    a1, fm, b, F, res = local(x)
    trace = [TraceEntry(0, sign * fm, float(np.linalg.norm(F)), res, math.nan)]
    F_prev = d_prev = None
    k = 0
    total_bt = 0
    message = ""
    converged = res <= cfg.tol
    while not converged and k < cfg.max_iter:
        d = direction(F, F_prev, d_prev, k)
        dd = float(d @ d)
        if dd == 0.0:
            message = "feasible gradient vanished before the residual tolerance was met"
            break
        Fd = float(F @ d)
        if cfg.delta is None:
            bd = float(b @ d)
            dHd = (
                (m - 1) * obj.work.txm2_quad(x, d)
                - (mb - 1) * fm * B.hess_quad(x, d)
                - 2.0 * m * Fd * bd
                - (m - mb) * fm * bd * bd
            )
        else:
            dHd = 0.0
        delta = initial_step(F, d, dHd, cfg)
        try:
            alpha, bt, y, df = _curve_search(obj, x, Fd, dd, d, delta, cfg, fm)
        except LineSearchFailed as exc:
            message = str(exc)
            break
        if callback is not None:
            callback(IterateState(k, x, sign * fm, fm / m, F, d, delta, alpha, bt, y, df))
        total_bt += bt
        F_prev, d_prev = F, d
        x = y
        a1, fm, b, F, res = local(x)
        k += 1
        trace.append(TraceEntry(k, sign * fm, float(np.linalg.norm(F)), res, alpha))
        converged = res <= cfg.tol
    if not converged and not message:
        message = f"residual {res:.3e} above tol after {k} iterations"
    return SolveResult(
        eigenpair=EigenPair(x, sign * fm, res),
        residual=res,
        iterations=k,
        total_backtracks=total_bt,
        converged=converged,
        trace=trace,
        message=message,
    )
