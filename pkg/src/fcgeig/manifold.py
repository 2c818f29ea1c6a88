"""Objective, gradient and Hessian on the surface ``{x : B x^m' = 1}``.

The problem solved is ``min (1/m) A x^m  s.t.  B x^m' = 1``.  Off the
surface we work with the scale-invariant extension

    h(x) = (1/m) A x^m / ||x||_B^m

so that ``f(retract(x, d, a)) = h(x + a d)``.  Maximization is handled by
running the same machinery on ``-A``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .bform import BForm
from .errors import DimensionMismatch, InfeasiblePoint, ZeroVector
from .tensor import SymTensor

__all__ = [
    "Sense",
    "Objective",
    "FEAS_TOL",
    "check_feasible",
    "h_eval",
    "h_diff",
    "grad_h",
    "feas_grad",
    "feas_hess",
    "feas_hess_quad",
    "projector",
]

FEAS_TOL = 1e-10


class Sense(str, Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"

    @classmethod
    def parse(cls, value) -> "Sense":
        if isinstance(value, cls):
            return value
        key = str(value).lower()
        aliases = {"min": cls.MINIMIZE, "minimize": cls.MINIMIZE,
                   "max": cls.MAXIMIZE, "maximize": cls.MAXIMIZE}
        if key not in aliases:
            raise ValueError(f"unknown sense {value!r}")
        return aliases[key]


@dataclass(frozen=True)
class Objective:
    """Tensor ``A``, constraint form ``B`` and optimization sense.

    ``work`` is the tensor actually minimized: ``A`` itself, or ``-A`` when
    maximizing.  Eigenvalues reported to users always refer to ``A``.
    """

    A: SymTensor
    B: BForm
    sense: Sense = Sense.MINIMIZE
    work: SymTensor = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sense = Sense.parse(self.sense)
        object.__setattr__(self, "sense", sense)
        if self.B.dim is not None and self.B.dim != self.A.dim:
            raise DimensionMismatch(f"A has dim {self.A.dim}, B has dim {self.B.dim}")
        object.__setattr__(self, "work", -self.A if sense is Sense.MAXIMIZE else self.A)

    @property
    def m(self) -> int:
        return self.A.order

    @property
    def mb(self) -> int:
        return self.B.order

    @property
    def dim(self) -> int:
        return self.A.dim

    @property
    def sign(self) -> float:
        """Factor mapping work-tensor values back to ``A`` values."""
        return -1.0 if self.sense is Sense.MAXIMIZE else 1.0

    def eigenvalue(self, x) -> float:
        """``A x^m`` for the original (un-negated) tensor."""
        return self.A.txm(x)


def check_feasible(B: BForm, x, tol: float = FEAS_TOL) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    val = B.phi(x)
    if not abs(val - 1.0) <= tol:
        raise InfeasiblePoint(f"|B x^m' - 1| = {abs(val - 1.0):.3e} exceeds {tol:g}")
    return x


def _nonzero(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if not np.any(x):
        raise ZeroVector("x must be nonzero")
    return x


def h_eval(obj: Objective, x) -> float:
    x = _nonzero(x)
    return obj.work.txm(x) / (obj.m * obj.B.norm(x) ** obj.m)


def h_diff(obj: Objective, x, z, a0: float | None = None) -> float:
    """``h(z) - h(x)``, accurate to the size of the difference itself.

    Evaluating ``h`` twice and subtracting loses everything below
    ``eps |h|``, which is where the sufficient-decrease test lives once
    ``||F||`` is near ``sqrt(eps)``.  ``a0`` may carry a precomputed
    ``A x^m`` of the working tensor.
    """
    x = _nonzero(x)
    z = _nonzero(z)
    m, mb = obj.m, obj.mb
    if a0 is None:
        a0 = obj.work.txm(x)
    da = obj.work.txm_diff(x, z)
    p0 = obj.B.phi(x)
    r = obj.B.phi_diff(x, z) / p0
    # (1 + r)^(-m/m') - 1
    c = np.expm1(-(m / mb) * np.log1p(r))
    return float((da * (1.0 + c) + a0 * c) / (m * p0 ** (m / mb)))


def grad_h(obj: Objective, x) -> np.ndarray:
    x = _nonzero(x)
    ph = obj.B.phi(x)
    nrm = obj.B.norm(x)
    a1 = obj.work.txm1(x)
    am = float(x @ a1)
    return (a1 - am / ph * obj.B.grad(x)) / nrm**obj.m


def feas_grad(obj: Objective, x) -> np.ndarray:
    """``F(x) = A x^(m-1) - (A x^m) B x^(m'-1)`` on the surface.

    ``F(x) = 0`` exactly when ``(x, A x^m)`` is a B-eigenpair.
    """
    x = check_feasible(obj.B, x)
    a1 = obj.work.txm1(x)
    return a1 - float(x @ a1) * obj.B.grad(x)


def feas_hess(obj: Objective, x) -> np.ndarray:
    """Hessian of ``h`` at a feasible ``x``.

    ``(m-1) A x^(m-2) - (m'-1) lam B x^(m'-2) - m (F b^T + b F^T)
    - (m - m') lam b b^T`` with ``b = B x^(m'-1)`` and ``lam = A x^m``.
    """
    x = check_feasible(obj.B, x)
    m, mb = obj.m, obj.mb
    a1 = obj.work.txm1(x)
    lam = float(x @ a1)
    b = obj.B.grad(x)
    F = a1 - lam * b
    H = (m - 1) * obj.work.txm2(x) - (mb - 1) * lam * obj.B.hess(x)
    H -= m * (np.outer(F, b) + np.outer(b, F))
    H -= (m - mb) * lam * np.outer(b, b)
    return 0.5 * (H + H.T)


def feas_hess_quad(obj: Objective, x, d) -> float:
    """``d^T H(x) d`` without forming ``H`` (O(n) for structured tensors)."""
    x = check_feasible(obj.B, x)
    d = np.asarray(d, dtype=np.float64)
    m, mb = obj.m, obj.mb
    a1 = obj.work.txm1(x)
    lam = float(x @ a1)
    b = obj.B.grad(x)
    Fd = float(a1 @ d) - lam * float(b @ d)
    bd = float(b @ d)
    return (
        (m - 1) * obj.work.txm2_quad(x, d)
        - (mb - 1) * lam * obj.B.hess_quad(x, d)
        - 2.0 * m * Fd * bd
        - (m - mb) * lam * bd * bd
    )


def projector(B: BForm, x) -> np.ndarray:
    """Idempotent matrix ``I - x (B x^(m'-1))^T`` at a feasible ``x``."""
    x = check_feasible(B, x)
    return np.eye(x.shape[0]) - np.outer(x, B.grad(x))
