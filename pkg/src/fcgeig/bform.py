"""Positive definite even-order forms ``B`` that define the constraint surface.

The feasible set is ``{x : phi(x) = 1}`` with ``phi(x) = B x^m'``.  Four
variants cover the usual eigenvalue notions:

==================  ==========================  ===============
class               ``phi(x)``                  eigenpair kind
==================  ==========================  ===============
``Identity2``       ``x.x``                     Z
``DiagPower(p)``    ``sum(x_i^p)``              H (``p = m``)
``QuadFormPower``   ``(x^T D x)^(p/2)``         D
``DenseForm``       ``T x^p`` for a tensor T    general B
==================  ==========================  ===============
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch, InvalidSpec, NonPositiveForm, ZeroVector
from .tensor import DenseTensor

__all__ = [
    "BForm",
    "Identity2",
    "DiagPower",
    "QuadFormPower",
    "DenseForm",
    "phi",
    "bnorm",
    "bgrad",
    "bhess",
    "bhess_quad",
    "retract",
]


class BForm:
    """Base class; subclasses implement ``phi``, ``grad`` and ``hess``.

    ``grad`` returns ``B x^(m'-1) = grad(phi) / m'`` and ``hess`` returns
    ``B x^(m'-2) = hess(phi) / (m' (m'-1))``.
    """

    order: int
    dim: int | None = None

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or (self.dim is not None and x.shape[0] != self.dim):
            raise DimensionMismatch(f"vector of shape {x.shape} does not match form dimension {self.dim}")
        return x

    def phi(self, x) -> float:
        raise NotImplementedError

    def grad(self, x) -> np.ndarray:
        raise NotImplementedError

    def hess(self, x) -> np.ndarray:
        raise NotImplementedError

    def hess_quad(self, x, d) -> float:
        d = self._check(d)
        return float(d @ self.hess(x) @ d)

    def phi_diff(self, x, z) -> float:
        """``phi(z) - phi(x)`` computed without cancellation when ``z`` is near ``x``."""
        raise NotImplementedError

    def norm(self, x) -> float:
        x = self._check(x)
        val = self.phi(x)
        if val <= 0.0:
            if not np.any(x):
                return 0.0
            raise NonPositiveForm(f"B x^{self.order} = {val:g} <= 0 at a nonzero x")
        return val ** (1.0 / self.order)

    def normalize(self, x) -> np.ndarray:
        """Scale ``x`` onto the surface ``phi = 1``."""
        x = self._check(x)
        if not np.any(x):
            raise ZeroVector("cannot normalize the zero vector")
        return x / self.norm(x)

    def retract(self, x, d, alpha: float) -> np.ndarray:
        """The curve ``(x + alpha d) / ||x + alpha d||_B``."""
        x = self._check(x)
        d = self._check(d)
        z = x + alpha * d
        if not np.any(z):
            raise ZeroVector("x + alpha d vanishes")
        return z / self.norm(z)


class Identity2(BForm):
    def __init__(self, dim: int | None = None):
        self.order = 2
        self.dim = dim

    def phi(self, x) -> float:
        x = self._check(x)
        return float(x @ x)

    def norm(self, x) -> float:
        return float(np.linalg.norm(self._check(x)))

    def grad(self, x) -> np.ndarray:
        return self._check(x).copy()

    def hess(self, x) -> np.ndarray:
        x = self._check(x)
        return np.eye(x.shape[0])

    def hess_quad(self, x, d) -> float:
        d = self._check(d)
        return float(d @ d)

    def phi_diff(self, x, z) -> float:
        x = self._check(x)
        s = self._check(z) - x
        return float(2.0 * (x @ s) + s @ s)

    def __repr__(self) -> str:
        return "Identity2()"


class DiagPower(BForm):
    def __init__(self, order: int, dim: int | None = None):
        if order < 2 or order % 2:
            raise InvalidSpec(f"DiagPower needs an even order >= 2, got {order}")
        self.order = int(order)
        self.dim = dim

    def phi(self, x) -> float:
        x = self._check(x)
        return float(np.sum(x**self.order))

    def grad(self, x) -> np.ndarray:
        x = self._check(x)
        return x ** (self.order - 1)

    def hess(self, x) -> np.ndarray:
        x = self._check(x)
        return np.diag(x ** (self.order - 2))

    def hess_quad(self, x, d) -> float:
        x = self._check(x)
        d = self._check(d)
        return float(np.sum(x ** (self.order - 2) * d * d))

    def phi_diff(self, x, z) -> float:
        x = self._check(x)
        z = self._check(z)
        p = self.order
        # z^p - x^p = (z - x) sum_k z^k x^(p-1-k)
        acc = np.zeros_like(x)
        for k in range(p):
            acc += z**k * x ** (p - 1 - k)
        return float(np.sum((z - x) * acc))

    def __repr__(self) -> str:
        return f"DiagPower({self.order})"


class QuadFormPower(BForm):
    """``phi(x) = (x^T D x)^(m'/2)`` for a symmetric positive definite ``D``."""

    def __init__(self, order: int, D):
        if order < 2 or order % 2:
            raise InvalidSpec(f"QuadFormPower needs an even order >= 2, got {order}")
        D = np.array(D, dtype=np.float64)
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise InvalidSpec("D must be square")
        self.order = int(order)
        self.D = 0.5 * (D + D.T)
        self.D.setflags(write=False)
        self.dim = D.shape[0]

    def _q(self, x):
        Dx = self.D @ x
        return float(x @ Dx), Dx

    def phi(self, x) -> float:
        q, _ = self._q(self._check(x))
        return q ** (self.order // 2)

    def grad(self, x) -> np.ndarray:
        q, Dx = self._q(self._check(x))
        return q ** (self.order // 2 - 1) * Dx

    def hess(self, x) -> np.ndarray:
        # hess(phi) = m' q^(p-1) D + m' (m'-2) q^(p-2) Dx Dx^T,  p = m'/2
        q, Dx = self._q(self._check(x))
        p = self.order // 2
        H = q ** (p - 1) * self.D
        if p > 1:
            H = H + (self.order - 2) * q ** (p - 2) * np.outer(Dx, Dx)
        return H / (self.order - 1)

    def hess_quad(self, x, d) -> float:
        x = self._check(x)
        d = self._check(d)
        q, Dx = self._q(x)
        p = self.order // 2
        out = q ** (p - 1) * float(d @ self.D @ d)
        if p > 1:
            out += (self.order - 2) * q ** (p - 2) * float(Dx @ d) ** 2
        return out / (self.order - 1)

    def phi_diff(self, x, z) -> float:
        x = self._check(x)
        s = self._check(z) - x
        q, Dx = self._q(x)
        dq = float(2.0 * (Dx @ s) + s @ self.D @ s)
        p = self.order // 2
        return sum(math.comb(p, j) * q ** (p - j) * dq**j for j in range(1, p + 1))

    def __repr__(self) -> str:
        return f"QuadFormPower({self.order}, dim={self.dim})"


class DenseForm(BForm):
    """``phi(x) = T x^m'`` for an even-order tensor ``T`` assumed positive definite."""

    def __init__(self, tensor: DenseTensor):
        if tensor.order < 2 or tensor.order % 2:
            raise InvalidSpec(f"DenseForm needs an even order >= 2, got {tensor.order}")
        self.tensor = tensor
        self.order = tensor.order
        self.dim = tensor.dim

    def phi(self, x) -> float:
        return self.tensor.txm(self._check(x))

    def grad(self, x) -> np.ndarray:
        return self.tensor.txm1(self._check(x))

    def hess(self, x) -> np.ndarray:
        return self.tensor.txm2(self._check(x))

    def hess_quad(self, x, d) -> float:
        return self.tensor.txm2_quad(self._check(x), self._check(d))

    def phi_diff(self, x, z) -> float:
        return self.tensor.txm_diff(self._check(x), self._check(z))

    def __repr__(self) -> str:
        return f"DenseForm({self.tensor!r})"


def phi(B: BForm, x) -> float:
    return B.phi(x)


def bnorm(B: BForm, x) -> float:
    return B.norm(x)


def bgrad(B: BForm, x) -> np.ndarray:
    return B.grad(x)


def bhess(B: BForm, x) -> np.ndarray:
    return B.hess(x)


def bhess_quad(B: BForm, x, d) -> float:
    return B.hess_quad(x, d)


def retract(B: BForm, x, d, alpha: float) -> np.ndarray:
    return B.retract(x, d, alpha)
