"""Test tensors ``A`` and constraint forms ``B`` used in the experiments.

All randomness goes through :func:`rng`, a ``numpy.random.Generator`` over
PCG64, so equal seeds give bit-identical tensors on every platform.

Tensor families (``GenSpec.family``):

``ex1``  fixed order-3, dimension-3 tensor
``ex2``  ``a[i1..im] = sin(i1 + ... + im)``
``ex3``  one uniform ``[-1, 1]`` value per sorted multi-index
``ex4``  ``a = g(i1) + ... + g(im)`` with ``g(i) = arctan((-1)^i i / n)``
``ex5``  ``a = v[i1] + ... + v[im]`` with ``v`` uniform in ``[-1, 1]^n``
``ex6``  fixed order-4, dimension-3 tensor

Form families (``BGenSpec.family``): ``identity2``, ``diagpower``,
``ex7`` (``(x^T D x)^(m'/2)`` with ``D = 0.1 I + C C^T``) and ``ex8``
(diagonally dominant dense tensor ``s I + C``).
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .bform import BForm, DenseForm, DiagPower, Identity2, QuadFormPower
from .errors import InvalidSpec
from .tensor import DenseTensor, SumUnaryTensor, SymTensor, dense_from_entries, sorted_indices

__all__ = [
    "GenSpec",
    "BGenSpec",
    "rng",
    "gen_tensor",
    "gen_bform",
    "example1",
    "example6",
    "EX1_ENTRIES",
    "EX6_ENTRIES",
]

EX1_ENTRIES = [
    ((1, 1, 1), -0.1281), ((1, 1, 2), 0.0516), ((1, 1, 3), -0.0954),
    ((1, 2, 2), -0.1958), ((1, 2, 3), -0.1790), ((1, 3, 3), -0.2676),
    ((2, 2, 2), 0.3251), ((2, 2, 3), 0.2513), ((2, 3, 3), 0.1773),
    ((3, 3, 3), 0.0338),
]

EX6_ENTRIES = [
    ((1, 1, 1, 1), 0.2883), ((1, 1, 1, 2), -0.0031), ((1, 1, 1, 3), 0.1973),
    ((1, 1, 2, 2), -0.2485), ((1, 1, 2, 3), -0.2939), ((1, 1, 3, 3), 0.3847),
    ((1, 2, 2, 2), 0.2972), ((1, 2, 2, 3), 0.1862), ((1, 2, 3, 3), 0.0919),
    ((1, 3, 3, 3), -0.3619), ((2, 2, 2, 2), 0.1241), ((2, 2, 2, 3), -0.3420),
    ((2, 2, 3, 3), 0.2127), ((2, 3, 3, 3), 0.2727), ((3, 3, 3, 3), -0.3054),
]

_FIXED = {"ex1": (3, 3), "ex6": (4, 3)}
_TENSOR_FAMILIES = ("ex1", "ex2", "ex3", "ex4", "ex5", "ex6")
_FORM_FAMILIES = ("identity2", "diagpower", "ex7", "ex8")


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class GenSpec:
    family: str
    order: int | None = None
    dim: int | None = None
    seed: int = 0

    def __post_init__(self):
        fam = str(self.family).lower()
        object.__setattr__(self, "family", fam)
        if fam not in _TENSOR_FAMILIES:
            raise InvalidSpec(f"unknown tensor family {self.family!r}")
        if fam in _FIXED:
            m, n = _FIXED[fam]
            if (self.order, self.dim) not in ((None, None), (m, n)):
                raise InvalidSpec(f"{fam} is fixed at (m, n) = ({m}, {n})")
            object.__setattr__(self, "order", m)
            object.__setattr__(self, "dim", n)
        elif self.order is None or self.dim is None:
            raise InvalidSpec(f"{fam} needs both order and dim")
        if self.order < 2 or self.dim < 1:
            raise InvalidSpec("order must be >= 2 and dim >= 1")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BGenSpec:
    family: str = "identity2"
    order: int = 2
    dim: int | None = None
    seed: int = 0

    def __post_init__(self):
        fam = str(self.family).lower()
        object.__setattr__(self, "family", fam)
        if fam not in _FORM_FAMILIES:
            raise InvalidSpec(f"unknown form family {self.family!r}")
        if fam == "identity2" and self.order != 2:
            raise InvalidSpec("identity2 has order 2")
        if self.order < 2 or self.order % 2:
            raise InvalidSpec(f"form order must be even and >= 2, got {self.order}")
        if fam == "ex8" and self.dim is not None and self.dim < 2:
            raise InvalidSpec("ex8 needs dim >= 2 for off-diagonal entries")

    def to_dict(self) -> dict:
        return asdict(self)


def example1() -> DenseTensor:
    return dense_from_entries(3, 3, EX1_ENTRIES)


def example6() -> DenseTensor:
    return dense_from_entries(4, 3, EX6_ENTRIES)


def gen_tensor(spec: GenSpec) -> SymTensor:
    fam, m, n = spec.family, spec.order, spec.dim
    if fam == "ex1":
        return example1()
    if fam == "ex6":
        return example6()
    if fam == "ex2":
        idx = sorted_indices(m, n)
        # 1-based index sum
        return DenseTensor(m, n, idx, np.sin(idx.sum(axis=1) + m))
    if fam == "ex3":
        idx = sorted_indices(m, n)
        return DenseTensor(m, n, idx, rng(spec.seed).uniform(-1.0, 1.0, idx.shape[0]))
    if fam == "ex4":
        i = np.arange(1, n + 1)
        return SumUnaryTensor(m, np.arctan((-1.0) ** i * i / n))
    # ex5
    return SumUnaryTensor(m, rng(spec.seed).uniform(-1.0, 1.0, n))


def _ex8_tensor(order: int, dim: int, seed: int) -> DenseTensor:
    idx = sorted_indices(order, dim)
    off = idx[:, 0] != idx[:, -1]
    vals = np.zeros(idx.shape[0])
    vals[off] = rng(seed).uniform(-1.0, 1.0, int(off.sum()))
    C = DenseTensor(order, dim, idx, vals)
    # (|C| e^(m'-1))_i: absolute row sums over all index tuples starting with i
    s = 1.01 * float(np.max(abs(C).txm1(np.ones(dim))))
    diag = ~off
    vals[diag] = s
    return DenseTensor(order, dim, idx, vals)


def gen_bform(spec: BGenSpec) -> BForm:
    fam = spec.family
    if fam in ("ex7", "ex8") and spec.dim is None:
        raise InvalidSpec(f"{fam} needs dim")
    if fam == "identity2":
        return Identity2(spec.dim)
    if fam == "diagpower":
        return DiagPower(spec.order, spec.dim)
    if fam == "ex7":
        n = spec.dim
        C = rng(spec.seed).uniform(-1.0, 1.0, (n, n - 1))
        return QuadFormPower(spec.order, 0.1 * np.eye(n) + C @ C.T)
    return DenseForm(_ex8_tensor(spec.order, spec.dim, spec.seed))
