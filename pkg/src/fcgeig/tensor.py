"""Real symmetric tensors and their contractions with a vector.

Two storage schemes are provided:

* :class:`DenseTensor` keeps one value per sorted multi-index together with
  the number of distinct permutations of that index (its multiplicity).
  For ``m = 6, n = 15`` this is ~38k entries instead of 11M.
* :class:`SumUnaryTensor` encodes ``a[i1..im] = g[i1] + ... + g[im]`` by the
  vector ``g`` alone; every contraction is O(n) in closed form.

Both expose the same three contractions

    txm(x)  = A x^m        (scalar)
    txm1(x) = A x^(m-1)    (vector, = grad(A x^m) / m)
    txm2(x) = A x^(m-2)    (matrix, = hess(A x^m) / (m (m-1)))

plus ``txm2_quad(x, d) = d^T (A x^(m-2)) d``, which never forms the matrix.

Indices passed by users (``from_entries``, ``entry``) are 1-based to match
the usual mathematical notation; storage is 0-based.
"""
from __future__ import annotations

import itertools
import math
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, DuplicateEntry, IndexOutOfRange, OrderMismatch

__all__ = [
    "SymTensor",
    "DenseTensor",
    "SumUnaryTensor",
    "dense_from_entries",
    "multiplicity",
    "sorted_indices",
    "txm",
    "txm1",
    "txm2",
]


def multiplicity(index: Sequence[int]) -> int:
    """Number of distinct permutations of a multi-index (multinomial count)."""
    counts = np.unique(np.asarray(index), return_counts=True)[1]
    out = math.factorial(len(index))
    for c in counts:
        out //= math.factorial(int(c))
    return out


def _multiplicities(idx: np.ndarray) -> np.ndarray:
    # rows are sorted, so equal indices form runs; divide by run-length factorials
    num, m = idx.shape
    fact = np.array([math.factorial(k) for k in range(m + 1)], dtype=np.float64)
    out = np.full(num, fact[m])
    run = np.ones(num, dtype=np.int64)
    for p in range(1, m):
        same = idx[:, p] == idx[:, p - 1]
        out = np.where(same, out, out / fact[run])
        run = np.where(same, run + 1, 1)
    return np.rint(out / fact[run])


def sorted_indices(order: int, dim: int) -> np.ndarray:
    """All sorted 0-based multi-indices ``i1 <= ... <= im`` as an int array."""
    total = math.comb(dim + order - 1, order)
    flat = np.fromiter(
        itertools.chain.from_iterable(
            itertools.combinations_with_replacement(range(dim), order)
        ),
        dtype=np.int64,
        count=total * order,
    )
    return flat.reshape(total, order)


class SymTensor:
    """Common interface of the symmetric tensor representations."""

    order: int
    dim: int

    def _check(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dim,):
            raise DimensionMismatch(
                f"vector of shape {x.shape} does not match tensor dimension {self.dim}"
            )
        return x

    def txm(self, x) -> float:
        raise NotImplementedError

    def txm1(self, x) -> np.ndarray:
        raise NotImplementedError

    def txm2(self, x) -> np.ndarray:
        raise NotImplementedError

    def txm2_quad(self, x, d) -> float:
        d = self._check(d)
        return float(d @ self.txm2(x) @ d)

    def txm_diff(self, x, z) -> float:
        """``A z^m - A x^m`` computed without cancellation when ``z`` is near ``x``."""
        raise NotImplementedError

    def __neg__(self) -> "SymTensor":
        raise NotImplementedError


class DenseTensor(SymTensor):
    """Symmetric tensor stored as unique sorted multi-indices.

    Parameters
    ----------
    order, dim : int
        Tensor order ``m`` and dimension ``n``.
    indices : ndarray of int, shape (k, m)
        0-based, row-wise sorted, pairwise distinct multi-indices.
    values : ndarray, shape (k,)
        Entry values.
    """

    def __init__(self, order: int, dim: int, indices, values):
        if order < 1 or dim < 1:
            raise ValueError("order and dim must be positive")
        idx = np.asarray(indices, dtype=np.int64).reshape(-1, order)
        vals = np.asarray(values, dtype=np.float64).reshape(-1)
        if idx.shape[0] != vals.shape[0]:
            raise ValueError("indices and values differ in length")
        self.order = int(order)
        self.dim = int(dim)
        self.indices = idx
        self.values = vals
        self.multiplicity = _multiplicities(idx)
        # weight of each unique entry in the full sum defining A x^m
        self._w = self.multiplicity * vals
        self._idx_t = np.ascontiguousarray(idx.T)
        self._lookup = None
        for arr in (self.indices, self._idx_t, self.values, self.multiplicity, self._w):
            arr.setflags(write=False)

    @property
    def nnz(self) -> int:
        return self.values.shape[0]

    def entry(self, index: Sequence[int]) -> float:
        """Value at a 1-based multi-index, in any order."""
        if len(index) != self.order:
            raise OrderMismatch(f"index {tuple(index)} has length != {self.order}")
        key = tuple(sorted(int(i) - 1 for i in index))
        if min(key) < 0 or max(key) >= self.dim:
            raise IndexOutOfRange(f"index {tuple(index)} outside [1, {self.dim}]")
        if self._lookup is None:
            self._lookup = {tuple(r): k for k, r in enumerate(self.indices.tolist())}
        k = self._lookup.get(key)
        return 0.0 if k is None else float(self.values[k])

    def __neg__(self) -> "DenseTensor":
        return DenseTensor(self.order, self.dim, self.indices, -self.values)

    def __abs__(self) -> "DenseTensor":
        return DenseTensor(self.order, self.dim, self.indices, np.abs(self.values))

    def _gathered(self, x: np.ndarray) -> np.ndarray:
        # shape (m, k): one contiguous row per index position
        return x[self._idx_t]

    @staticmethod
    def _prefix(X: np.ndarray) -> list:
        out = [None]
        acc = None
        for row in X[:-1]:
            acc = row if acc is None else acc * row
            out.append(acc)
        return out

    @staticmethod
    def _suffix(X: np.ndarray) -> list:
        out = [None]
        acc = None
        for row in X[:0:-1]:
            acc = row if acc is None else acc * row
            out.append(acc)
        return out[::-1]

    @staticmethod
    def _mul(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return a * b

    def txm(self, x) -> float:
        x = self._check(x)
        if self.nnz == 0:
            return 0.0
        X = self._gathered(x)
        prod = X[0].copy()
        for row in X[1:]:
            prod *= row
        return float(self._w @ prod)

    def txm1(self, x) -> np.ndarray:
        x = self._check(x)
        out = np.zeros(self.dim)
        if self.nnz == 0:
            return out
        X = self._gathered(x)
        pre, suf = self._prefix(X), self._suffix(X)
        for p in range(self.order):
            loo = self._mul(pre[p], suf[p])
            wt = self._w if loo is None else self._w * loo
            out += np.bincount(self._idx_t[p], weights=wt, minlength=self.dim)
        return out / self.order

    def txm_diff(self, x, z) -> float:
        x = self._check(x)
        z = self._check(z)
        if self.nnz == 0:
            return 0.0
        X = self._gathered(x)
        Z = self._gathered(z)
        # prod(Z) - prod(X) = sum_p prod(Z[:p]) * (Z[p] - X[p]) * prod(X[p+1:])
        pz, sx = self._prefix(Z), self._suffix(X)
        diff = np.zeros(self.nnz)
        for p in range(self.order):
            term = Z[p] - X[p]
            other = self._mul(pz[p], sx[p])
            diff += term if other is None else term * other
        return float(self._w @ diff)

    def _pair_terms(self, X: np.ndarray):
        m = self.order
        for p, q in itertools.combinations(range(m), 2):
            t = self._w
            for j in range(m):
                if j != p and j != q:
                    t = t * X[j]
            yield p, q, t

    def txm2(self, x) -> np.ndarray:
        x = self._check(x)
        n, m = self.dim, self.order
        if m < 2:
            raise OrderMismatch("A x^(m-2) needs order >= 2")
        flat = np.zeros(n * n)
        if self.nnz:
            X = self._gathered(x)
            for p, q, t in self._pair_terms(X):
                flat += np.bincount(
                    self._idx_t[p] * n + self._idx_t[q], weights=t, minlength=n * n
                )
        M = flat.reshape(n, n)
        return (M + M.T) / (m * (m - 1))

    def txm2_quad(self, x, d) -> float:
        x = self._check(x)
        d = self._check(d)
        m = self.order
        if m < 2:
            raise OrderMismatch("A x^(m-2) needs order >= 2")
        if self.nnz == 0:
            return 0.0
        X = self._gathered(x)
        D = self._gathered(d)
        total = 0.0
        for p, q, t in self._pair_terms(X):
            total += t @ (D[p] * D[q])
        return 2.0 * total / (m * (m - 1))

    def to_entries(self) -> list[tuple[tuple[int, ...], float]]:
        """Unique entries as ``(1-based sorted index, value)`` pairs."""
        return [
            (tuple(int(i) + 1 for i in row), float(v))
            for row, v in zip(self.indices, self.values)
        ]

    def to_array(self) -> np.ndarray:
        """Full ``n^m`` array; only for small tensors."""
        full = np.zeros((self.dim,) * self.order)
        for row, v in zip(self.indices, self.values):
            for perm in set(itertools.permutations(row.tolist())):
                full[perm] = v
        return full

    def __repr__(self) -> str:
        return f"DenseTensor(order={self.order}, dim={self.dim}, nnz={self.nnz})"


def dense_from_entries(
    order: int, dim: int, entries: Iterable[tuple[Sequence[int], float]]
) -> DenseTensor:
    """Build a :class:`DenseTensor` from ``(multi-index, value)`` pairs.

    Multi-indices are 1-based and may be given in any permutation; two
    entries that sort to the same tuple raise :class:`DuplicateEntry`.
    """
    if order < 1 or dim < 1:
        raise ValueError("order and dim must be positive")
    seen: dict[tuple[int, ...], float] = {}
    for index, value in entries:
        index = tuple(int(i) for i in index)
        if len(index) != order:
            raise OrderMismatch(f"index {index} has length {len(index)}, expected {order}")
        if min(index) < 1 or max(index) > dim:
            raise IndexOutOfRange(f"index {index} outside [1, {dim}]")
        key = tuple(sorted(i - 1 for i in index))
        if key in seen:
            raise DuplicateEntry(f"index {index} duplicates an earlier entry")
        seen[key] = float(value)
    keys = sorted(seen)
    idx = np.array(keys, dtype=np.int64).reshape(-1, order)
    vals = np.array([seen[k] for k in keys], dtype=np.float64)
    return DenseTensor(order, dim, idx, vals)


def _pow(s: float, k: int) -> float:
    # 0**0 == 1 by convention; negative k never reaches here
    return 1.0 if k == 0 else s**k


class SumUnaryTensor(SymTensor):
    """Tensor with entries ``a[i1..im] = g[i1] + ... + g[im]``.

    With ``s = sum(x)`` the contractions are::

        A x^m           = m (g.x) s^(m-1)
        (A x^(m-1))_i   = g_i s^(m-1) + (m-1) s^(m-2) (g.x)
        (A x^(m-2))_ij  = (g_i + g_j) s^(m-2) + (m-2) s^(m-3) (g.x)
    """

    def __init__(self, order: int, g):
        g = np.array(g, dtype=np.float64).reshape(-1)
        if order < 2:
            raise ValueError("SumUnaryTensor needs order >= 2")
        self.order = int(order)
        self.dim = g.shape[0]
        self.g = g
        self.g.setflags(write=False)

    def __neg__(self) -> "SumUnaryTensor":
        return SumUnaryTensor(self.order, -self.g)

    def entry(self, index: Sequence[int]) -> float:
        if len(index) != self.order:
            raise OrderMismatch(f"index {tuple(index)} has length != {self.order}")
        idx = np.asarray(index) - 1
        if idx.min() < 0 or idx.max() >= self.dim:
            raise IndexOutOfRange(f"index {tuple(index)} outside [1, {self.dim}]")
        return float(self.g[idx].sum())

    def txm(self, x) -> float:
        x = self._check(x)
        m = self.order
        return float(m * (self.g @ x) * _pow(x.sum(), m - 1))

    def txm1(self, x) -> np.ndarray:
        x = self._check(x)
        m = self.order
        s = x.sum()
        return self.g * _pow(s, m - 1) + (m - 1) * _pow(s, m - 2) * (self.g @ x)

    def txm2(self, x) -> np.ndarray:
        x = self._check(x)
        m = self.order
        s = x.sum()
        M = (self.g[:, None] + self.g[None, :]) * _pow(s, m - 2)
        if m >= 3:
            M += (m - 2) * _pow(s, m - 3) * (self.g @ x)
        return M

    def txm2_quad(self, x, d) -> float:
        x = self._check(x)
        d = self._check(d)
        m = self.order
        s = x.sum()
        sd = d.sum()
        out = 2.0 * (self.g @ d) * sd * _pow(s, m - 2)
        if m >= 3:
            out += (m - 2) * _pow(s, m - 3) * (self.g @ x) * sd * sd
        return float(out)

    def txm_diff(self, x, z) -> float:
        x = self._check(x)
        z = self._check(z)
        m = self.order
        sx = x.sum()
        ds = (z - x).sum()
        gx = self.g @ x
        gdz = self.g @ (z - x)
        # (g.z) sz^(m-1) - (g.x) sx^(m-1), with sz = sx + ds expanded binomially
        pow_diff = sum(math.comb(m - 1, j) * _pow(sx, m - 1 - j) * ds**j for j in range(1, m))
        return float(m * (gdz * _pow(sx + ds, m - 1) + gx * pow_diff))

    def to_dense(self) -> DenseTensor:
        idx = sorted_indices(self.order, self.dim)
        return DenseTensor(self.order, self.dim, idx, self.g[idx].sum(axis=1))

    def __repr__(self) -> str:
        return f"SumUnaryTensor(order={self.order}, dim={self.dim})"


def txm(A: SymTensor, x) -> float:
    return A.txm(x)


def txm1(A: SymTensor, x) -> np.ndarray:
    return A.txm1(x)


def txm2(A: SymTensor, x) -> np.ndarray:
    return A.txm2(x)
