"""Shared reference implementations for the test suite.

The helpers here deliberately avoid the package's contraction code: full
arrays are built by writing each stored value to every permutation of its
index, and contractions go through ``numpy.einsum``.
"""
import itertools

import numpy as np
import pytest

from fcgeig.bform import DenseForm, DiagPower, Identity2, QuadFormPower
from fcgeig.tensor import dense_from_entries


def full_array(order, dim, entries):
    """Dense ``dim^order`` array from 1-based sorted entries."""
    T = np.zeros((dim,) * order)
    for idx, val in entries:
        for perm in set(itertools.permutations(i - 1 for i in idx)):
            T[perm] = val
    return T


def contract(T, x, times):
    """Contract the trailing ``times`` modes of ``T`` with ``x``."""
    for _ in range(times):
        T = T @ x
    return T


def random_entries(gen, order, dim):
    return [
        (tuple(i + 1 for i in idx), float(gen.uniform(-1, 1)))
        for idx in itertools.combinations_with_replacement(range(dim), order)
    ]


def random_dense(gen, order, dim):
    entries = random_entries(gen, order, dim)
    return dense_from_entries(order, dim, entries), full_array(order, dim, entries)


def diagonal_tensor(order, c):
    n = len(c)
    return dense_from_entries(order, n, [((i + 1,) * order, float(v)) for i, v in enumerate(c)])


def spd_matrix(gen, n):
    C = gen.uniform(-1, 1, (n, n))
    return 0.5 * np.eye(n) + C @ C.T


def dominant_form(gen, order, dim):
    """Diagonally dominant even-order dense form (positive definite)."""
    entries = []
    for idx in itertools.combinations_with_replacement(range(1, dim + 1), order):
        if idx[0] == idx[-1]:
            continue
        entries.append((idx, float(gen.uniform(-0.2, 0.2))))
    T = full_array(order, dim, entries)
    s = 1.5 * np.max(np.abs(T).reshape(dim, -1).sum(axis=1)) + 0.1
    entries += [((i,) * order, s) for i in range(1, dim + 1)]
    return DenseForm(dense_from_entries(order, dim, entries))


def all_forms(gen, dim, order=4):
    """One instance of each B variant in dimension ``dim``."""
    return [
        Identity2(dim),
        DiagPower(order, dim),
        QuadFormPower(order, spd_matrix(gen, dim)),
        dominant_form(gen, order, dim),
    ]


def lambda_error_bound(obj, x, lam):
    """Forward error bound for the computed ``A x^m`` at a nearly feasible ``x``.

    Summing ``nnz`` products of ``m`` factors errs by at most
    ``(m + nnz) eps |A| |x|^m``; the residual drift ``|phi(x) - 1|`` of the
    iterate perturbs ``A x^m`` by ``(m/m') |lam| |phi - 1|`` to first order.
    """
    eps = np.finfo(float).eps
    A = obj.A
    rounding = (A.order + A.nnz) * eps * abs(A).txm(np.abs(x))
    drift = A.order / obj.mb * abs(lam) * abs(obj.B.phi(x) - 1.0)
    return rounding + drift


@pytest.fixture
def gen():
    return np.random.default_rng(12345)


# -- acceptance reporting ----------------------------------------------------

ACCEPTANCE: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criteria")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])
