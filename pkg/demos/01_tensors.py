"""
Symmetric tensors and their contractions
========================================

A symmetric tensor stores one value per sorted index.  Everything the solver
needs from it is three contractions: the scalar A x^m, the vector A x^(m-1)
and the matrix A x^(m-2).
"""
import itertools

import numpy as np

from fcgeig import SumUnaryTensor, dense_from_entries, example1

# The 3 x 3 x 3 test tensor ships with the package.
A = example1()
print(A)
print("stored values:", A.nnz)
print("a[1,2,3] =", A.entry((1, 2, 3)), "=", A.entry((3, 1, 2)))

# Contractions at a point.  The Euler identity x . A x^(m-1) = A x^m is a
# cheap sanity check on any implementation.
x = np.array([0.3, -0.5, 0.8])
print("A x^3       =", A.txm(x))
print("x . A x^2   =", x @ A.txm1(x))
print("(A x^1) x   =", A.txm2(x) @ x @ x)

# Against a brute-force full array built from every permutation:
T = A.to_array()
print("full array shape:", T.shape,
      " max diff A x^2:", np.abs(np.einsum("ijk,j,k->i", T, x, x) - A.txm1(x)).max())

# Building your own: pass sorted 1-based indices.  Here x1^4 + 2 x2^4 plus a
# small coupling term.
B = dense_from_entries(4, 2, [((1, 1, 1, 1), 1.0), ((2, 2, 2, 2), 2.0), ((1, 1, 2, 2), 0.1)])
print(B, " B x^4 at (1, 1) =", B.txm([1.0, 1.0]))

# Structured tensors never store n^m values.  a[i1..im] = g[i1] + ... + g[im]
# has closed-form contractions, so n = 100000 is no problem.
n = 100_000
g = np.arange(1, n + 1) / n
S = SumUnaryTensor(4, g)
y = np.full(n, 1 / np.sqrt(n))
print("sum-unary n=%d:  A y^4 = %.6e" % (n, S.txm(y)))

# Small cases agree with the dense form of the same tensor.
S5 = SumUnaryTensor(3, [0.1, 0.2, 0.3, 0.4, 0.5])
z = np.linspace(-1, 1, 5)
print("dense vs closed form:", S5.to_dense().txm(z), S5.txm(z))
print("index count C(n+m-1, m) for n=5, m=3:",
      sum(1 for _ in itertools.combinations_with_replacement(range(5), 3)))
