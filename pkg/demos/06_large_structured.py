"""
Large structured problems
=========================

The sum-unary families never materialize the tensor, so each iteration costs
O(n).  This runs a few solves at n = 100000.
"""
import time

import numpy as np

from fcgeig import GenSpec, Identity2, Objective, Sense, gen_tensor, solve

for fam, order in (("ex4", 4), ("ex5", 3)):
    n = 100_000
    A = gen_tensor(GenSpec(fam, order=order, dim=n))
    obj = Objective(A, Identity2(), Sense.MAXIMIZE)
    gen = np.random.default_rng(0)
    for _ in range(3):
        t0 = time.perf_counter()
        r = solve(obj, gen.uniform(-1, 1, n))
        ms = 1e3 * (time.perf_counter() - t0)
        print("%s m=%d n=%d  lambda=%.6e  iters=%3d  res=%.1e  %.1f ms"
              % (fam, order, n, r.lam, r.iterations, r.residual, ms))

# Starts that land near s = sum(x) = 0 can stop at a critical point with
# lambda = 0: the gradient vanishes there too.  Multi-start runs (see
# 05_multistart_bench.py) separate those from the extreme eigenvalue.
