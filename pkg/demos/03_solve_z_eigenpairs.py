"""
One solve, step by step
=======================

Run the feasible conjugate gradient method on the 3 x 3 x 3 test tensor with
the unit-sphere constraint, then look at the iteration trace.
"""
import numpy as np

from fcgeig import Identity2, Objective, Sense, SolveConfig, example1, solve
from fcgeig.solver import residual

A = example1()
obj = Objective(A, Identity2(), Sense.MAXIMIZE)

x0 = np.array([0.2, -0.7, 0.4])
r = solve(obj, x0)
print("converged:", r.converged, "after", r.iterations, "iterations,",
      r.total_backtracks, "backtracks")
print("lambda =", r.lam, "  residual =", r.residual)
print("x =", r.x, " ||x|| =", np.linalg.norm(r.x))

# Maximizing from this start ends at a local maximizer of A x^3 on the sphere,
# not the global one -- see 05_multistart_bench.py for how often each
# eigenvalue turns up.
#
# The trace keeps lambda, the projected-gradient norm and the residual for
# every iterate.  The gradient norm drops superlinearly near the end.
print("\n  k      lambda            |F|         res        alpha")
for t in r.trace:
    print("%3d  %.12f  %.3e  %.3e  %.3e" % (t.k, t.lam, t.grad_norm, t.res, t.alpha))

# Check: A x^2 = lambda x.
print("\n||A x^2 - lambda x|| =", np.linalg.norm(A.txm1(r.x) - r.lam * r.x))
print("residual() recomputed:", residual(obj, r.x))

# Minimizing finds the smallest eigenvalue reachable from this start; a
# fixed initial step (delta) is an alternative to the curvature estimate.
lo = solve(Objective(A, Identity2(), Sense.MINIMIZE), x0)
fixed = solve(obj, x0, SolveConfig(delta=1.0))
print("\nmin from same start:", lo.lam)
print("fixed delta=1: lambda=%.10f in %d iterations" % (fixed.lam, fixed.iterations))

# A callback sees every accepted step.
steps = []
solve(obj, x0, callback=lambda s: steps.append((s.k, s.alpha, s.backtracks)))
print("first steps (k, alpha, backtracks):", steps[:3])
