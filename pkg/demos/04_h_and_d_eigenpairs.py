"""
H-eigenpairs and D-eigenpairs
=============================

Same solver, different constraint.  sum x_i^4 = 1 yields H-eigenpairs of a
fourth-order tensor; (x^T D x)^(m'/2) = 1 yields D-eigenpairs.
"""
import numpy as np

from fcgeig import DiagPower, GenSpec, BGenSpec, Objective, Sense, example6, gen_bform, gen_tensor
from fcgeig import solve
from fcgeig.bench import cluster_eigenvalues

A = example6()
B = DiagPower(4)
gen = np.random.default_rng(1)

# Collect H-eigenvalues from a handful of random starts in both senses.
lams = []
for sense in Sense:
    obj = Objective(A, B, sense)
    for _ in range(30):
        r = solve(obj, gen.uniform(-1, 1, 3))
        if r.converged:
            lams.append(r.lam)
lams = np.array(lams)
groups = cluster_eigenvalues(lams)  # index arrays, one per distinct value
print("H-eigenvalues found:", [round(float(lams[g].mean()), 4) for g in groups])

# Check one pair directly: A x^3 = lambda x^[3].
r = solve(Objective(A, B, Sense.MAXIMIZE), [0.1, 0.2, 1.0])
print("lambda = %.6f  ||A x^3 - lambda x^3|| = %.2e" % (r.lam, np.linalg.norm(A.txm1(r.x) - r.lam * r.x**3)))

# D-eigenpairs for a random fifth-order tensor.  The positive definite D
# comes from a generator; the constraint degree m' can be 2 or 4 -- both
# describe the same surface, so the eigenvalues agree.
n = 6
T = gen_tensor(GenSpec("ex3", order=5, dim=n, seed=0))
for mb in (2, 4):
    D = gen_bform(BGenSpec("ex7", order=mb, dim=n, seed=0))
    r = solve(Objective(T, D, Sense.MAXIMIZE), np.ones(n))
    print("m'=%d  lambda = %.10f  res = %.1e" % (mb, r.lam, r.residual))
