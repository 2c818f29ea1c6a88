"""
Checking the derivatives and the eigenvalue list
================================================

Finite differences confirm the analytic gradient and Hessian; for n = 2 and
n = 3 an independent enumeration lists every eigenvalue, so solver output can
be checked against it.
"""
import numpy as np

from fcgeig import DiagPower, Identity2, Objective, Sense, enumerate_n2, enumerate_n3
from fcgeig import example1, example6, fd_check_gradient, fd_check_hessian, solve
from fcgeig.tensor import dense_from_entries

obj = Objective(example6(), DiagPower(4))
x = DiagPower(4).normalize(np.array([0.4, -0.3, 0.9]))

# Central differences are second order: shrinking the step 10x cuts the
# error about 100x until rounding takes over.
for h in (1e-2, 1e-3, 1e-4, 1e-5):
    print("step %.0e  grad err %.2e  hess err %.2e"
          % (h, fd_check_gradient(obj, x, h), fd_check_hessian(obj, x, h)))

# n = 3: multistart enumeration in both senses.
found = enumerate_n3(Objective(example1(), Identity2()), starts=300)
print("\nZ-eigenvalues of the 3x3x3 tensor:", sorted(found.rounded(4)))

# n = 2: a 1-D angle scan with root refinement finds all of them.
M = np.array([[2.0, 1.0], [1.0, -1.0]])
A2 = dense_from_entries(2, 2, [((1, 1), 2.0), ((1, 2), 1.0), ((2, 2), -1.0)])
print("matrix case:", np.sort(enumerate_n2(Objective(A2, Identity2())).lambdas),
      " eigvalsh:", np.linalg.eigvalsh(M))

A4 = dense_from_entries(4, 2, [((1, 1, 1, 1), 1.0), ((1, 1, 2, 2), -0.4), ((2, 2, 2, 2), 0.7),
                               ((1, 2, 2, 2), 0.3)])
ref = enumerate_n2(Objective(A4, DiagPower(4)))
print("quartic, H-constraint:", np.round(np.sort(ref.lambdas), 6))
gen = np.random.default_rng(0)
for sense in Sense:
    r = solve(Objective(A4, DiagPower(4), sense), gen.uniform(-1, 1, 2))
    print("  %s -> %.10f  (distance to list %.1e)"
          % (sense.value, r.lam, np.min(np.abs(ref.lambdas - r.lam))))
