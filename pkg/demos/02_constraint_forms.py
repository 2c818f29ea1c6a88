"""
Constraint forms and the feasible surface
=========================================

The constraint B x^m' = 1 picks the eigenpair flavour: the unit sphere gives
Z-eigenpairs, sum x_i^m gives H-eigenpairs, (x^T D x)^(m'/2) gives
D-eigenpairs.  Each form supplies its value, gradient, Hessian and a
retraction back onto the surface.
"""
import numpy as np

from fcgeig import DiagPower, Identity2, QuadFormPower
from fcgeig.manifold import projector

gen = np.random.default_rng(0)
D = np.array([[2.0, 0.5, 0.0], [0.5, 1.0, 0.2], [0.0, 0.2, 0.5]])
forms = [Identity2(), DiagPower(4), QuadFormPower(4, D)]

x = gen.standard_normal(3)
for B in forms:
    u = B.normalize(x)
    print("%-28s phi(x)=%8.4f  phi(u)=%.15f  ||u||_B=%.15f" % (B, B.phi(x), B.phi(u), B.norm(u)))

# The retraction moves along d and rescales back onto the surface.  Large
# steps are fine; the point stays feasible to rounding.
B = DiagPower(4)
u = B.normalize(x)
d = gen.standard_normal(3)
for a in (1e-3, 1.0, 1e3):
    y = B.retract(u, d, a)
    print("alpha=%-6g  B y^4 - 1 = %+.2e" % (a, B.phi(y) - 1))

# The tangent-space projector is idempotent and kills x.
P = projector(B, u)
print("||P P - P|| =", np.linalg.norm(P @ P - P), "  ||P x|| =", np.linalg.norm(P @ u))

# Euler's identity for a degree-m' form: x . grad phi = m' phi.
for B in forms:
    print("%-28s x.grad/phi = %.12f" % (B, x @ B.grad(x) / B.phi(x)))
