"""First nonlinear eigenpair and its domain-scaling law.

Minimizes the Rayleigh quotient p J(u) / ||u||_p^p over the unit-norm
cone to obtain (lambda_1, phi_1), checks the Euler-Lagrange residual,
and verifies that doubling the domain scales lambda_1 by 2^(-sp).

Run:  python3 demos/eigenpair.py
"""

import numpy as np

import fracplap as fp

prm = fp.Params(p=3.0, s=0.5)
g = fp.make_grid(0.0, 1.0, 120)
kw = fp.build_weights(g, prm)

ep = fp.compute_eigenpair(kw, prm, tol=1e-6)
print(f"lambda_1 = {ep.lambda1:.6f}   residual {ep.residual:.2e}")
print(f"phi_1: min {np.min(ep.phi1):.3e}, max {np.max(ep.phi1):.4f}, "
      f"||phi_1||_p = 1")

kw2 = fp.build_weights(fp.scale_grid(g, 2.0), prm)
ep2 = fp.compute_eigenpair(kw2, prm, tol=1e-6)
ratio = ep2.lambda1 / ep.lambda1
print(f"doubled domain: lambda_1 = {ep2.lambda1:.6f}, "
      f"ratio {ratio:.6f} vs 2^(-sp) = {2.0**(-prm.sp):.6f}")

# the stationary rescaled profile is admissible but not the minimizer
gp = fp.compute_giant(kw, prm, tol=1e-8)
from fracplap.operator import rayleigh_quotient

print(f"Rayleigh quotient of the rescaled profile: "
      f"{rayleigh_quotient(gp.F, kw, prm):.6f} >= lambda_1")
