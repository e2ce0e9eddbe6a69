"""Quadrature weights and the discrete nonlocal operator.

Builds the Toeplitz pair weights W and the exterior tail weights T for
the singular kernel |x - y|^(-1-sp), shows their structure, and checks
the two identities that everything downstream relies on: the gradient
of the nonlocal energy equals h times the operator, and both scale as
A^(p-1) lambda^(-sp) under amplitude and domain dilations.

Run:  python3 demos/weights_and_operator.py
"""

import numpy as np

import fracplap as fp
from fracplap.operator import apply_operator, energy

prm = fp.Params(p=3.0, s=0.5)
g = fp.make_grid(-1.0, 1.0, 80)
kw = fp.build_weights(g, prm)
h = g.cell_width

print(f"pair weights: {kw.W.shape} Toeplitz, first row "
      f"{kw.W[0, 1]:.3f}, {kw.W[0, 2]:.3f}, ... (diagonal zero)")
print(f"tail weights: {np.min(kw.T):.3f} (center) .. "
      f"{np.max(kw.T):.1f} (boundary cells)")

u = fp.bump_data(g)
Lu = apply_operator(u, kw, prm)
i = g.n_cells // 2
eps = 1e-6
up, um = u.copy(), u.copy()
up[i] += eps
um[i] -= eps
fd = (energy(up, kw, prm) - energy(um, kw, prm)) / (2.0 * eps)
print(f"gradient identity at the center cell: "
      f"dJ/du = {fd:.6f} vs h*Lu = {h * Lu[i]:.6f}")

kw2 = fp.build_weights(fp.scale_grid(g, 2.0), prm)
Lu2 = apply_operator(3.0 * u, kw2, prm)
pred = 3.0 ** (prm.p - 1.0) * 2.0 ** (-prm.sp)
print(f"scaling law: max |L(3u)_2Omega / Lu| = "
      f"{np.max(np.abs(Lu2 / Lu)):.6f} vs A^(p-1) 2^(-sp) = {pred:.6f}")
