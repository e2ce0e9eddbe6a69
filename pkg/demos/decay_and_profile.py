"""Long-time behaviour of a bump: power-law decay and the limit profile.

Evolves smooth bump data on (-1, 1) with p = 3, s = 0.5 over a geometric
time schedule, fits the sup-norm decay exponent (expected -1/(p-2) = -1),
and compares the rescaled terminal state t^m u(t) against the stationary
rescaled profile F computed independently by the semi-implicit march.

Run:  python3 demos/decay_and_profile.py
"""

import numpy as np

import fracplap as fp

prm = fp.Params(p=3.0, s=0.5)
g = fp.make_grid(-1.0, 1.0, 120)
kw = fp.build_weights(g, prm)

sched = fp.TimeSchedule("geometric", 1e-3, 300.0, ratio=1.01)
traj = fp.evolve(fp.bump_data(g), sched, kw, prm, tol=1e-10)
print(f"evolved {len(traj) - 1} implicit steps to t = {traj.times[-1]:.1f}")

m = 1.0 / (prm.p - 2.0)
slope = fp.fit_decay_exponent(traj, np.inf, window=(2.0, traj.times[-1]))
print(f"sup-norm decay slope  {slope:+.4f}   (theory {-m:+.4f})")

gp = fp.compute_giant(kw, prm, tol=1e-8)
tilde = traj.times[-1] ** m * traj.states[-1]
err = np.max(np.abs(tilde - gp.F)) / np.max(gp.F)
print(f"rescaled state vs stationary profile: sup error {err:.2%}")

res = fp.check_universal_bound(traj, gp, slack=0.02)
print(f"universal bound t^-m F: {res.detail}")
