"""Stationary profile of the rescaled flow and the first eigenpair.

The profile F solves L F = F/(p-2) and generates the separate-variable
solution t^(-1/(p-2)) F, the universal upper bound for the Dirichlet
flow. It is computed by marching the rescaled equation
d_tau v + (p-2) L v = v semi-implicitly: the fixed point of the step
map is exactly the discrete stationary profile, independent of the
pseudo-time step.
"""

from dataclasses import dataclass

import numpy as np

from .domain import Params
from .errors import ConvergenceFailure, ParameterError
from .kernel import KernelWeights
from .operator import apply_operator, lp_norm_p, rayleigh_quotient
from .prox import prox_step


@dataclass
class GiantProfile:
    F: np.ndarray
    mu: float
    residual: float
    iterations: int


@dataclass
class EigenPair:
    lambda1: float
    phi1: np.ndarray
    residual: float
    iterations: int


def giant_residual(F: np.ndarray, kw: KernelWeights, prm: Params) -> float:
    """Scaled stationary residual ||L F - mu F||_inf / ||mu F||_inf."""
    mu = 1.0 / (prm.p - 2.0)
    r = apply_operator(F, kw, prm) - mu * F
    return float(np.max(np.abs(r)) / np.max(np.abs(mu * F)))


def compute_giant(
    kw: KernelWeights,
    prm: Params,
    tol: float = 1e-8,
    max_steps: int = 5000,
    dtau: float = 0.1,
) -> GiantProfile:
    """March v^{k+1} + dtau (p-2) L v^{k+1} = (1+dtau) v^k to its fixed point.

    Started from the constant-1 field. The step map identity
    (p-2) L v_new - v_new = (1 + dtau) (v_old - v_new) / dtau converts
    the increment into the stationary residual, so the march stops as
    soon as the predicted relative residual ||L F - mu F|| / ||mu F||
    falls below tol. Halves dtau if an inner solve fails.
    """
    if not prm.p > 2.0:
        raise ParameterError("the stationary profile requires p > 2")
    mu = 1.0 / (prm.p - 2.0)
    v = np.ones(kw.grid.n_cells)
    inner_tol = min(1e-11, tol * dtau * 1e-2)
    for k in range(1, max_steps + 1):
        try:
            v_new, _ = prox_step(
                (1.0 + dtau) * v, dtau * (prm.p - 2.0), kw, prm,
                tol=inner_tol, u0=v,
            )
        except ConvergenceFailure:
            dtau *= 0.5
            if dtau < 1e-6:
                raise
            continue
        incr = float(np.max(np.abs(v_new - v)))
        predicted = incr * (1.0 + dtau) / dtau * mu / max(
            mu * float(np.max(np.abs(v_new))), 1e-300
        )
        v = v_new
        if predicted <= 0.5 * tol:
            return GiantProfile(
                F=v, mu=1.0 / (prm.p - 2.0),
                residual=giant_residual(v, kw, prm), iterations=k,
            )
    raise ConvergenceFailure(
        f"profile march did not settle in {max_steps} steps", partial=v
    )


def normalize_profile(f1: np.ndarray, prm: Params) -> np.ndarray:
    """Map a solution of L F = mu F to one of L f = f (mu = 1/(p-2)).

    By (p-1)-homogeneity, scaling by c with c^(p-2) mu = 1 does it.
    """
    f1 = np.asarray(f1, dtype=float)
    if not np.any(f1):
        raise ParameterError("cannot normalize the zero field")
    mu = 1.0 / (prm.p - 2.0)
    c = mu ** (-1.0 / (prm.p - 2.0))
    return c * f1


def denormalize_profile(f: np.ndarray, prm: Params) -> np.ndarray:
    """Inverse of normalize_profile."""
    f = np.asarray(f, dtype=float)
    if not np.any(f):
        raise ParameterError("cannot normalize the zero field")
    mu = 1.0 / (prm.p - 2.0)
    c = mu ** (-1.0 / (prm.p - 2.0))
    return f / c


def eigen_residual(phi1, lam, kw, prm) -> float:
    """Sup norm of the Euler-Lagrange defect L phi - lam |phi|^(p-2) phi."""
    phi_pow = np.sign(phi1) * np.abs(phi1) ** (prm.p - 1.0)
    return float(np.max(np.abs(apply_operator(phi1, kw, prm) - lam * phi_pow)))


def compute_eigenpair(
    kw: KernelWeights,
    prm: Params,
    tol: float = 1e-6,
    max_iter: int = 200000,
) -> EigenPair:
    """Minimize the Rayleigh quotient p J(phi) / ||phi||_p^p.

    Projected descent: step against the Euler-Lagrange defect
    L phi - lam Phi(phi) (the quotient gradient on the constraint
    manifold), Barzilai-Borwein step proposal, acceptance only on
    strict quotient decrease (halving otherwise), absolute-value
    symmetrization and ||phi||_p = 1 renormalization each iterate.
    Terminates on the relative Euler-Lagrange residual.

    Near the minimizer the quotient comparison sinks below the float
    rounding floor before the residual target is met; a polish phase
    then continues the same iteration but accepts on contraction of
    the defect norm instead.
    """
    n = kw.grid.n_cells
    phi1 = np.abs(bump_like(kw))
    phi1 /= lp_norm_p(phi1, kw, prm) ** (1.0 / prm.p)
    lam = rayleigh_quotient(phi1, kw, prm)

    def defect(v, q):
        pw = np.sign(v) * np.abs(v) ** (prm.p - 1.0)
        return apply_operator(v, kw, prm) - q * pw, pw

    r, pw = defect(phi1, lam)
    step = 1.0 / max(lam, 1.0)
    prev = None
    it = 0
    while it < max_iter:
        it += 1
        res = float(np.max(np.abs(r)))
        if res <= tol * lam * float(np.max(np.abs(pw))):
            return EigenPair(lambda1=lam, phi1=phi1, residual=res, iterations=it)
        t = step
        accepted = False
        for _ in range(60):
            cand = np.abs(phi1 - t * r)
            nrm = lp_norm_p(cand, kw, prm)
            if nrm > 0.0:
                cand /= nrm ** (1.0 / prm.p)
                lam_c = rayleigh_quotient(cand, kw, prm)
                if lam - lam_c >= 1e-14:
                    accepted = True
                    break
            t *= 0.5
        if not accepted:
            # quotient comparisons exhausted at float precision:
            # switch to defect-norm contraction
            break
        r_new, pw_new = defect(cand, lam_c)
        s = cand - phi1
        y = r_new - r
        sy = float(np.dot(s, y))
        step = float(np.dot(s, s)) / sy if sy > 0.0 else t * 2.0
        phi1, lam, r, pw = cand, lam_c, r_new, pw_new
    else:
        raise ConvergenceFailure(
            f"eigen descent did not converge in {max_iter} iterations",
            partial=EigenPair(lambda1=lam, phi1=phi1,
                              residual=float(np.max(np.abs(r))), iterations=it),
        )

    rn = float(np.linalg.norm(r))
    memory = [rn]
    while it < max_iter:
        it += 1
        res = float(np.max(np.abs(r)))
        if res <= tol * lam * float(np.max(np.abs(pw))):
            return EigenPair(lambda1=lam, phi1=phi1, residual=res, iterations=it)
        t = step
        ref = max(memory)
        for _ in range(60):
            cand = np.abs(phi1 - t * r)
            nrm = lp_norm_p(cand, kw, prm)
            if nrm > 0.0:
                cand /= nrm ** (1.0 / prm.p)
                lam_c = rayleigh_quotient(cand, kw, prm)
                r_new, pw_new = defect(cand, lam_c)
                rn_new = float(np.linalg.norm(r_new))
                if rn_new <= (1.0 - 1e-4) * ref:
                    break
            t *= 0.5
        else:
            raise ConvergenceFailure(
                f"eigen descent stagnated after {it} iterations "
                f"(residual {res:.3e})",
                partial=EigenPair(lambda1=lam, phi1=phi1, residual=res,
                                  iterations=it),
            )
        s = cand - phi1
        y = r_new - r
        sy = float(np.dot(s, y))
        step = float(np.dot(s, s)) / sy if sy > 0.0 else t * 2.0
        phi1, lam, r, pw = cand, lam_c, r_new, pw_new
        memory.append(rn_new)
        if len(memory) > 8:
            memory.pop(0)
    raise ConvergenceFailure(
        f"eigen descent did not converge in {max_iter} iterations",
        partial=EigenPair(lambda1=lam, phi1=phi1,
                          residual=float(np.max(np.abs(r))), iterations=it),
    )


def bump_like(kw: KernelWeights) -> np.ndarray:
    """Positive symmetric starting guess vanishing at the boundary."""
    g = kw.grid
    y = (2.0 * g.centers - (g.xL + g.xR)) / (g.xR - g.xL)
    return 1.0 - y**2
