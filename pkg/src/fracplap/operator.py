"""Discrete nonlocal operator, p-energy, weak form and Rayleigh quotient.

The operator and the energy share one convention (the factor 2 on both
the pair sum of the operator and the tail term of the energy) so that
the gradient identity grad J(u) = h * (L u) holds exactly; everything
downstream (prox objective, eigenproblem, profiles) inherits it.
"""

import numpy as np
from numba import njit

from .domain import Params
from .errors import ParameterError
from .kernel import KernelWeights


def phi(z: float, prm: Params) -> float:
    """Odd power nonlinearity |z|^(p-2) z (kernel constant c = 1)."""
    if z == 0.0:
        return 0.0
    return float(np.sign(z) * np.abs(z) ** (prm.p - 1.0))


@njit(cache=True, inline="always")
def _pw(a, q):
    # a >= 0; integer exponents hit the common p values (3, 4) cheaply
    if q == 2.0:
        return a * a
    if q == 3.0:
        return a * a * a
    if q == 1.0:
        return a
    return a**q


@njit(cache=True)
def _apply_operator(u, W, T, p):
    n = u.shape[0]
    out = np.empty(n)
    q = p - 1.0
    for i in range(n):
        ui = u[i]
        acc = 0.0
        for j in range(n):
            d = ui - u[j]
            if d > 0.0:
                acc += _pw(d, q) * W[i, j]
            elif d < 0.0:
                acc -= _pw(-d, q) * W[i, j]
        if ui > 0.0:
            acc += _pw(ui, q) * T[i]
        elif ui < 0.0:
            acc -= _pw(-ui, q) * T[i]
        out[i] = 2.0 * acc
    return out


@njit(cache=True)
def _energy(u, W, T, p, h):
    n = u.shape[0]
    pair = 0.0
    tail = 0.0
    for i in range(n):
        ui = u[i]
        for j in range(n):
            d = ui - u[j]
            if d != 0.0:
                pair += _pw(abs(d), p) * W[i, j]
        if ui != 0.0:
            tail += _pw(abs(ui), p) * T[i]
    return (pair * h + 2.0 * tail * h) / p


@njit(cache=True)
def _weak_form(u, w, W, T, p, h):
    n = u.shape[0]
    q = p - 1.0
    pair = 0.0
    tail = 0.0
    for i in range(n):
        ui = u[i]
        wi = w[i]
        for j in range(n):
            d = ui - u[j]
            if d > 0.0:
                pair += _pw(d, q) * (wi - w[j]) * W[i, j]
            elif d < 0.0:
                pair -= _pw(-d, q) * (wi - w[j]) * W[i, j]
        if ui > 0.0:
            tail += _pw(ui, q) * wi * T[i]
        elif ui < 0.0:
            tail -= _pw(-ui, q) * wi * T[i]
    return pair * h + 2.0 * tail * h


def apply_operator(u: np.ndarray, kw: KernelWeights, prm: Params) -> np.ndarray:
    """Evaluate (L u)_i = 2 [ sum_j Phi(u_i - u_j) W_ij + Phi(u_i) T_i ]."""
    u = kw.check(u)
    return _apply_operator(u, kw.W, kw.T, prm.p)


def energy(u: np.ndarray, kw: KernelWeights, prm: Params) -> float:
    """Discrete Gagliardo p-energy J(u); nonnegative, p-homogeneous."""
    u = kw.check(u)
    return float(_energy(u, kw.W, kw.T, prm.p, kw.grid.cell_width))


def weak_form(u: np.ndarray, w: np.ndarray, kw: KernelWeights, prm: Params) -> float:
    """Nonlinear pairing <L u, w>; equals sum_i (L u)_i w_i h."""
    u = kw.check(u)
    w = kw.check(w)
    return float(_weak_form(u, w, kw.W, kw.T, prm.p, kw.grid.cell_width))


def lp_norm_p(u: np.ndarray, kw: KernelWeights, prm: Params) -> float:
    """sum_i |u_i|^p h, the denominator of the Rayleigh quotient."""
    u = kw.check(u)
    return float(np.sum(np.abs(u) ** prm.p) * kw.grid.cell_width)


def rayleigh_quotient(phi_f: np.ndarray, kw: KernelWeights, prm: Params) -> float:
    """p J(phi) / ||phi||_p^p; invariant under scaling of phi."""
    phi_f = kw.check(phi_f)
    denom = lp_norm_p(phi_f, kw, prm)
    if denom == 0.0:
        raise ParameterError("Rayleigh quotient undefined for the zero field")
    return prm.p * energy(phi_f, kw, prm) / denom
