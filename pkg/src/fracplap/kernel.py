"""Exact discretization of the singular kernel |x - y|^-(1+sp).

Interior pair weights are exact per-cell integrals of the kernel seen
from each cell center; tail weights integrate the kernel over the
whole exterior of the domain and encode the zero-outside Dirichlet
condition. On a uniform grid the pair weight only depends on the
index offset, so the matrix is Toeplitz and exactly symmetric by
construction.
"""

from dataclasses import dataclass

import numpy as np

from .domain import Grid, Params, check_field
from .errors import ParameterError


def kernel_cell_integral(x: float, a: float, b: float, sp: float) -> float:
    """Integral of |x - y|^-(1+sp) over a cell (a, b) not containing x.

    Closed form from the antiderivative -sign(y-x) |x-y|^-sp / sp.
    """
    if a < x < b:
        raise ParameterError("cell must not contain the evaluation point")
    if b <= x:  # cell entirely to the left
        return ((x - b) ** (-sp) - (x - a) ** (-sp)) / sp
    return ((a - x) ** (-sp) - (b - x) ** (-sp)) / sp


@dataclass(frozen=True)
class KernelWeights:
    """Precomputed pair weights W and exterior tail weights T."""

    W: np.ndarray
    T: np.ndarray
    grid: Grid
    params: Params

    def check(self, u: np.ndarray) -> np.ndarray:
        return check_field(u, self.grid)


def build_weights(g: Grid, prm: Params) -> KernelWeights:
    """Assemble the dense weight matrix and the tail vector.

    W[i, j] is the exact integral of the kernel over cell j seen from
    center i (zero on the diagonal: with piecewise-constant fields the
    same-cell contribution vanishes identically, so no principal value
    is needed). T[i] integrates the kernel over the exterior of the
    domain.
    """
    n = g.n_cells
    h = g.cell_width
    sp = prm.sp

    # Toeplitz profile: cell at offset d spans distances ((d-1/2)h, (d+1/2)h).
    d = np.arange(1, n, dtype=float)
    w = (((d - 0.5) * h) ** (-sp) - ((d + 0.5) * h) ** (-sp)) / sp
    profile = np.concatenate(([0.0], w))
    idx = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    W = profile[idx]

    x = g.centers
    T = ((x - g.xL) ** (-sp) + (g.xR - x) ** (-sp)) / sp

    W.setflags(write=False)
    T.setflags(write=False)
    return KernelWeights(W=W, T=T, grid=g, params=prm)


def tail_mass_coefficient(kw: KernelWeights, u: np.ndarray, prm: Params) -> float:
    """Instantaneous mass-loss rate through the boundary.

    Discrete form of 2 * sum_i Phi(u_i) T_i h with Phi(z) = |z|^(p-2) z;
    for a nonnegative solution this equals -dM/dt.
    """
    u = kw.check(u)
    # |u|^(p-1) sign(u) avoids 0**(negative) for p < 2.
    phi_u = np.sign(u) * np.abs(u) ** (prm.p - 1.0)
    return float(2.0 * np.sum(phi_u * kw.T) * kw.grid.cell_width)
