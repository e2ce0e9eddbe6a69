"""Problem parameters and the 1-D cell-centered grid.

The spatial domain is an interval (xL, xR) split into uniform cells;
unknowns live at cell centers and the function is identically zero
outside the interval.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class Params:
    """Nonlinearity exponent p and fractional order s.

    The kernel constant c is fixed to 1; it only rescales time and
    carries no information.
    """

    p: float
    s: float
    c: float = 1.0

    def __post_init__(self):
        if not self.p > 1.0:
            raise ParameterError(f"p must be > 1, got {self.p}")
        if not 0.0 < self.s < 1.0:
            raise ParameterError(f"s must be in (0, 1), got {self.s}")
        if self.c != 1.0:
            raise ParameterError("kernel constant is fixed to 1")

    @property
    def sp(self) -> float:
        """Kernel exponent product s*p (the 1-D kernel is |x-y|^-(1+sp))."""
        return self.s * self.p


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centered partition of (xL, xR) into n_cells cells."""

    xL: float
    xR: float
    n_cells: int

    def __post_init__(self):
        if not self.xL < self.xR:
            raise ParameterError(f"need xL < xR, got ({self.xL}, {self.xR})")
        if self.n_cells < 3:
            raise ParameterError(f"need n_cells >= 3, got {self.n_cells}")

    @property
    def cell_width(self) -> float:
        return (self.xR - self.xL) / self.n_cells

    @cached_property
    def centers(self) -> np.ndarray:
        h = self.cell_width
        return self.xL + (np.arange(self.n_cells) + 0.5) * h

    @cached_property
    def boundary_distance(self) -> np.ndarray:
        """Distance from each cell center to the nearer endpoint."""
        x = self.centers
        return np.minimum(x - self.xL, self.xR - x)

    @property
    def width(self) -> float:
        return self.xR - self.xL


def make_grid(xL: float, xR: float, n_cells: int) -> Grid:
    """Build a uniform grid on (xL, xR); rejects degenerate input."""
    return Grid(float(xL), float(xR), int(n_cells))


def scale_grid(g: Grid, lam: float) -> Grid:
    """Homothetic rescaling of the domain, keeping the cell count."""
    if not lam > 0.0:
        raise ParameterError(f"scale factor must be > 0, got {lam}")
    return Grid(g.xL * lam, g.xR * lam, g.n_cells)


def check_field(u: np.ndarray, g: Grid) -> np.ndarray:
    """Validate a cell-value vector against a grid; returns it as float64."""
    from .errors import GridMismatchError

    u = np.asarray(u, dtype=float)
    if u.shape != (g.n_cells,):
        raise GridMismatchError(
            f"field of shape {u.shape} does not match grid with {g.n_cells} cells"
        )
    if not np.all(np.isfinite(u)):
        raise ParameterError("field contains non-finite values")
    return u
