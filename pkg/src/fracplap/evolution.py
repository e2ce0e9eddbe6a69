"""Backward-Euler time marching and the rescaled variables.

The marcher chains warm-started prox solves. Geometric schedules are
the workhorse for long-time asymptotics: decades of t cost O(log t)
steps and the per-step relative increment (ratio - 1) controls the
time-discretization error of self-similar decay.
"""

from dataclasses import dataclass, field

import numpy as np

from .domain import Params
from .errors import ConvergenceFailure, ParameterError
from .kernel import KernelWeights, tail_mass_coefficient
from .prox import prox_step


@dataclass(frozen=True)
class TimeSchedule:
    """Step sequence on [t0, t_end]; uniform or geometric."""

    kind: str
    t0: float
    t_end: float
    n_steps: int = 0
    ratio: float = 0.0

    def __post_init__(self):
        if self.kind not in ("uniform", "geometric"):
            raise ParameterError(f"unknown schedule kind {self.kind!r}")
        if not 0.0 <= self.t0 < self.t_end:
            raise ParameterError(f"need 0 <= t0 < t_end, got ({self.t0}, {self.t_end})")
        if self.kind == "uniform" and self.n_steps < 1:
            raise ParameterError("uniform schedule needs n_steps >= 1")
        if self.kind == "geometric":
            if not self.ratio > 1.0:
                raise ParameterError("geometric schedule needs ratio > 1")
            if self.t0 == 0.0:
                raise ParameterError("geometric schedule needs t0 > 0")

    def times(self) -> np.ndarray:
        if self.kind == "uniform":
            return np.linspace(self.t0, self.t_end, self.n_steps + 1)
        n = int(np.ceil(np.log(self.t_end / self.t0) / np.log(self.ratio)))
        t = self.t0 * self.ratio ** np.arange(n + 1)
        t[-1] = self.t_end
        # guard against a vanishing last step from the cap
        if t.size > 1 and t[-1] <= t[-2]:
            t = np.delete(t, t.size - 2)
        return t


@dataclass
class StepRecord:
    mass: float
    l1: float
    l2: float
    linf: float
    iterations: int
    residual: float
    mass_loss_rate: float


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n_times, n_cells)
    per_step: list = field(default_factory=list)
    grid: object = None
    params: object = None

    def __len__(self):
        return self.times.size

    def norms(self, q) -> np.ndarray:
        """Discrete L^q norms (h-weighted) of every snapshot."""
        h = self.grid.cell_width
        a = np.abs(self.states)
        if q == np.inf or q == "inf":
            return a.max(axis=1)
        q = float(q)
        return (np.sum(a**q, axis=1) * h) ** (1.0 / q)

    def mass(self) -> np.ndarray:
        return self.states.sum(axis=1) * self.grid.cell_width


def evolve(
    u0: np.ndarray,
    sched: TimeSchedule,
    kw: KernelWeights,
    prm: Params,
    tol: float = 1e-10,
    max_iter: int = 50000,
    rel_floor: float = 0.0,
) -> Trajectory:
    """March problem DP from u0 over the schedule's time points.

    Each step solves u_{k+1} + dt_k * L u_{k+1} = u_k. Inner-solver
    failure raises ConvergenceFailure with the partial trajectory
    attached.

    rel_floor = 0 (the default) makes the inner stopping rule track
    the decaying solution scale, which keeps the discrete mass balance
    exact in relative terms over many decades of decay (the p > 2
    regime). Fast-diffusion runs (p < 2) should pass rel_floor = 1:
    near extinction the operator terms dwarf the data, so a target
    proportional to ||u_k||_inf sinks below the rounding floor of the
    residual evaluation.
    """
    u = kw.check(u0).copy()
    times = sched.times()
    h = kw.grid.cell_width
    states = np.empty((times.size, u.size))
    states[0] = u
    per_step = []
    traj = Trajectory(times=times, states=states, per_step=per_step,
                      grid=kw.grid, params=prm)
    for k in range(times.size - 1):
        dt = times[k + 1] - times[k]
        guess = u
        if k >= 1:
            # linear extrapolation in time; trims inner iterations on
            # smooth trajectories
            dt_prev = times[k] - times[k - 1]
            guess = u + (dt / dt_prev) * (u - states[k - 1])
        try:
            u, rep = prox_step(u, dt, kw, prm, tol=tol, max_iter=max_iter,
                               u0=guess, rel_floor=rel_floor)
        except ConvergenceFailure as exc:
            exc.partial = Trajectory(
                times=times[: k + 1], states=states[: k + 1],
                per_step=per_step, grid=kw.grid, params=prm,
            )
            raise
        if not np.all(np.isfinite(u)):
            raise ConvergenceFailure(
                f"non-finite state at t={times[k + 1]:g}",
                partial=Trajectory(times=times[: k + 1], states=states[: k + 1],
                                   per_step=per_step, grid=kw.grid, params=prm),
            )
        states[k + 1] = u
        per_step.append(
            StepRecord(
                mass=float(u.sum() * h),
                l1=float(np.sum(np.abs(u)) * h),
                l2=float(np.sqrt(np.sum(u**2) * h)),
                linf=float(np.max(np.abs(u))),
                iterations=rep.iterations,
                residual=rep.residual,
                mass_loss_rate=tail_mass_coefficient(kw, u, prm),
            )
        )
    return traj


def to_rescaled(traj: Trajectory, a: float, prm: Params) -> Trajectory:
    """Change of variables v = (a+t)^(1/(p-2)) u, tau = log(a+t)/(p-2)."""
    if not prm.p > 2.0:
        raise ParameterError("rescaled variables require p > 2")
    t = traj.times
    if np.any(a + t <= 0.0):
        raise ParameterError("need a + t > 0 along the trajectory")
    m = 1.0 / (prm.p - 2.0)
    tau = np.log(a + t) * m
    v = (a + t)[:, None] ** m * traj.states
    return Trajectory(times=tau, states=v, per_step=traj.per_step,
                      grid=traj.grid, params=traj.params)


def from_rescaled(traj: Trajectory, a: float, prm: Params) -> Trajectory:
    """Inverse of to_rescaled."""
    if not prm.p > 2.0:
        raise ParameterError("rescaled variables require p > 2")
    m = 1.0 / (prm.p - 2.0)
    t = np.exp(traj.times / m) - a
    u = (a + t)[:, None] ** (-m) * traj.states
    return Trajectory(times=t, states=u, per_step=traj.per_step,
                      grid=traj.grid, params=traj.params)


def to_extinction_rescaled(traj: Trajectory, T: float, prm: Params) -> Trajectory:
    """Extinction variables v = (T-t)^(-1/(2-p)) u for 1 < p < 2."""
    if not prm.p < 2.0:
        raise ParameterError("extinction rescaling requires 1 < p < 2")
    t = traj.times
    if np.any(t >= T):
        raise ParameterError("all trajectory times must precede T")
    m = 1.0 / (2.0 - prm.p)
    tau = m * np.log(1.0 / (T - t))
    v = (T - t)[:, None] ** (-m) * traj.states
    return Trajectory(times=tau, states=v, per_step=traj.per_step,
                      grid=traj.grid, params=traj.params)


def step_time_derivative(traj: Trajectory, k: int) -> np.ndarray:
    """Backward difference (u_k - u_{k-1}) / (t_k - t_{k-1})."""
    if not 1 <= k < len(traj):
        raise IndexError(f"step index {k} out of range 1..{len(traj) - 1}")
    dt = traj.times[k] - traj.times[k - 1]
    return (traj.states[k] - traj.states[k - 1]) / dt


# ---------------------------------------------------------------------------
# Initial-data presets (all nonnegative, supported in the domain interior).

def bump_data(grid, amplitude: float = 1.0) -> np.ndarray:
    """Smooth compactly supported mollifier-style bump."""
    y = (2.0 * grid.centers - (grid.xL + grid.xR)) / (grid.xR - grid.xL)
    out = np.zeros(grid.n_cells)
    inside = np.abs(y) < 1.0
    out[inside] = amplitude * np.exp(1.0 - 1.0 / (1.0 - y[inside] ** 2))
    return out


def indicator_data(grid, amplitude: float = 1.0) -> np.ndarray:
    """Indicator of the middle half of the domain."""
    x = grid.centers
    lo = grid.xL + 0.25 * grid.width
    hi = grid.xR - 0.25 * grid.width
    return np.where((x >= lo) & (x <= hi), amplitude, 0.0)


def constant_data(grid, amplitude: float = 1.0) -> np.ndarray:
    return np.full(grid.n_cells, amplitude)


def single_cell_data(grid, index: int, amplitude: float = 1.0) -> np.ndarray:
    out = np.zeros(grid.n_cells)
    out[index] = amplitude
    return out
