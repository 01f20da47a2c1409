"""Time integration of the growth-division equation on a uniform grid.

The update is a Lie split of transport and reaction.  The step size is
locked to dt = h / g, so transport at speed g is an exact one-node shift
(no numerical diffusion and the inflow value at x = 0 is exactly zero).
The reaction part is explicit Euler:

    w = (1 - b dt) v,        w_i += 4 b dt v_{2i}   for 2 x_i <= x_max,

where v is the shifted state.  Doubling the node index is why grids carry
an even cell count.  Beyond x_max / 2 the halving source reads outside the
domain and the state there is treated as zero, consistent with choosing
x_max large enough that the solution has decayed below tolerance.

The scheme is first order in dt and positivity preserving for b dt <= 1.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .eigenbasis import ModelParams
from .grids import Grid

__all__ = ["time_step", "step", "SolveResult", "solve", "total_mass"]


def time_step(grid: Grid, p: ModelParams) -> float:
    """The step size h / g the scheme is specialized to."""
    return grid.h / p.g


def _check_step(grid: Grid, p: ModelParams) -> float:
    dt = time_step(grid, p)
    if p.b * dt >= 1.0:
        raise ValueError(
            f"b * dt = {p.b * dt:.6g} >= 1: refine the grid (smaller h) or the "
            f"explicit reaction step loses positivity"
        )
    return dt


def step(u: np.ndarray, grid: Grid, p: ModelParams) -> np.ndarray:
    """One split step of size h / g; returns a new array, u is untouched."""
    dt = _check_step(grid, p)
    u = np.asarray(u, dtype=float)
    if u.shape != grid.nodes.shape:
        raise ValueError(f"state has shape {u.shape}, expected {grid.nodes.shape}")
    v = np.empty_like(u)
    v[0] = 0.0
    v[1:] = u[:-1]
    w = (1.0 - p.b * dt) * v
    half = grid.n_cells // 2
    w[: half + 1] += 4.0 * p.b * dt * v[::2]
    return w


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a solve: realized snapshot times and states, plus the final state.

    times[i] is the time actually reached for the i-th requested snapshot
    (the nearest step multiple, within dt / 2 of the request); states[i] is
    an independent copy of the solution there.  t_final and final describe
    the last step taken.
    """

    grid: Grid
    params: ModelParams
    dt: float
    n_steps: int
    t_final: float
    times: np.ndarray
    states: tuple
    final: np.ndarray


def solve(u0, grid: Grid, p: ModelParams, t_end: float, snapshot_times=None) -> SolveResult:
    """March the split scheme from u0 to the step multiple nearest t_end.

    Args:
        u0: initial nodal values, one per grid node; finite.  Negative
            entries are allowed (modes are signed) but trigger a warning,
            since the continuous model is about nonnegative densities.
        grid: spatial grid; fixes dt = h / g.
        p: model parameters.
        t_end: requested end time, >= 0.
        snapshot_times: optional increasing times in [0, t_end]; each is
            realized at the nearest whole step (always within dt / 2).

    Returns:
        SolveResult; states are copies, mutating them is safe.
    """
    dt = _check_step(grid, p)
    u = np.array(u0, dtype=float)
    if u.shape != grid.nodes.shape:
        raise ValueError(f"initial data has shape {u.shape}, expected {grid.nodes.shape}")
    if not np.all(np.isfinite(u)):
        raise ValueError("initial data contains non-finite values")
    if np.any(u < 0.0):
        warnings.warn(
            f"initial data has negative entries (min {u.min():.3e}); "
            f"interpreting as a signed mode combination",
            stacklevel=2,
        )
    if not (t_end >= 0.0 and np.isfinite(t_end)):
        raise ValueError(f"end time must be finite and >= 0, got {t_end}")
    n_steps = int(round(t_end / dt))
    requested = [] if snapshot_times is None else [float(t) for t in snapshot_times]
    marks = []
    for t in requested:
        if not (0.0 <= t <= t_end + dt / 2.0):
            raise ValueError(f"snapshot time {t} outside [0, t_end]")
        marks.append(min(int(round(t / dt)), n_steps))

    by_step: dict[int, list[int]] = {}
    for i, k in enumerate(marks):
        by_step.setdefault(k, []).append(i)
    states: list = [None] * len(marks)
    times = np.array([k * dt for k in marks], dtype=float)

    for i in by_step.get(0, ()):
        states[i] = u.copy()
    for k in range(1, n_steps + 1):
        u = step(u, grid, p)
        for i in by_step.get(k, ()):
            states[i] = u.copy()
    return SolveResult(
        grid=grid,
        params=p,
        dt=dt,
        n_steps=n_steps,
        t_final=n_steps * dt,
        times=times,
        states=tuple(states),
        final=u,
    )


def total_mass(u, grid: Grid) -> float:
    """Trapezoid approximation of integral u(x) dx (signed, no absolute value)."""
    vals = np.asarray(u, dtype=float)
    if vals.shape != grid.nodes.shape:
        raise ValueError(f"values have shape {vals.shape}, expected {grid.nodes.shape}")
    return float(np.dot(grid.trapezoid_weights(), vals))
