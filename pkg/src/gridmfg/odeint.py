"""Fixed-step RK4 for time-varying linear systems and superposition helpers.

Both mean-field consistency systems have the form k'(t) = M(t) k(t) + K
with constant forcing K; the mixed boundary conditions are resolved by
integrating a forced trajectory plus homogeneous ones and superposing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .model import TimeGrid


@dataclass(frozen=True)
class LinearSystem:
    """k'(t) = matrix_fn(t) @ k(t) + forcing, integrated on grid."""

    dim: int
    matrix_fn: Callable[[float], np.ndarray]
    forcing: np.ndarray
    grid: TimeGrid

    def __post_init__(self):
        K = np.asarray(self.forcing, dtype=float)
        object.__setattr__(self, "forcing", K)
        if K.shape != (self.dim,):
            raise ValueError(f"forcing must have shape ({self.dim},), got {K.shape}")


@dataclass(frozen=True)
class Trajectory:
    """States at every grid point; values has shape (n_steps + 1, dim)."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape[0] != self.grid.n_steps + 1:
            raise ValueError(
                f"expected {self.grid.n_steps + 1} states, got {vals.shape[0]}"
            )


def integrate(sys: LinearSystem, initial) -> Trajectory:
    """Classical RK4 from t = 0 to t = T at the grid's uniform step.

    M is evaluated at t, t + h/2, and t + h each step (the closed-form
    Riccati coefficient makes midpoints exact, no interpolation). Identical
    inputs produce bit-identical trajectories.

    Raises
    ------
    ValueError
        If any state component becomes non-finite (a mis-specified system).
    """
    y = np.asarray(initial, dtype=float)
    if y.shape != (sys.dim,):
        raise ValueError(f"initial state must have shape ({sys.dim},), got {y.shape}")
    grid = sys.grid
    h = grid.h
    K = sys.forcing
    out = np.empty((grid.n_steps + 1, sys.dim))
    out[0] = y
    t = 0.0
    for k in range(grid.n_steps):
        M1 = sys.matrix_fn(t)
        M2 = sys.matrix_fn(t + 0.5 * h)
        M3 = sys.matrix_fn(t + h)
        k1 = M1 @ y + K
        k2 = M2 @ (y + 0.5 * h * k1) + K
        k3 = M2 @ (y + 0.5 * h * k2) + K
        k4 = M3 @ (y + h * k3) + K
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise ValueError(f"non-finite state at t={t + h}: {y}")
        out[k + 1] = y
        t += h
    return Trajectory(grid=grid, values=out)


def superpose(
    base: Trajectory, homogeneous: Sequence[Trajectory], weights: Sequence[float]
) -> Trajectory:
    """Pointwise base + sum_j weights[j] * homogeneous[j]."""
    if len(homogeneous) != len(weights):
        raise ValueError(
            f"{len(homogeneous)} homogeneous trajectories but {len(weights)} weights"
        )
    vals = base.values.copy()
    for traj, w in zip(homogeneous, weights):
        if traj.values.shape != base.values.shape:
            raise ValueError(
                f"shape mismatch: {traj.values.shape} vs {base.values.shape}"
            )
        if traj.grid.n_steps != base.grid.n_steps or traj.grid.T != base.grid.T:
            raise ValueError("all trajectories must share the same grid")
        vals += w * traj.values
    return Trajectory(grid=base.grid, values=vals)
