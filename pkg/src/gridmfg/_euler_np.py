"""Pure-NumPy Euler-Maruyama replication kernel (fallback backend).

Vectorized over agents, looping over time steps. Same contract as the
compiled kernel in _euler.pyx; results agree up to floating summation
order (NumPy means use pairwise summation, the C loop sums sequentially).
"""

from __future__ import annotations

import numpy as np


def run_replication(
    x0: np.ndarray,
    sigma: np.ndarray,
    dW: np.ndarray,
    slope: np.ndarray,
    intercept: np.ndarray,
    alpha: float,
    beta: float,
    eta: float,
    kappa: float,
    gamma: float,
    zeta: float,
    c: float,
    p0: float,
    h: float,
    dev_profile: np.ndarray | None = None,
    dev_agent: int = 0,
    n_save_v: int = 0,
):
    """Simulate one replication of the N-agent game under an affine law.

    Parameters
    ----------
    x0, sigma : (N,) arrays
        Initial storages and volatilities.
    dW : (n_steps, N) array
        Brownian increments, each N(0, h).
    slope, intercept : (n_steps + 1,) arrays
        Feedback coefficients on the grid; agent i trades at
        v = slope[k] * X_i + intercept[k].
    dev_profile : optional (n_steps + 1,) array
        Added to agent ``dev_agent``'s control at every step.
    n_save_v : int
        Number of leading agents whose control paths are recorded.

    Returns
    -------
    (P_path, Q_path, Xbar_path, Xsq_path, cost, V_save)
        Price and mean-rate paths (n_steps + 1,), cross-agent mean of X and
        of X**2 per grid point, per-agent trapezoid costs (N,) including the
        terminal penalty, and the saved control paths (n_steps + 1, n_save_v).
    """
    n_steps = dW.shape[0]
    N = x0.shape[0]
    if dW.shape[1] != N:
        raise ValueError("dW must have shape (n_steps, N)")
    if slope.shape[0] != n_steps + 1 or intercept.shape[0] != n_steps + 1:
        raise ValueError("slope/intercept must have length n_steps + 1")
    if dev_profile is not None:
        if len(dev_profile) != n_steps + 1:
            raise ValueError("dev_profile must have length n_steps + 1")
        if not 0 <= dev_agent < N:
            raise ValueError("dev_agent out of range")

    X = np.array(x0, dtype=float, copy=True)
    P = p0
    P_path = np.empty(n_steps + 1)
    Q_path = np.empty(n_steps + 1)
    Xbar_path = np.empty(n_steps + 1)
    Xsq_path = np.empty(n_steps + 1)
    cost = np.zeros(N)
    V_save = np.empty((n_steps + 1, n_save_v))
    g_prev = None

    for k in range(n_steps + 1):
        v = slope[k] * X + intercept[k]
        if dev_profile is not None:
            v[dev_agent] += dev_profile[k]
        Q = v.mean()
        P_path[k] = P
        Q_path[k] = Q
        Xbar_path[k] = X.mean()
        Xsq_path[k] = np.mean(X * X)
        if n_save_v:
            V_save[k] = v[:n_save_v]
        g = 0.5 * eta * (X - kappa) ** 2 + 0.5 * c * v * v + P * v
        if k > 0:
            cost += 0.5 * h * (g_prev + g)
        g_prev = g
        if k < n_steps:
            X = X + v * h + sigma * dW[k]
            P = P + alpha * (beta - Q - P) * h

    cost += 0.5 * gamma * (X - zeta) ** 2

    if not (np.all(np.isfinite(P_path)) and np.all(np.isfinite(cost))):
        raise ValueError("non-finite state in simulation (bad parameters or step size)")
    return P_path, Q_path, Xbar_path, Xsq_path, cost, V_save
