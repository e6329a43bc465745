"""Closed-form solution of the scalar Riccati equation shared by both games.

The equation is a'(t) + eta/2 - 2 a(t)**2 / c = 0 with a(T) = gamma/2.
Its solution has three branches depending on the sign of gamma - sqrt(c*eta);
all three stay finite on [0, T] for gamma >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, TimeGrid


@dataclass(frozen=True)
class RiccatiSolution:
    """Branch-tagged closed-form evaluator for a(t).

    branch is one of "above", "equal", "below" by the sign of
    gamma - sqrt(c * eta). The evaluator accepts scalars or arrays.
    """

    branch: str
    eta: float
    c: float
    gamma: float
    T: float

    def __call__(self, t):
        sq = np.sqrt(self.c * self.eta)  # 2 * the constant-branch value
        rate = np.sqrt(self.eta / self.c)
        t = np.asarray(t, dtype=float)
        if self.branch == "equal":
            return np.broadcast_to(sq / 2.0, t.shape).copy() if t.shape else sq / 2.0
        if self.branch == "below":
            # gamma < sqrt(c eta): integrating da / (2a^2/c - eta/2) = dt from T
            # gives artanh(2a/sq) = rate (T - t) + artanh(gamma/sq), so a rises
            # backward from gamma/2 toward the sq/2 equilibrium.
            return (sq / 2.0) * np.tanh(rate * (self.T - t) + np.arctanh(self.gamma / sq))
        # gamma > sqrt(c eta): same integration on the |2a| > sq side,
        # a(t) = -(sq/2) / tanh(rate (t-T) - artanh(sq/gamma)); the tanh
        # argument is strictly negative on [0, T], so no pole enters.
        return -(sq / 2.0) / np.tanh(rate * (t - self.T) - np.arctanh(sq / self.gamma))


def solve_riccati(params: ModelParams) -> RiccatiSolution:
    """Return the closed-form a(t) for the given parameters.

    Branch selection compares gamma with sqrt(c * eta) exactly (no
    tolerance): near-equal inputs fall into the above/below branches, whose
    formulas degrade gracefully until |gamma - sqrt(c eta)| / sqrt(c eta)
    is ~1e-14.
    """
    sq = np.sqrt(params.c * params.eta)
    if params.gamma == sq:
        branch = "equal"
    elif params.gamma < sq:
        branch = "below"
    else:
        branch = "above"
    sol = RiccatiSolution(branch=branch, eta=params.eta, c=params.c, gamma=params.gamma, T=params.T)
    if branch == "above":
        # Defensive: the pole of the coth expression sits at
        # t = T + artanh(sq/gamma)/rate > T, outside [0, T] for gamma > sq.
        rate = np.sqrt(params.eta / params.c)
        t_pole = params.T + np.arctanh(sq / params.gamma) / rate
        if 0.0 <= t_pole <= params.T:
            raise ValueError(f"Riccati closed form has a pole at t={t_pole} inside [0, T]")
    return sol


def verify_riccati(sol: RiccatiSolution, grid: TimeGrid) -> float:
    """Max |a_numeric - a_closed| over the grid, a_numeric by backward RK4.

    Integrates a' = 2 a**2 / c - eta/2 backward from a(T) = gamma/2 with the
    classical fourth-order scheme, independent of the closed form.
    """
    h = grid.h
    c, eta = sol.c, sol.eta

    def f(a):
        return 2.0 * a * a / c - eta / 2.0

    # Substituting s = T - t gives da/ds = eta/2 - 2 a^2/c, integrated forward in s.
    a = sol.gamma / 2.0
    worst = abs(a - float(sol(sol.T)))
    s = 0.0
    for _ in range(grid.n_steps):
        k1 = -f(a)
        k2 = -f(a + 0.5 * h * k1)
        k3 = -f(a + 0.5 * h * k2)
        k4 = -f(a + h * k3)
        a = a + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        s += h
        worst = max(worst, abs(a - float(sol(sol.T - s))))
    return worst
