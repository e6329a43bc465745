"""Consistency systems, shooting solves, feedback laws, value constants.

The non-cooperative game reduces to a 3-D linear system in (B, xbar, Pbar)
with B(T) fixed and (xbar, Pbar) fixed at t = 0; the cooperative game to a
4-D system in (pbar, xbar, b, l) with (pbar, xbar) fixed at t = 0 and
(b, l) fixed at T. Both are solved by superposing one forced trajectory
with homogeneous ones and matching the terminal conditions, which needs
B1(T) != 0 (first game) and an invertible 2x2 terminal matrix (second).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .model import ModelParams, Population, TimeGrid, check_A2, check_A4
from .odeint import LinearSystem, Trajectory, integrate, superpose
from .riccati import RiccatiSolution, solve_riccati

# Relative degeneracy threshold for the shooting denominators. The
# underlying assumptions are stated as exact non-vanishing, so near-zero
# denominators are an error, not something to regularize.
DEGENERACY_TOL = 1e-10


class A1Violated(Exception):
    """B1(T) is (numerically) zero: the 3-D consistency system has no unique solution."""


class A3Violated(Exception):
    """The terminal vectors (b1,l1)(T), (b2,l2)(T) are (numerically) dependent."""


@dataclass(frozen=True)
class NashMeanField:
    """Solved non-cooperative mean field on the grid.

    traj_Qbar is derived as -(Pbar + 2 a xbar + B) / c pointwise;
    B1_terminal is the homogeneous shooting diagnostic B1(T).
    """

    b0: float
    traj_B: np.ndarray
    traj_xbar: np.ndarray
    traj_Pbar: np.ndarray
    traj_Qbar: np.ndarray
    B1_terminal: float
    params: ModelParams
    grid: TimeGrid


@dataclass(frozen=True)
class SocialMeanField:
    """Solved cooperative mean field on the grid.

    shoot_matrix is [[b1(T), b2(T)], [l1(T), l2(T)]] from the two
    homogeneous trajectories; (b0, l0) solve it against (-gamma zeta, 0).
    """

    b0: float
    l0: float
    traj_pbar: np.ndarray
    traj_xbar: np.ndarray
    traj_b: np.ndarray
    traj_l: np.ndarray
    traj_qbar: np.ndarray
    shoot_matrix: np.ndarray
    shoot_det: float
    params: ModelParams
    grid: TimeGrid


@dataclass(frozen=True)
class FeedbackLaw:
    """Affine feedback v(t, x) = slope(t) * x + intercept(t).

    Coefficients are sampled on the grid; off-grid t uses linear
    interpolation (the simulator itself only ever samples grid points).
    """

    grid: TimeGrid
    slope_values: np.ndarray
    intercept_values: np.ndarray

    def slope(self, t):
        return np.interp(t, self.grid.ts, self.slope_values)

    def intercept(self, t):
        return np.interp(t, self.grid.ts, self.intercept_values)

    def v(self, t, x):
        return self.slope(t) * x + self.intercept(t)


def nash_matrix(a: RiccatiSolution, params: ModelParams, grid: TimeGrid) -> LinearSystem:
    """3-D system for (B, xbar, Pbar) with forcing (eta kappa, 0, alpha beta)."""
    al, c = params.alpha, params.c

    def M(t):
        at = float(a(t))
        return np.array(
            [
                [2.0 * at / c, 0.0, 2.0 * at / c],
                [-1.0 / c, -2.0 * at / c, -1.0 / c],
                [al / c, 2.0 * al * at / c, -al + al / c],
            ]
        )

    K = np.array([params.eta * params.kappa, 0.0, params.alpha * params.beta])
    return LinearSystem(dim=3, matrix_fn=M, forcing=K, grid=grid)


def social_matrix(a: RiccatiSolution, params: ModelParams, grid: TimeGrid) -> LinearSystem:
    """4-D system for (pbar, xbar, b, l) with forcing (alpha beta, 0, eta kappa, 0)."""
    al, c = params.alpha, params.c

    def M(t):
        at = float(a(t))
        return np.array(
            [
                [-al + al / c, 2.0 * al * at / c, al / c, al * al / c],
                [-1.0 / c, -2.0 * at / c, -1.0 / c, -al / c],
                [2.0 * at / c, 0.0, 2.0 * at / c, 2.0 * al * at / c],
                [-1.0 / c, -2.0 * at / c, -1.0 / c, al - al / c],
            ]
        )

    K = np.array([params.alpha * params.beta, 0.0, params.eta * params.kappa, 0.0])
    return LinearSystem(dim=4, matrix_fn=M, forcing=K, grid=grid)


def solve_nash(params: ModelParams, pop: Population, grid: TimeGrid) -> NashMeanField:
    """Shooting solve of the 3-D system: B(T) = -gamma zeta, xbar(0), Pbar(0) given.

    Integrates the forced trajectory phi0 from (0, xbar0, p0) and the
    homogeneous phi1 from (1, 0, 0); b0 = (-gamma zeta - B_phi0(T)) / B1(T).

    Raises
    ------
    A1Violated
        If |B1(T)| <= DEGENERACY_TOL * (1 + sup|phi1|).
    """
    if not check_A2(pop):
        warnings.warn("population draw falls outside its stated A2 intervals", stacklevel=2)
    a = solve_riccati(params)
    sys_forced = nash_matrix(a, params, grid)
    sys_hom = LinearSystem(dim=3, matrix_fn=sys_forced.matrix_fn, forcing=np.zeros(3), grid=grid)
    phi0 = integrate(sys_forced, np.array([0.0, pop.xbar0, params.p0]))
    phi1 = integrate(sys_hom, np.array([1.0, 0.0, 0.0]))
    B1_T = float(phi1.values[-1, 0])
    if abs(B1_T) <= DEGENERACY_TOL * (1.0 + np.max(np.abs(phi1.values))):
        raise A1Violated(f"B1(T) = {B1_T} is numerically zero")
    b0 = (-params.gamma * params.zeta - phi0.values[-1, 0]) / B1_T
    traj = superpose(phi0, [phi1], [b0])
    B = traj.values[:, 0]
    xbar = traj.values[:, 1]
    Pbar = traj.values[:, 2]
    a_grid = np.asarray(a(grid.ts))
    Qbar = -(Pbar + 2.0 * a_grid * xbar + B) / params.c
    return NashMeanField(
        b0=float(b0),
        traj_B=B,
        traj_xbar=xbar,
        traj_Pbar=Pbar,
        traj_Qbar=Qbar,
        B1_terminal=B1_T,
        params=params,
        grid=grid,
    )


def solve_social(params: ModelParams, pop: Population, grid: TimeGrid) -> SocialMeanField:
    """Shooting solve of the 4-D system: (b, l)(T) = (-gamma zeta, 0), (pbar, xbar)(0) given.

    Integrates the forced phi00 from (p0, xbar0, 0, 0) and homogeneous
    phi1, phi2 from (0,0,1,0) and (0,0,0,1); (b0, l0) solve the 2x2
    terminal system by Cramer's rule.

    Raises
    ------
    A3Violated
        If |det| <= DEGENERACY_TOL * product of the terminal-matrix row norms.
    """
    if not check_A4(params):
        warnings.warn(
            "(c - 2) * eta > alpha**2 fails; the constructed law loses its "
            "optimality guarantee (the solve itself proceeds)",
            stacklevel=2,
        )
    a = solve_riccati(params)
    sys_forced = social_matrix(a, params, grid)
    sys_hom = LinearSystem(dim=4, matrix_fn=sys_forced.matrix_fn, forcing=np.zeros(4), grid=grid)
    phi00 = integrate(sys_forced, np.array([params.p0, pop.xbar0, 0.0, 0.0]))
    phi1 = integrate(sys_hom, np.array([0.0, 0.0, 1.0, 0.0]))
    phi2 = integrate(sys_hom, np.array([0.0, 0.0, 0.0, 1.0]))
    b1_T, l1_T = float(phi1.values[-1, 2]), float(phi1.values[-1, 3])
    b2_T, l2_T = float(phi2.values[-1, 2]), float(phi2.values[-1, 3])
    shoot = np.array([[b1_T, b2_T], [l1_T, l2_T]])
    det = b1_T * l2_T - b2_T * l1_T
    row_norms = np.hypot(b1_T, b2_T) * np.hypot(l1_T, l2_T)
    if abs(det) <= DEGENERACY_TOL * row_norms:
        raise A3Violated(f"terminal matrix {shoot.tolist()} is numerically singular")
    r0 = -params.gamma * params.zeta - float(phi00.values[-1, 2])
    r1 = -float(phi00.values[-1, 3])
    b0 = (r0 * l2_T - b2_T * r1) / det
    l0 = (b1_T * r1 - l1_T * r0) / det
    traj = superpose(phi00, [phi1, phi2], [b0, l0])
    pbar = traj.values[:, 0]
    xbar = traj.values[:, 1]
    b = traj.values[:, 2]
    l = traj.values[:, 3]
    a_grid = np.asarray(a(grid.ts))
    qbar = -(2.0 * a_grid * xbar + b + pbar + params.alpha * l) / params.c
    return SocialMeanField(
        b0=float(b0),
        l0=float(l0),
        traj_pbar=pbar,
        traj_xbar=xbar,
        traj_b=b,
        traj_l=l,
        traj_qbar=qbar,
        shoot_matrix=shoot,
        shoot_det=float(det),
        params=params,
        grid=grid,
    )


def nash_feedback(mf: NashMeanField, a: RiccatiSolution) -> FeedbackLaw:
    """v(t, x) = -(Pbar(t) + 2 a(t) x + B(t)) / c as slope/intercept on the grid."""
    a_grid = np.asarray(a(mf.grid.ts))
    slope = -2.0 * a_grid / mf.params.c
    intercept = -(mf.traj_Pbar + mf.traj_B) / mf.params.c
    return FeedbackLaw(grid=mf.grid, slope_values=slope, intercept_values=intercept)


def social_feedback(mf: SocialMeanField, a: RiccatiSolution) -> FeedbackLaw:
    """v(t, x) = -(2 a(t) x + b(t) + pbar(t) + alpha l(t)) / c on the grid."""
    a_grid = np.asarray(a(mf.grid.ts))
    slope = -2.0 * a_grid / mf.params.c
    intercept = -(mf.traj_b + mf.traj_pbar + mf.params.alpha * mf.traj_l) / mf.params.c
    return FeedbackLaw(grid=mf.grid, slope_values=slope, intercept_values=intercept)


def _backward_trapezoid(src: np.ndarray, terminal: float, h: float) -> np.ndarray:
    """F with F' = src, F(T) = terminal, by trapezoid from the right end."""
    seg = 0.5 * h * (src[:-1] + src[1:])
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    return terminal - (cum[-1] - cum)


def value_constant_nash(
    mf: NashMeanField, a: RiccatiSolution, sigma_i: float, grid: TimeGrid
) -> Trajectory:
    """F_i(t) with F_i' = (Pbar+B)^2/(2c) - eta kappa^2/2 - sigma_i^2 a, F_i(T) = gamma zeta^2/2.

    Completes the value function K_i(t, x) = a x^2 + B x + F_i.
    """
    if grid.n_steps != mf.grid.n_steps or grid.T != mf.grid.T:
        raise ValueError("grid must match the solved mean field's grid")
    p = mf.params
    a_grid = np.asarray(a(grid.ts))
    src = (
        (mf.traj_Pbar + mf.traj_B) ** 2 / (2.0 * p.c)
        - p.eta * p.kappa**2 / 2.0
        - sigma_i**2 * a_grid
    )
    F = _backward_trapezoid(src, p.gamma * p.zeta**2 / 2.0, grid.h)
    return Trajectory(grid=grid, values=F[:, None])


def value_constant_social(
    mf: SocialMeanField, a: RiccatiSolution, sigma_i: float, grid: TimeGrid
) -> Trajectory:
    """f_i(t) with f_i' = (b+pbar+alpha l)^2/(2c) - eta kappa^2/2 - sigma_i^2 a, f_i(T) = gamma zeta^2/2.

    Completes the value function V_i(t, x, u) = a x^2 + b x + l u + f_i.
    """
    if grid.n_steps != mf.grid.n_steps or grid.T != mf.grid.T:
        raise ValueError("grid must match the solved mean field's grid")
    p = mf.params
    a_grid = np.asarray(a(grid.ts))
    src = (
        (mf.traj_b + mf.traj_pbar + p.alpha * mf.traj_l) ** 2 / (2.0 * p.c)
        - p.eta * p.kappa**2 / 2.0
        - sigma_i**2 * a_grid
    )
    f = _backward_trapezoid(src, p.gamma * p.zeta**2 / 2.0, grid.h)
    return Trajectory(grid=grid, values=f[:, None])


def consistency_residual(xbar: np.ndarray, qbar: np.ndarray, grid: TimeGrid) -> float:
    """Max |central-difference d(xbar)/dt - qbar| over interior grid points."""
    dx = (xbar[2:] - xbar[:-2]) / (2.0 * grid.h)
    return float(np.max(np.abs(dx - qbar[1:-1])))
