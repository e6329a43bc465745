"""Market, cost, and population parameters plus the assumption checkers.

Holds the nine scalar parameters of the charging game, the agent
population (initial storages and volatilities with their sampling
intervals), the uniform time grid shared by every solver, and the
feasibility checks: the interval condition on the population draw, the
strict inequality (c - 2) * eta > alpha**2, and the two positive-real
linear matrix inequalities used by the approximation arguments.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Eigenvalue threshold for the semidefiniteness tests. Symmetric 3x3
# matrices in double precision resolve eigenvalues to ~1e-14, so 1e-10
# separates "zero" from "violated" with a wide margin.
EIG_TOL = 1e-10


@dataclass(frozen=True)
class ModelParams:
    """The nine market/cost scalars of the charging game.

    Parameters
    ----------
    alpha : float
        Price sensitivity (1/time), > 0.
    beta : float
        Market price level, > 0.
    eta : float
        Running storage tracking weight, > 0.
    kappa : float
        Preferred instantaneous storage level.
    gamma : float
        Terminal tracking weight, >= 0.
    zeta : float
        Preferred final storage level.
    c : float
        Control cost weight, > 0.
    p0 : float
        Initial price.
    T : float
        Horizon, > 0.
    """

    alpha: float
    beta: float
    eta: float
    kappa: float
    gamma: float
    zeta: float
    c: float
    p0: float
    T: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if not self.eta > 0:
            raise ValueError(f"eta must be > 0, got {self.eta}")
        if not self.gamma >= 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if not self.c > 0:
            raise ValueError(f"c must be > 0, got {self.c}")
        if not self.T > 0:
            raise ValueError(f"T must be > 0, got {self.T}")


@dataclass(frozen=True)
class Population:
    """N agents: initial storages, volatilities, and their sampling intervals.

    ``x0_bounds`` and ``sigma_bounds`` are the compact intervals the draws
    are supposed to live in; ``check_A2`` tests membership.
    """

    n_agents: int
    x0: np.ndarray
    sigma: np.ndarray
    x0_bounds: tuple[float, float]
    sigma_bounds: tuple[float, float]

    def __post_init__(self):
        if self.n_agents < 1:
            raise ValueError(f"n_agents must be >= 1, got {self.n_agents}")
        x0 = np.asarray(self.x0, dtype=float)
        sigma = np.asarray(self.sigma, dtype=float)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "sigma", sigma)
        if x0.shape != (self.n_agents,) or sigma.shape != (self.n_agents,):
            raise ValueError(
                f"x0 and sigma must both have length n_agents={self.n_agents}, "
                f"got {x0.shape} and {sigma.shape}"
            )
        if np.any(sigma < 0):
            raise ValueError("every sigma entry must be >= 0")

    @property
    def xbar0(self) -> float:
        """Empirical mean of the initial storages (enters both mean-field systems)."""
        return float(np.mean(self.x0))


@dataclass(frozen=True)
class PopulationTemplate:
    """Sampling intervals for a uniform population draw (the A2 intervals)."""

    x0_lo: float
    x0_hi: float
    sigma_lo: float
    sigma_hi: float

    def __post_init__(self):
        if self.x0_hi < self.x0_lo or self.sigma_hi < self.sigma_lo:
            raise ValueError("interval upper bounds must be >= lower bounds")
        if self.sigma_lo < 0:
            raise ValueError("sigma interval must be nonnegative")


def sample_population(template: PopulationTemplate, n: int, rng: np.random.Generator) -> Population:
    """Draw a Population of size n from the template's uniform intervals.

    Draw order is fixed (x0 first, then sigma) so a given generator state
    always produces the same population.
    """
    x0 = rng.uniform(template.x0_lo, template.x0_hi, n)
    sigma = rng.uniform(template.sigma_lo, template.sigma_hi, n)
    return Population(
        n_agents=n,
        x0=x0,
        sigma=sigma,
        x0_bounds=(template.x0_lo, template.x0_hi),
        sigma_bounds=(template.sigma_lo, template.sigma_hi),
    )


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_k = k * h on [0, T] with h = T / n_steps."""

    T: float
    n_steps: int

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"T must be > 0, got {self.T}")
        if self.n_steps < 2:
            raise ValueError(f"n_steps must be >= 2, got {self.n_steps}")

    @property
    def h(self) -> float:
        return self.T / self.n_steps

    @property
    def ts(self) -> np.ndarray:
        # linspace pins the final point to T exactly.
        return np.linspace(0.0, self.T, self.n_steps + 1)


def check_A2(pop: Population) -> bool:
    """True iff every x0 lies in x0_bounds and every sigma in sigma_bounds."""
    x_lo, x_hi = pop.x0_bounds
    s_lo, s_hi = pop.sigma_bounds
    ok_x = bool(np.all((pop.x0 >= x_lo) & (pop.x0 <= x_hi)))
    ok_s = bool(np.all((pop.sigma >= s_lo) & (pop.sigma <= s_hi)))
    return ok_x and ok_s


def check_A4(params: ModelParams) -> bool:
    """True iff (c - 2) * eta > alpha**2 (strict)."""
    return (params.c - 2.0) * params.eta > params.alpha**2


@dataclass(frozen=True)
class LmiResult:
    matrix: np.ndarray
    feasible: bool
    eigenvalues: np.ndarray = field(repr=False, default=None)


def lmi_nash(eps1: float, eps2: float, n: int) -> LmiResult:
    """Positive-real LMI for the non-cooperative approximation bound.

    With the multiplier choices a* = eps1 and b* = 1 / (2 * alpha * eps2)
    the price-sensitivity alpha drops out entirely and the matrix reduces to

        L = [[0, 0,                0              ],
             [0, -1/eps2,          -(1/(2 eps2 n) + 1)],
             [0, -(1/(2 eps2 n) + 1), -2 eps2        ]]

    Feasibility means L is negative semidefinite, which holds exactly when
    n >= (sqrt(2) + 1) / (2 * eps2).

    Returns
    -------
    LmiResult
        matrix, feasible flag (all eigenvalues <= EIG_TOL), eigenvalues.
    """
    if not eps1 > 0:
        raise ValueError(f"eps1 must be > 0, got {eps1}")
    if not eps2 > 0:
        raise ValueError(f"eps2 must be > 0, got {eps2}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    off = -(1.0 / (2.0 * eps2 * n) + 1.0)
    L = np.array(
        [
            [0.0, 0.0, 0.0],
            [0.0, -1.0 / eps2, off],
            [0.0, off, -2.0 * eps2],
        ]
    )
    L = 0.5 * (L + L.T)  # exact symmetrization before the eigensolve
    eigs = np.linalg.eigvalsh(L)
    return LmiResult(matrix=L, feasible=bool(np.all(eigs <= EIG_TOL)), eigenvalues=eigs)


def lmi_social() -> LmiResult:
    """Positive-real LMI for the cooperative bound; always feasible.

    With the multiplier choices a~ = alpha and b~ = 1/alpha the condition
    reduces to positive semidefiniteness of [[0,0,0],[0,2,2],[0,2,2]],
    whose eigenvalues are {0, 0, 4}.
    """
    M = np.array(
        [
            [0.0, 0.0, 0.0],
            [0.0, 2.0, 2.0],
            [0.0, 2.0, 2.0],
        ]
    )
    eigs = np.linalg.eigvalsh(M)
    return LmiResult(matrix=M, feasible=bool(np.all(eigs >= -EIG_TOL)), eigenvalues=eigs)
