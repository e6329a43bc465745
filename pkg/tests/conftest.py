"""Shared fixtures: the reference configuration used across the suite."""

import numpy as np
import pytest

import gridmfg as g
from gridmfg.simulate import population_generator

SEED = 20260819


@pytest.fixture(scope="session")
def params3():
    # [alpha, beta, eta, kappa, gamma, zeta, c, p0, T] = [1, 4, 1, 4, 2, 9, 4, 3, 2]
    return g.ModelParams(alpha=1, beta=4, eta=1, kappa=4, gamma=2, zeta=9, c=4, p0=3, T=2)


@pytest.fixture(scope="session")
def grid2000():
    return g.TimeGrid(T=2.0, n_steps=2000)


@pytest.fixture(scope="session")
def template():
    return g.PopulationTemplate(x0_lo=2.0, x0_hi=2.5, sigma_lo=1.0, sigma_hi=1.5)


@pytest.fixture(scope="session")
def pop1000(template):
    return g.sample_population(template, 1000, population_generator(SEED, 1000))


@pytest.fixture(scope="session")
def nash_mf(params3, pop1000, grid2000):
    return g.solve_nash(params3, pop1000, grid2000)


@pytest.fixture(scope="session")
def social_mf(params3, pop1000, grid2000):
    return g.solve_social(params3, pop1000, grid2000)


def pop_of_size(template, n, seed=SEED):
    return g.sample_population(template, n, population_generator(seed, n))


def make_pop(x0, sigma):
    """Explicit population with bounds wide enough to satisfy A2."""
    x0 = np.asarray(x0, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    return g.Population(
        n_agents=len(x0),
        x0=x0,
        sigma=sigma,
        x0_bounds=(float(x0.min()), float(x0.max())),
        sigma_bounds=(float(sigma.min()), float(sigma.max())),
    )


def bisect_b0(params, pop, grid, lo=-50.0, hi=50.0, iters=80):
    """Independent b0 oracle: bisection on the terminal gap B(T) + gamma zeta.

    Uses only the forced integration, none of the superposition algebra.
    """
    a = g.solve_riccati(params)
    sys_forced = g.nash_matrix(a, params, grid)

    def gap(b0):
        traj = g.integrate(sys_forced, np.array([b0, pop.xbar0, params.p0]))
        return traj.values[-1, 0] + params.gamma * params.zeta

    glo = gap(lo)
    assert glo * gap(hi) < 0, "bracket must straddle the root"
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if glo * gap(mid) <= 0:
            hi = mid
        else:
            lo, glo = mid, gap(mid)
    return 0.5 * (lo + hi)
