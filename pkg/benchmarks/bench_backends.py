"""Time the compiled Euler kernel against the NumPy fallback.

Runs the replication kernel at several population / grid sizes and prints
best-of-``--repeats`` wall times plus the speedup. Imports both kernel
modules directly, so it works regardless of GRIDMFG_BACKEND; if the
extension is missing only the NumPy column is shown.

Usage: python3 benchmarks/bench_backends.py [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from gridmfg import ModelParams, PopulationTemplate, TimeGrid, sample_population
from gridmfg._euler_np import run_replication as run_np
from gridmfg.meanfield import nash_feedback, solve_nash
from gridmfg.riccati import solve_riccati
from gridmfg.simulate import population_generator

TEMPLATE = PopulationTemplate(x0_lo=2.0, x0_hi=2.5, sigma_lo=1.0, sigma_hi=1.5)

try:
    from gridmfg._euler import run_replication as run_c
except ImportError:
    run_c = None

PARAMS = ModelParams(
    alpha=1.0, beta=4.0, eta=1.0, kappa=4.0, gamma=2.0, zeta=9.0, c=4.0, p0=3.0, T=2.0
)
SIZES = [(64, 500), (256, 1000), (1024, 2000), (4096, 2000)]


def kernel_args(n_agents: int, n_steps: int):
    grid = TimeGrid(T=PARAMS.T, n_steps=n_steps)
    pop = sample_population(TEMPLATE, n_agents, population_generator(7, n_agents))
    law = nash_feedback(solve_nash(PARAMS, pop, grid), solve_riccati(PARAMS))
    dW = population_generator(13, n_agents).normal(0.0, np.sqrt(grid.h), (n_steps, n_agents))
    return (
        pop.x0,
        pop.sigma,
        dW,
        law.slope_values,
        law.intercept_values,
        PARAMS.alpha,
        PARAMS.beta,
        PARAMS.eta,
        PARAMS.kappa,
        PARAMS.gamma,
        PARAMS.zeta,
        PARAMS.c,
        PARAMS.p0,
        grid.h,
    )


def best_of(fn, args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    ns = ap.parse_args()

    header = f"{'N':>6} {'steps':>6} {'numpy [ms]':>12}"
    if run_c is not None:
        header += f" {'c [ms]':>12} {'speedup':>8} {'max rel diff':>13}"
    print(header)

    for n_agents, n_steps in SIZES:
        args = kernel_args(n_agents, n_steps)
        t_np = best_of(run_np, args, ns.repeats)
        line = f"{n_agents:>6} {n_steps:>6} {t_np * 1e3:>12.2f}"
        if run_c is not None:
            t_c = best_of(run_c, args, ns.repeats)
            P_np = run_np(*args)[0]
            P_c = run_c(*args)[0]
            rel = np.max(np.abs(P_np - P_c) / np.maximum(np.abs(P_np), 1e-300))
            line += f" {t_c * 1e3:>12.2f} {t_np / t_c:>7.1f}x {rel:>13.2e}"
        print(line)

    if run_c is None:
        print("compiled extension not built; only the NumPy backend was timed")


if __name__ == "__main__":
    main()
