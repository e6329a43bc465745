"""N-agent Monte Carlo: simulation, deviation experiments, convergence study.

Agents follow Euler-Maruyama under an affine feedback law while the price
integrates dP = alpha (beta - Q - P) dt by explicit Euler with the
same-step (left-point) Q. Replications use independent counter-based RNG
streams derived from the master seed, so results do not depend on
evaluation order; reductions over replications run in fixed index order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._backend import BACKEND, run_replication
from .meanfield import FeedbackLaw, nash_feedback, social_feedback, solve_nash, solve_social
from .model import ModelParams, Population, PopulationTemplate, TimeGrid, sample_population
from .riccati import solve_riccati

FAMILIES = ("constant", "half_indicator", "sine")

# Stream labels: population draws are keyed by (STREAM_POP, N) so every
# command sees the same population for the same seed, and the convergence
# study gets a fresh draw per N; replication r uses (STREAM_SIM, r).
STREAM_POP = 0
STREAM_SIM = 1


def population_generator(seed: int, n: int) -> np.random.Generator:
    """Counter-based generator for the size-n population draw under seed."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(STREAM_POP, int(n)))
    return np.random.Generator(np.random.Philox(ss))


def _rep_generator(seed: int, rep: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(STREAM_SIM, int(rep)))
    return np.random.Generator(np.random.Philox(ss))


def _draw_increments(seed: int, rep: int, n_steps: int, n_agents: int, h: float) -> np.ndarray:
    # Fixed (step, agent) layout: the draw for (rep, agent, step) is the
    # (step * N + agent)-th variate of the replication's stream.
    gen = _rep_generator(seed, rep)
    return gen.normal(0.0, np.sqrt(h), (n_steps, n_agents))


@dataclass(frozen=True)
class DeviationSpec:
    """One unilateral deviation: agent ``agent_index`` adds delta * phi(t).

    family selects phi from {1, 1[t < T/2], sin(pi t / T)}.
    """

    family: str
    delta: float
    agent_index: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.agent_index < 0:
            raise ValueError(f"agent_index must be >= 0, got {self.agent_index}")


@dataclass(frozen=True)
class SimConfig:
    replications: int
    seed: int
    mode: str = "nash"
    deviation: DeviationSpec | None = None

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications}")
        if self.mode not in ("nash", "social"):
            raise ValueError(f"mode must be 'nash' or 'social', got {self.mode!r}")


@dataclass(frozen=True)
class SimulationResult:
    """Cross-replication aggregates of one Monte Carlo run.

    err_P and err_Q estimate the norm sqrt(E int_0^T w^2 dt) of the gap
    between the realized price / mean rate and the mean-field references
    (time integral by trapezoid, expectation by the replication mean).
    """

    grid: TimeGrid
    P_mean: np.ndarray
    P_std: np.ndarray
    Q_mean: np.ndarray
    Q_std: np.ndarray
    Xbar_mean: np.ndarray
    Pbar_ref: np.ndarray
    Qbar_ref: np.ndarray
    J_hat: np.ndarray
    J_hat_se: np.ndarray
    J_soc_hat: float
    J_soc_se: float
    j_soc_reps: np.ndarray
    err_P: float
    err_Q: float
    xsq_sup: float
    v_paths: np.ndarray


@dataclass(frozen=True)
class DeviateResult:
    J_dev: float
    J_eq: float
    diff: float
    stderr: float


@dataclass(frozen=True)
class ConvergeRow:
    N: int
    err_P: float
    err_Q: float
    worst_deviation_gain: float
    slope_so_far: float


@dataclass(frozen=True)
class ConvergeResult:
    rows: tuple[ConvergeRow, ...]
    slope: float


def deviation_profile(spec: DeviationSpec, grid: TimeGrid) -> np.ndarray:
    """delta * phi(t_k) on the grid for the spec's family."""
    ts = grid.ts
    if spec.family == "constant":
        phi = np.ones_like(ts)
    elif spec.family == "half_indicator":
        phi = (ts < grid.T / 2.0).astype(float)
    else:
        phi = np.sin(np.pi * ts / grid.T)
    return spec.delta * phi


def _reference_curves(params, pop, grid, mode):
    if mode == "nash":
        mf = solve_nash(params, pop, grid)
        return mf.traj_Pbar, mf.traj_Qbar
    mf = solve_social(params, pop, grid)
    return mf.traj_pbar, mf.traj_qbar


def _law_on_grid(law: FeedbackLaw, grid: TimeGrid):
    if law.grid.n_steps != grid.n_steps or law.grid.T != grid.T:
        raise ValueError("feedback law grid must match the simulation grid")
    return (
        np.ascontiguousarray(law.slope_values, dtype=float),
        np.ascontiguousarray(law.intercept_values, dtype=float),
    )


def _kernel_args(params: ModelParams, h: float):
    return (
        params.alpha,
        params.beta,
        params.eta,
        params.kappa,
        params.gamma,
        params.zeta,
        params.c,
        params.p0,
        h,
    )


def simulate(
    params: ModelParams,
    pop: Population,
    grid: TimeGrid,
    law: FeedbackLaw,
    cfg: SimConfig,
) -> SimulationResult:
    """Monte Carlo run of cfg.replications independent N-agent replications.

    The reference curves for err_P / err_Q come from solving the mean field
    of cfg.mode on this population; the dynamics follow the *passed* law
    (so a mismatched law can be measured against a chosen reference).
    If cfg.deviation is set, the specified agent deviates in every
    replication.
    """
    slope, intercept = _law_on_grid(law, grid)
    ref_P, ref_Q = _reference_curves(params, pop, grid, cfg.mode)
    N = pop.n_agents
    R = cfg.replications
    h = grid.h
    dev = cfg.deviation
    dev_profile = None
    dev_agent = 0
    if dev is not None:
        if dev.agent_index >= N:
            raise ValueError(f"agent_index {dev.agent_index} >= n_agents {N}")
        dev_profile = deviation_profile(dev, grid)
        dev_agent = dev.agent_index
    x0 = np.ascontiguousarray(pop.x0)
    sig = np.ascontiguousarray(pop.sigma)
    args = _kernel_args(params, h)

    P_all = np.empty((R, grid.n_steps + 1))
    Q_all = np.empty((R, grid.n_steps + 1))
    Xbar_sum = np.zeros(grid.n_steps + 1)
    Xsq_sum = np.zeros(grid.n_steps + 1)
    costs = np.empty((R, N))
    v_paths = None
    for r in range(R):
        dW = _draw_increments(cfg.seed, r, grid.n_steps, N, h)
        n_save = min(10, N) if r == 0 else 0
        P_path, Q_path, Xbar_path, Xsq_path, cost, V_save = run_replication(
            x0, sig, dW, slope, intercept, *args, dev_profile, dev_agent, n_save
        )
        P_all[r] = P_path
        Q_all[r] = Q_path
        Xbar_sum += Xbar_path
        Xsq_sum += Xsq_path
        costs[r] = cost
        if r == 0:
            v_paths = V_save

    P_mean = P_all.mean(axis=0)
    Q_mean = Q_all.mean(axis=0)
    if R > 1:
        P_std = P_all.std(axis=0, ddof=1)
        Q_std = Q_all.std(axis=0, ddof=1)
        J_hat_se = costs.std(axis=0, ddof=1) / np.sqrt(R)
    else:
        P_std = np.zeros_like(P_mean)
        Q_std = np.zeros_like(Q_mean)
        J_hat_se = np.zeros(N)
    j_soc_reps = costs.mean(axis=1)
    J_soc_se = float(j_soc_reps.std(ddof=1) / np.sqrt(R)) if R > 1 else 0.0
    err_P = float(np.sqrt(np.mean(np.trapezoid((P_all - ref_P) ** 2, dx=h, axis=1))))
    err_Q = float(np.sqrt(np.mean(np.trapezoid((Q_all - ref_Q) ** 2, dx=h, axis=1))))
    return SimulationResult(
        grid=grid,
        P_mean=P_mean,
        P_std=P_std,
        Q_mean=Q_mean,
        Q_std=Q_std,
        Xbar_mean=Xbar_sum / R,
        Pbar_ref=ref_P,
        Qbar_ref=ref_Q,
        J_hat=costs.mean(axis=0),
        J_hat_se=J_hat_se,
        J_soc_hat=float(j_soc_reps.mean()),
        J_soc_se=J_soc_se,
        j_soc_reps=j_soc_reps,
        err_P=err_P,
        err_Q=err_Q,
        xsq_sup=float(np.max(Xsq_sum / R)),
        v_paths=v_paths,
    )


def deviation_grid(
    params: ModelParams,
    pop: Population,
    grid: TimeGrid,
    law: FeedbackLaw,
    cfg: SimConfig,
    specs: Sequence[DeviationSpec],
) -> list[DeviateResult]:
    """Paired deviation results for several specs sharing equilibrium runs.

    Each replication draws its increments once, runs the undeviated game
    once, and reruns it once per spec with the deviation added (common
    random numbers), so J_dev - J_eq differences cancel the Brownian noise.
    """
    slope, intercept = _law_on_grid(law, grid)
    N = pop.n_agents
    R = cfg.replications
    h = grid.h
    for s in specs:
        if s.agent_index >= N:
            raise ValueError(f"agent_index {s.agent_index} >= n_agents {N}")
    profiles = [deviation_profile(s, grid) for s in specs]
    x0 = np.ascontiguousarray(pop.x0)
    sig = np.ascontiguousarray(pop.sigma)
    args = _kernel_args(params, h)

    c_eq = np.empty((len(specs), R))
    c_dev = np.empty((len(specs), R))
    for r in range(R):
        dW = _draw_increments(cfg.seed, r, grid.n_steps, N, h)
        _, _, _, _, cost_eq, _ = run_replication(
            x0, sig, dW, slope, intercept, *args, None, 0, 0
        )
        for j, s in enumerate(specs):
            _, _, _, _, cost_dev, _ = run_replication(
                x0, sig, dW, slope, intercept, *args, profiles[j], s.agent_index, 0
            )
            c_eq[j, r] = cost_eq[s.agent_index]
            c_dev[j, r] = cost_dev[s.agent_index]

    out = []
    for j in range(len(specs)):
        diffs = c_dev[j] - c_eq[j]
        stderr = float(diffs.std(ddof=1) / np.sqrt(R)) if R > 1 else 0.0
        out.append(
            DeviateResult(
                J_dev=float(c_dev[j].mean()),
                J_eq=float(c_eq[j].mean()),
                diff=float(diffs.mean()),
                stderr=stderr,
            )
        )
    return out


def deviate(
    params: ModelParams,
    pop: Population,
    grid: TimeGrid,
    law: FeedbackLaw,
    cfg: SimConfig,
) -> DeviateResult:
    """Paired cost difference for cfg.deviation (common random numbers).

    With delta = 0 the two runs are identical floating-point computations,
    so diff and stderr are exactly zero.
    """
    if cfg.deviation is None:
        raise ValueError("cfg.deviation must be set for deviate()")
    return deviation_grid(params, pop, grid, law, cfg, [cfg.deviation])[0]


def social_cost(
    params: ModelParams,
    pop: Population,
    grid: TimeGrid,
    law: FeedbackLaw,
    cfg: SimConfig,
):
    """Social cost estimate (mean over agents of J_i) under the given law.

    Returns a (J_soc_hat, stderr, j_soc_reps) record; the per-replication
    values support paired comparisons between laws under shared streams.
    """
    sim = simulate(params, pop, grid, law, cfg)
    return SocialCostResult(
        J_soc_hat=sim.J_soc_hat, stderr=sim.J_soc_se, j_soc_reps=sim.j_soc_reps
    )


@dataclass(frozen=True)
class SocialCostResult:
    J_soc_hat: float
    stderr: float
    j_soc_reps: np.ndarray


def _law_for_mode(params, pop, grid, mode):
    a = solve_riccati(params)
    if mode == "nash":
        mf = solve_nash(params, pop, grid)
        return nash_feedback(mf, a), mf.traj_Pbar, mf.traj_Qbar
    mf = solve_social(params, pop, grid)
    return social_feedback(mf, a), mf.traj_pbar, mf.traj_qbar


def converge(
    params: ModelParams,
    pop_template: PopulationTemplate,
    grid: TimeGrid,
    mode: str,
    N_list: Sequence[int],
    R: int,
    seed: int,
) -> ConvergeResult:
    """Error norms and worst deviation gains across population sizes.

    For each N: draws a fresh population (stream keyed by N), solves the
    mean field on that draw, simulates R replications for err_P / err_Q,
    and runs the three deviation families at delta = 1 on shared
    equilibrium runs; worst_deviation_gain is the most negative family
    diff. slope_so_far is the least-squares slope of log err_P vs log N
    over the rows seen so far (nan for the first row).
    """
    if list(N_list) != sorted(set(int(n) for n in N_list)):
        raise ValueError("N_list must be strictly increasing")
    h = grid.h
    rows = []
    logN, logE = [], []
    for N in N_list:
        N = int(N)
        pop = sample_population(pop_template, N, population_generator(seed, N))
        law, ref_P, ref_Q = _law_for_mode(params, pop, grid, mode)
        slope_arr, intercept_arr = _law_on_grid(law, grid)
        x0 = np.ascontiguousarray(pop.x0)
        sig = np.ascontiguousarray(pop.sigma)
        args = _kernel_args(params, h)
        specs = [DeviationSpec(family=f, delta=1.0) for f in FAMILIES]
        profiles = [deviation_profile(s, grid) for s in specs]

        acc_p = 0.0
        acc_q = 0.0
        diffs = np.empty((len(specs), R))
        for r in range(R):
            dW = _draw_increments(seed, r, grid.n_steps, N, h)
            P_path, Q_path, _, _, cost_eq, _ = run_replication(
                x0, sig, dW, slope_arr, intercept_arr, *args, None, 0, 0
            )
            acc_p += np.trapezoid((P_path - ref_P) ** 2, dx=h)
            acc_q += np.trapezoid((Q_path - ref_Q) ** 2, dx=h)
            for j, s in enumerate(specs):
                _, _, _, _, cost_dev, _ = run_replication(
                    x0, sig, dW, slope_arr, intercept_arr, *args,
                    profiles[j], s.agent_index, 0,
                )
                diffs[j, r] = cost_dev[s.agent_index] - cost_eq[s.agent_index]

        err_P = float(np.sqrt(acc_p / R))
        err_Q = float(np.sqrt(acc_q / R))
        worst = float(diffs.mean(axis=1).min())
        logN.append(np.log(N))
        logE.append(np.log(err_P))
        slope_so_far = (
            float(np.polyfit(logN, logE, 1)[0]) if len(logN) >= 2 else float("nan")
        )
        rows.append(
            ConvergeRow(
                N=N,
                err_P=err_P,
                err_Q=err_Q,
                worst_deviation_gain=worst,
                slope_so_far=slope_so_far,
            )
        )
    return ConvergeResult(rows=tuple(rows), slope=rows[-1].slope_so_far)
