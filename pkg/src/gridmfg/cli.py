"""Command-line entry point: config ingestion, subcommands, CSV emission.

Subcommands: check | solve-nash | solve-social | simulate | converge | deviate.
Exit codes: 0 success, 1 assumption violation, 2 configuration error.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from configparser import ConfigParser, Error as ConfigParserError
from dataclasses import dataclass

import numpy as np

from .meanfield import (
    A1Violated,
    A3Violated,
    consistency_residual,
    nash_feedback,
    social_feedback,
    solve_nash,
    solve_social,
)
from .model import (
    ModelParams,
    Population,
    PopulationTemplate,
    TimeGrid,
    check_A2,
    check_A4,
    sample_population,
)
from .riccati import solve_riccati
from .simulate import (
    FAMILIES,
    DeviationSpec,
    SimConfig,
    converge,
    deviation_grid,
    population_generator,
    simulate,
)

DEFAULT_DELTAS = (0.5, 1.0, 2.0)
DEFAULT_N_LIST = (8, 32, 128, 512, 2048)


class ConfigError(Exception):
    """Invalid configuration file or values; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration (model, population, grid, sim, output)."""

    params: ModelParams
    template: PopulationTemplate
    explicit_x0: tuple[float, ...] | None
    explicit_sigma: tuple[float, ...] | None
    n_agents: int
    n_steps: int
    replications: int
    seed: int
    mode: str
    deviation_agent: int
    deviation_deltas: tuple[float, ...]
    n_list: tuple[int, ...]
    output_dir: str

    def population(self) -> Population:
        """The run's population: explicit arrays, or the seeded uniform draw.

        The draw stream is keyed by (seed, n_agents), so check/solve/simulate
        all see the identical population for the same seed.
        """
        if self.explicit_x0 is not None:
            return Population(
                n_agents=self.n_agents,
                x0=np.array(self.explicit_x0),
                sigma=np.array(self.explicit_sigma),
                x0_bounds=(self.template.x0_lo, self.template.x0_hi),
                sigma_bounds=(self.template.sigma_lo, self.template.sigma_hi),
            )
        rng = population_generator(self.seed, self.n_agents)
        return sample_population(self.template, self.n_agents, rng)

    def grid(self) -> TimeGrid:
        return TimeGrid(T=self.params.T, n_steps=self.n_steps)

    def sim_config(self, mode: str | None = None) -> SimConfig:
        return SimConfig(replications=self.replications, seed=self.seed, mode=mode or self.mode)


_SCHEMA = {
    "params": {"alpha", "beta", "eta", "kappa", "gamma", "zeta", "c", "p0", "T"},
    "population": {"distribution", "n", "x0_lo", "x0_hi", "sigma_lo", "sigma_hi", "x0", "sigma"},
    "grid": {"n_steps"},
    "sim": {"replications", "seed", "mode", "deviation_agent", "deviation_deltas", "n_list"},
    "output": {"dir"},
}


def _get(section, key, conv, where):
    if key not in section:
        raise ConfigError(f"missing required key '{key}' in section [{where}]")
    raw = section[key]
    try:
        return conv(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for '{key}' in [{where}]: {raw!r} ({exc})") from exc


def _float_list(raw: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in raw.replace(",", " ").split())


def _int_list(raw: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in raw.replace(",", " ").split())


def parse_config(path: str) -> RunConfig:
    """Parse and validate an INI run configuration.

    Unknown sections or keys are errors (strict parsing prevents silent
    misconfiguration); so are missing required keys and invalid values.
    """
    cp = ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str  # keys are case-sensitive ('T' must not fold to 't')
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except ConfigParserError as exc:
        raise ConfigError(f"config parse error in {path}: {exc}") from exc

    for sec in cp.sections():
        if sec not in _SCHEMA:
            raise ConfigError(f"unknown section [{sec}]")
        for key in cp[sec]:
            if key not in _SCHEMA[sec]:
                raise ConfigError(f"unknown key '{key}' in section [{sec}]")
    for sec in ("params", "population", "grid", "sim"):
        if sec not in cp:
            raise ConfigError(f"missing required section [{sec}]")

    p = cp["params"]
    try:
        params = ModelParams(
            alpha=_get(p, "alpha", float, "params"),
            beta=_get(p, "beta", float, "params"),
            eta=_get(p, "eta", float, "params"),
            kappa=_get(p, "kappa", float, "params"),
            gamma=_get(p, "gamma", float, "params"),
            zeta=_get(p, "zeta", float, "params"),
            c=_get(p, "c", float, "params"),
            p0=_get(p, "p0", float, "params"),
            T=_get(p, "T", float, "params"),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid [params]: {exc}") from exc

    pop = cp["population"]
    try:
        template = PopulationTemplate(
            x0_lo=_get(pop, "x0_lo", float, "population"),
            x0_hi=_get(pop, "x0_hi", float, "population"),
            sigma_lo=_get(pop, "sigma_lo", float, "population"),
            sigma_hi=_get(pop, "sigma_hi", float, "population"),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid [population]: {exc}") from exc
    explicit_x0 = explicit_sigma = None
    if "x0" in pop or "sigma" in pop:
        if "x0" not in pop or "sigma" not in pop:
            raise ConfigError("explicit population needs both 'x0' and 'sigma'")
        explicit_x0 = _get(pop, "x0", _float_list, "population")
        explicit_sigma = _get(pop, "sigma", _float_list, "population")
        if len(explicit_x0) != len(explicit_sigma):
            raise ConfigError("'x0' and 'sigma' must have the same length")
        n_agents = len(explicit_x0)
        if "n" in pop and _get(pop, "n", int, "population") != n_agents:
            raise ConfigError("'n' disagrees with the explicit array length")
    else:
        if _get(pop, "distribution", str, "population").strip() != "uniform":
            raise ConfigError("only 'uniform' population distribution is supported")
        n_agents = _get(pop, "n", int, "population")
    if n_agents < 1:
        raise ConfigError(f"population size must be >= 1, got {n_agents}")

    try:
        n_steps = _get(cp["grid"], "n_steps", int, "grid")
        grid = TimeGrid(T=params.T, n_steps=n_steps)  # validates n_steps
    except ValueError as exc:
        raise ConfigError(f"invalid [grid]: {exc}") from exc

    s = cp["sim"]
    mode = _get(s, "mode", str, "sim").strip() if "mode" in s else "nash"
    if mode not in ("nash", "social"):
        raise ConfigError(f"mode must be 'nash' or 'social', got {mode!r}")
    replications = _get(s, "replications", int, "sim")
    if replications < 1:
        raise ConfigError(f"replications must be >= 1, got {replications}")
    seed = _get(s, "seed", int, "sim")
    if not 0 <= seed < 2**64:
        raise ConfigError(f"seed must fit in 64 bits, got {seed}")
    deviation_agent = _get(s, "deviation_agent", int, "sim") if "deviation_agent" in s else 0
    if not 0 <= deviation_agent < n_agents:
        raise ConfigError(f"deviation_agent {deviation_agent} out of range for n={n_agents}")
    deltas = (
        _get(s, "deviation_deltas", _float_list, "sim")
        if "deviation_deltas" in s
        else DEFAULT_DELTAS
    )
    n_list = _get(s, "n_list", _int_list, "sim") if "n_list" in s else DEFAULT_N_LIST
    if list(n_list) != sorted(set(n_list)):
        raise ConfigError("n_list must be strictly increasing")

    out_dir = cp["output"]["dir"].strip() if ("output" in cp and "dir" in cp["output"]) else "./out"

    del grid
    return RunConfig(
        params=params,
        template=template,
        explicit_x0=explicit_x0,
        explicit_sigma=explicit_sigma,
        n_agents=n_agents,
        n_steps=n_steps,
        replications=replications,
        seed=seed,
        mode=mode,
        deviation_agent=deviation_agent,
        deviation_deltas=deltas,
        n_list=n_list,
        output_dir=out_dir,
    )


def dump_config(cfg: RunConfig) -> str:
    """Effective configuration as INI text; re-parses to an equal RunConfig."""
    p = cfg.params
    lines = [
        "[params]",
        f"alpha = {p.alpha!r}",
        f"beta = {p.beta!r}",
        f"eta = {p.eta!r}",
        f"kappa = {p.kappa!r}",
        f"gamma = {p.gamma!r}",
        f"zeta = {p.zeta!r}",
        f"c = {p.c!r}",
        f"p0 = {p.p0!r}",
        f"T = {p.T!r}",
        "",
        "[population]",
    ]
    if cfg.explicit_x0 is not None:
        lines.append("x0 = " + ", ".join(repr(v) for v in cfg.explicit_x0))
        lines.append("sigma = " + ", ".join(repr(v) for v in cfg.explicit_sigma))
    else:
        lines.append("distribution = uniform")
        lines.append(f"n = {cfg.n_agents}")
    t = cfg.template
    lines += [
        f"x0_lo = {t.x0_lo!r}",
        f"x0_hi = {t.x0_hi!r}",
        f"sigma_lo = {t.sigma_lo!r}",
        f"sigma_hi = {t.sigma_hi!r}",
        "",
        "[grid]",
        f"n_steps = {cfg.n_steps}",
        "",
        "[sim]",
        f"replications = {cfg.replications}",
        f"seed = {cfg.seed}",
        f"mode = {cfg.mode}",
        f"deviation_agent = {cfg.deviation_agent}",
        "deviation_deltas = " + ", ".join(repr(d) for d in cfg.deviation_deltas),
        "n_list = " + ", ".join(str(n) for n in cfg.n_list),
        "",
        "[output]",
        f"dir = {cfg.output_dir}",
        "",
    ]
    return "\n".join(lines)


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_csv(path: str, header: list[str], rows) -> None:
    """Write rows with a header line; floats at 17 significant digits."""
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def cmd_check(cfg: RunConfig) -> int:
    """Report A1-A4 diagnostics; exit 1 if any checked assumption fails."""
    pop = cfg.population()
    grid = cfg.grid()
    ok_a2 = check_A2(pop)
    ok_a4 = check_A4(cfg.params)
    print(f"A2 (population within sampling intervals): {'pass' if ok_a2 else 'FAIL'}")
    cright = (cfg.params.c - 2.0) * cfg.params.eta
    print(
        f"A4 ((c-2)*eta > alpha^2): {'pass' if ok_a4 else 'FAIL'} "
        f"({cright:g} vs {cfg.params.alpha**2:g})"
    )
    ok_a1 = ok_a3 = True
    try:
        nash = solve_nash(cfg.params, pop, grid)
        print(f"A1 (B1(T) != 0): pass, B1(T) = {nash.B1_terminal:.6f}")
    except A1Violated as exc:
        ok_a1 = False
        print(f"A1 (B1(T) != 0): FAIL ({exc})")
    try:
        soc = solve_social(cfg.params, pop, grid)
        m = soc.shoot_matrix
        print(
            f"A3 (terminal vectors independent): pass, "
            f"(b1(T), l1(T)) = ({m[0, 0]:.6f}, {m[1, 0]:.6f}), "
            f"(b2(T), l2(T)) = ({m[0, 1]:.6f}, {m[1, 1]:.6f}), "
            f"det = {soc.shoot_det:.6f}"
        )
    except A3Violated as exc:
        ok_a3 = False
        print(f"A3 (terminal vectors independent): FAIL ({exc})")
    return 0 if (ok_a1 and ok_a2 and ok_a3 and ok_a4) else 1


def cmd_solve(cfg: RunConfig, mode: str) -> int:
    """Solve one mean field, write its CSV, and print the run summary."""
    pop = cfg.population()
    grid = cfg.grid()
    a = solve_riccati(cfg.params)
    ts = grid.ts
    a_grid = np.asarray(a(ts))
    os.makedirs(cfg.output_dir, exist_ok=True)
    gz = cfg.params.gamma * cfg.params.zeta
    if mode == "nash":
        mf = solve_nash(cfg.params, pop, grid)
        path = os.path.join(cfg.output_dir, "meanfield_nash.csv")
        write_csv(
            path,
            ["t", "a", "B", "xbar", "Pbar", "Qbar"],
            zip(ts, a_grid, mf.traj_B, mf.traj_xbar, mf.traj_Pbar, mf.traj_Qbar),
        )
        res_bc = abs(mf.traj_B[-1] + gz)
        res_cons = consistency_residual(mf.traj_xbar, mf.traj_Qbar, grid)
        print(f"b0 = {mf.b0:.12g}")
        print(f"B1(T) = {mf.B1_terminal:.12g}")
        print(f"|B(T) + gamma*zeta| = {res_bc:.3e}")
        print(f"consistency residual = {res_cons:.3e}")
    else:
        mf = solve_social(cfg.params, pop, grid)
        path = os.path.join(cfg.output_dir, "meanfield_social.csv")
        write_csv(
            path,
            ["t", "a", "b", "l", "pbar", "xbar", "qbar"],
            zip(ts, a_grid, mf.traj_b, mf.traj_l, mf.traj_pbar, mf.traj_xbar, mf.traj_qbar),
        )
        res_b = abs(mf.traj_b[-1] + gz)
        res_l = abs(mf.traj_l[-1])
        res_cons = consistency_residual(mf.traj_xbar, mf.traj_qbar, grid)
        print(f"b0 = {mf.b0:.12g}, l0 = {mf.l0:.12g}")
        print(f"|b(T) + gamma*zeta| = {res_b:.3e}, |l(T)| = {res_l:.3e}")
        print(f"consistency residual = {res_cons:.3e}")
    print(f"wrote {path}")
    return 0


def _law_and_mf(cfg: RunConfig, pop, grid, mode: str):
    a = solve_riccati(cfg.params)
    if mode == "nash":
        mf = solve_nash(cfg.params, pop, grid)
        return nash_feedback(mf, a)
    mf = solve_social(cfg.params, pop, grid)
    return social_feedback(mf, a)


def cmd_simulate(cfg: RunConfig, mode: str | None = None) -> int:
    """Monte Carlo run; writes sim.csv and agents.csv."""
    mode = mode or cfg.mode
    pop = cfg.population()
    grid = cfg.grid()
    law = _law_and_mf(cfg, pop, grid, mode)
    sim = simulate(cfg.params, pop, grid, law, cfg.sim_config(mode))
    os.makedirs(cfg.output_dir, exist_ok=True)
    path = os.path.join(cfg.output_dir, "sim.csv")
    write_csv(
        path,
        ["t", "P_mean", "P_std", "Q_mean", "Q_std", "Xbar_mean", "Pbar_ref", "Qbar_ref"],
        zip(
            grid.ts,
            sim.P_mean,
            sim.P_std,
            sim.Q_mean,
            sim.Q_std,
            sim.Xbar_mean,
            sim.Pbar_ref,
            sim.Qbar_ref,
        ),
    )
    n_saved = sim.v_paths.shape[1]
    agents_path = os.path.join(cfg.output_dir, "agents.csv")
    write_csv(
        agents_path,
        ["t"] + [f"v{i + 1}" for i in range(n_saved)],
        (
            [t] + list(sim.v_paths[k])
            for k, t in enumerate(grid.ts)
        ),
    )
    print(f"mode = {mode}, N = {pop.n_agents}, R = {cfg.replications}")
    print(f"err_P = {sim.err_P:.6f}, err_Q = {sim.err_Q:.6f}")
    print(f"J_soc = {sim.J_soc_hat:.6f} +/- {sim.J_soc_se:.6f}")
    print(f"wrote {path}")
    print(f"wrote {agents_path}")
    return 0


def cmd_converge(cfg: RunConfig) -> int:
    """Convergence study over n_list; writes converge.csv, prints the slope."""
    grid = cfg.grid()
    result = converge(
        cfg.params, cfg.template, grid, cfg.mode, cfg.n_list, cfg.replications, cfg.seed
    )
    os.makedirs(cfg.output_dir, exist_ok=True)
    path = os.path.join(cfg.output_dir, "converge.csv")
    write_csv(
        path,
        ["N", "err_P", "err_Q", "worst_deviation_gain", "slope_so_far"],
        (
            (row.N, row.err_P, row.err_Q, row.worst_deviation_gain, row.slope_so_far)
            for row in result.rows
        ),
    )
    for row in result.rows:
        print(
            f"N = {row.N:6d}: err_P = {row.err_P:.6f}, err_Q = {row.err_Q:.6f}, "
            f"worst deviation gain = {row.worst_deviation_gain:+.6f}"
        )
    print(f"fitted slope of log(err_P) vs log(N): {result.slope:.4f}")
    print(f"wrote {path}")
    return 0


def cmd_deviate(cfg: RunConfig) -> int:
    """Deviation experiments for every family and configured delta."""
    pop = cfg.population()
    grid = cfg.grid()
    law = _law_and_mf(cfg, pop, grid, cfg.mode)
    specs = [
        DeviationSpec(family=fam, delta=d, agent_index=cfg.deviation_agent)
        for fam in FAMILIES
        for d in cfg.deviation_deltas
    ]
    results = deviation_grid(cfg.params, pop, grid, law, cfg.sim_config(), specs)
    os.makedirs(cfg.output_dir, exist_ok=True)
    path = os.path.join(cfg.output_dir, "deviate.csv")
    write_csv(
        path,
        ["family", "delta", "J_dev", "J_eq", "diff", "stderr"],
        (
            (s.family, s.delta, r.J_dev, r.J_eq, r.diff, r.stderr)
            for s, r in zip(specs, results)
        ),
    )
    worst = min(r.diff for r in results)
    for s, r in zip(specs, results):
        print(
            f"{s.family:15s} delta = {s.delta:4.2f}: "
            f"diff = {r.diff:+.6f} +/- {r.stderr:.6f}"
        )
    print(f"worst deviation gain: {worst:+.6f}")
    print(f"wrote {path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridmfg",
        description="Mean-field charging game: solvers and Monte Carlo studies",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("check", "solve-nash", "solve-social", "simulate", "converge", "deviate"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="path to the INI run configuration")
        sp.add_argument("--out", default=None, help="output directory (default ./out)")
        sp.add_argument("--seed", type=int, default=None, help="override the config seed")
        sp.add_argument("--steps", type=int, default=None, help="override grid n_steps")
        sp.add_argument(
            "--dump-config",
            action="store_true",
            help="print the effective configuration and exit",
        )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
        updates = {}
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError(f"--seed must fit in 64 bits, got {args.seed}")
            updates["seed"] = args.seed
        if args.steps is not None:
            if args.steps < 2:
                raise ConfigError(f"--steps must be >= 2, got {args.steps}")
            updates["n_steps"] = args.steps
        if args.out is not None:
            updates["output_dir"] = args.out
        elif cfg.output_dir is None:
            updates["output_dir"] = "./out"
        if updates:
            cfg = dataclasses.replace(cfg, **updates)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.dump_config:
        print(dump_config(cfg), end="")
        return 0

    try:
        if args.command == "check":
            return cmd_check(cfg)
        if args.command == "solve-nash":
            return cmd_solve(cfg, "nash")
        if args.command == "solve-social":
            return cmd_solve(cfg, "social")
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "converge":
            return cmd_converge(cfg)
        return cmd_deviate(cfg)
    except (A1Violated, A3Violated) as exc:
        print(f"assumption violation: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
