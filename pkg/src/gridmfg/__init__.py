"""Mean-field equilibria of a smart-grid charging game.

Solvers for the non-cooperative and cooperative mean-field constructions
(closed-form Riccati coefficient, RK4 shooting for the consistency
systems) plus N-agent Euler-Maruyama Monte Carlo for validating them:
error norms against the mean-field predictions, unilateral-deviation
tests, and the O(1/sqrt(N)) convergence study.
"""

from ._backend import BACKEND
from .meanfield import (
    A1Violated,
    A3Violated,
    FeedbackLaw,
    NashMeanField,
    SocialMeanField,
    consistency_residual,
    nash_feedback,
    nash_matrix,
    social_feedback,
    social_matrix,
    solve_nash,
    solve_social,
    value_constant_nash,
    value_constant_social,
)
from .model import (
    ModelParams,
    Population,
    PopulationTemplate,
    TimeGrid,
    check_A2,
    check_A4,
    lmi_nash,
    lmi_social,
    sample_population,
)
from .odeint import LinearSystem, Trajectory, integrate, superpose
from .riccati import RiccatiSolution, solve_riccati, verify_riccati
from .simulate import (
    ConvergeResult,
    ConvergeRow,
    DeviateResult,
    DeviationSpec,
    SimConfig,
    SimulationResult,
    converge,
    deviate,
    deviation_grid,
    population_generator,
    simulate,
    social_cost,
)

__version__ = "0.1.0"

__all__ = [
    "A1Violated",
    "A3Violated",
    "BACKEND",
    "ConvergeResult",
    "ConvergeRow",
    "DeviateResult",
    "DeviationSpec",
    "FeedbackLaw",
    "LinearSystem",
    "ModelParams",
    "NashMeanField",
    "Population",
    "PopulationTemplate",
    "RiccatiSolution",
    "SimConfig",
    "SimulationResult",
    "SocialMeanField",
    "TimeGrid",
    "Trajectory",
    "check_A2",
    "check_A4",
    "consistency_residual",
    "converge",
    "deviate",
    "deviation_grid",
    "integrate",
    "lmi_nash",
    "lmi_social",
    "nash_feedback",
    "nash_matrix",
    "population_generator",
    "sample_population",
    "simulate",
    "social_cost",
    "social_feedback",
    "social_matrix",
    "solve_nash",
    "solve_riccati",
    "solve_social",
    "superpose",
    "value_constant_nash",
    "value_constant_social",
    "verify_riccati",
]
