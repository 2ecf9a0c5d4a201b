from marangoni.equilibrium.stability import (
    StabilityReport,
    SteadyStateDistance,
    stability_experiment,
    steady_state_distance,
)
from marangoni.equilibrium.stationary import (
    EquilibriumSolution,
    classify_minimizer,
    gradient_flow_oracle,
    solve_stationary,
)

__all__ = [
    "EquilibriumSolution",
    "StabilityReport",
    "SteadyStateDistance",
    "classify_minimizer",
    "gradient_flow_oracle",
    "solve_stationary",
    "stability_experiment",
    "steady_state_distance",
]
