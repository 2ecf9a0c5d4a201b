from marangoni.solvers.coupled import (
    SourceTerms,
    StepConfig,
    coupled_step,
    mode_step,
)
from marangoni.solvers.flow import (
    capillary_force,
    predict_velocity,
    pressure_poisson,
    project,
)
from marangoni.solvers.linear import PoissonSolveReport
from marangoni.solvers.scalars import ScalarStepConfig, heat_step, phase_step

__all__ = [
    "PoissonSolveReport",
    "ScalarStepConfig",
    "SourceTerms",
    "StepConfig",
    "capillary_force",
    "coupled_step",
    "heat_step",
    "mode_step",
    "phase_step",
    "predict_velocity",
    "pressure_poisson",
    "project",
]
