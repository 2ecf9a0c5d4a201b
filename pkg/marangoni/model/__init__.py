from marangoni.model.constitutive import (
    buoyancy_density,
    energy_weights,
    potential_derivative,
    potential_value,
    smallness_threshold,
    surface_tension,
)
from marangoni.model.params import EnergyWeights, PhysicalParams

__all__ = [
    "EnergyWeights",
    "PhysicalParams",
    "buoyancy_density",
    "energy_weights",
    "potential_derivative",
    "potential_value",
    "smallness_threshold",
    "surface_tension",
]
