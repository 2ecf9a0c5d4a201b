from marangoni.energy.decay import DecayFit, fit_decay, heat_mode_rates
from marangoni.energy.ledger import (
    EnergyRecord,
    dissipation,
    elastic_energy,
    higher_order_quantities,
    isothermal_residual,
    total_energy,
)

__all__ = [
    "DecayFit",
    "EnergyRecord",
    "dissipation",
    "elastic_energy",
    "fit_decay",
    "heat_mode_rates",
    "higher_order_quantities",
    "isothermal_residual",
    "total_energy",
]
