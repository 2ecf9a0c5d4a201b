"""Physical coefficients of the thermo-capillary phase-field model."""
from __future__ import annotations

import dataclasses
from typing import Final

from pydantic import BaseModel, ConfigDict, ValidationInfo, field_validator

# Density is fixed, matched fluids.
RHO: Final = 1.0


class PhysicalParams(BaseModel):
    """All model coefficients.

    ### Fields:
    - `nu`: viscosity.
    - `gamma`: phase relaxation rate.
    - `k`: thermal diffusivity.
    - `lambda0`: capillary scale, proportional to `eps`.
    - `a`: surface-tension offset.
    - `b`: thermal surface-tension slope, zero in isothermal mode.
    - `alpha`: thermal expansion coefficient.
    - `g`: gravitational acceleration.
    - `eps`: interface thickness.
    - `c1_estimate`: estimate of the Gagliardo-Nirenberg constant
        used by the smallness check.
    - `omega_weight`: weight of `||theta||^2` in the total energy.
    - `eta1`: weight of `||lap theta||^2` in the higher-order quantity.
    - `phi_boundary`: constant Dirichlet value of the phase field.
    """

    model_config = ConfigDict(frozen=True)

    nu: float = 1.0
    gamma: float = 1.0
    k: float = 1.0
    lambda0: float = 0.05
    a: float = 1.0
    b: float = 0.5
    alpha: float = 1.0
    g: float = 1.0
    eps: float = 0.05
    c1_estimate: float = 1.0
    omega_weight: float = 1.0
    eta1: float = 1.0
    phi_boundary: float = -1.0

    @field_validator(
        "nu",
        "gamma",
        "k",
        "lambda0",
        "a",
        "eps",
        "c1_estimate",
        "omega_weight",
        "eta1",
    )
    @classmethod
    def _check_positive(
        cls: type[PhysicalParams],
        value: float,
        info: ValidationInfo,
    ) -> float:
        if not value > 0:
            positive_err_msg: Final = f"{info.field_name} must be positive"
            raise ValueError(positive_err_msg)
        return value

    @field_validator("phi_boundary")
    @classmethod
    def _check_phase_boundary(
        cls: type[PhysicalParams],
        value: float,
    ) -> float:
        if abs(value) > 1.0:
            boundary_err_msg: Final = "phi_boundary must lie in [-1, 1]"
            raise ValueError(boundary_err_msg)
        return value

    @property
    def rho(self: PhysicalParams) -> float:
        """Return fluid density, always 1."""
        return RHO

    def isothermal(self: PhysicalParams) -> PhysicalParams:
        """Return copy with thermal coupling switched off (b=0, alpha=0)."""
        return self.model_copy(update={"b": 0.0, "alpha": 0.0})


@dataclasses.dataclass(frozen=True)
class EnergyWeights:
    """Weights of the thermal terms in the total energy.

    - `zeta`: weight of `||grad theta||^2`.
    - `omega`: weight of `||theta||^2`.
    """

    zeta: float
    omega: float
