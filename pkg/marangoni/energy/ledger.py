"""Energy-like quantities of the coupled system."""
from __future__ import annotations

import sys
from typing import TYPE_CHECKING, Final

import msgspec
import numpy as np

from marangoni.exceptions import RecordMismatchError
from marangoni.grid.fields import CellField, ensure_same_grid
from marangoni.grid.norms import (
    h1_seminorm,
    l2_norm,
    linf_norm,
    velocity_gradient_sq,
)
from marangoni.grid.operators import divergence_mac, laplacian_cc
from marangoni.model.constitutive import (
    potential_derivative,
    potential_value,
)

if TYPE_CHECKING:
    from marangoni.model.params import EnergyWeights, PhysicalParams
    from marangoni.state import State

MACHINE_EPS: Final = sys.float_info.epsilon


class EnergyRecord(msgspec.Struct, frozen=True):
    """One row of the energy ledger.

    `total` is the sum of the five energy components,
    every component is nonnegative.
    """

    t: float
    kinetic: float
    elastic_grad: float
    elastic_bulk: float
    thermal_grad: float
    thermal_l2: float
    total: float
    diss_visc: float
    diss_phase: float
    diss_heat: float
    a1: float
    a2: float
    max_abs_phi: float
    max_abs_theta: float
    div_u_inf: float

    @property
    def dissipation(self: EnergyRecord) -> float:
        """Sum of the three dissipation terms."""
        return self.diss_visc + self.diss_phase + self.diss_heat


def bulk_integral(phi: CellField, eps: float) -> float:
    """Midpoint quadrature of `F(phi)`."""
    return float(
        np.sum(potential_value(phi.values, eps)) * phi.grid.cell_area,
    )


def elastic_energy(phi: CellField, eps: float) -> float:
    """Ginzburg-Landau energy `|grad phi|^2 / 2 + int F(phi)`."""
    return 0.5 * h1_seminorm(phi) ** 2 + bulk_integral(phi, eps)


def chemical_potential(phi: CellField, eps: float) -> CellField:
    """Return `lap phi - F'(phi)`."""
    return phi.with_values(
        laplacian_cc(phi).values - potential_derivative(phi.values, eps),
    )


def dissipation(
    state: State,
    params: PhysicalParams,
    weights: EnergyWeights,
) -> tuple[float, float, float]:
    """Viscous, phase and thermal dissipation.

    ### Returns:
    `((nu/2) |grad u|^2, a lam0 gamma |lap phi - F'|^2,
    k zeta |lap theta|^2)`.
    """
    ensure_same_grid(state.velocity, state.phi, state.theta)
    capillary: Final = params.a * params.lambda0
    return (
        0.5 * params.nu * velocity_gradient_sq(state.velocity),
        capillary
        * params.gamma
        * l2_norm(chemical_potential(state.phi, params.eps)) ** 2,
        params.k * weights.zeta * l2_norm(laplacian_cc(state.theta)) ** 2,
    )


def unweighted_dissipation(
    record: EnergyRecord,
    params: PhysicalParams,
    weights: EnergyWeights,
) -> float:
    """Return `|grad u|^2 + |lap phi - F'|^2 + |lap theta|^2` of `record`.

    The integrand of the dissipation bound. The temperature term
    is left out when `zeta` is zero, as in the bound.
    """
    total = (
        2.0 * record.diss_visc / params.nu
        + record.diss_phase / (params.a * params.lambda0 * params.gamma)
    )
    if weights.zeta > 0:
        total += record.diss_heat / (params.k * weights.zeta)
    return total


def higher_order_quantities(
    state: State,
    params: PhysicalParams,
) -> tuple[float, float]:
    """Return `(A1, A2)`.

    Both are `|grad u|^2 + a lam0 |lap phi - F'|^2 + c |lap theta|^2`
    with `c = eta1` for `A1` and `c = 1` for `A2`.
    """
    ensure_same_grid(state.velocity, state.phi, state.theta)
    common: Final = velocity_gradient_sq(
        state.velocity,
    ) + params.a * params.lambda0 * (
        l2_norm(chemical_potential(state.phi, params.eps)) ** 2
    )
    heat_term: Final = l2_norm(laplacian_cc(state.theta)) ** 2
    return common + params.eta1 * heat_term, common + heat_term


def total_energy(
    state: State,
    weights: EnergyWeights,
    params: PhysicalParams,
) -> EnergyRecord:
    """Build the full ledger row for `state`.

    `E = |u|^2 + a lam0 |grad phi|^2 + 2 a lam0 int F(phi)
    + zeta |grad theta|^2 + omega |theta|^2`.
    """
    ensure_same_grid(state.velocity, state.phi, state.theta)
    capillary: Final = params.a * params.lambda0
    kinetic: Final = l2_norm(state.velocity) ** 2
    elastic_grad: Final = capillary * h1_seminorm(state.phi) ** 2
    elastic_bulk: Final = 2.0 * capillary * bulk_integral(
        state.phi,
        params.eps,
    )
    thermal_grad: Final = weights.zeta * h1_seminorm(state.theta) ** 2
    thermal_l2: Final = weights.omega * l2_norm(state.theta) ** 2
    diss_visc, diss_phase, diss_heat = dissipation(state, params, weights)
    a1, a2 = higher_order_quantities(state, params)
    return EnergyRecord(
        t=state.t,
        kinetic=kinetic,
        elastic_grad=elastic_grad,
        elastic_bulk=elastic_bulk,
        thermal_grad=thermal_grad,
        thermal_l2=thermal_l2,
        total=(
            kinetic + elastic_grad + elastic_bulk + thermal_grad + thermal_l2
        ),
        diss_visc=diss_visc,
        diss_phase=diss_phase,
        diss_heat=diss_heat,
        a1=a1,
        a2=a2,
        max_abs_phi=linf_norm(state.phi),
        max_abs_theta=linf_norm(state.theta),
        div_u_inf=linf_norm(divergence_mac(state.velocity)),
    )


def isothermal_energy(record: EnergyRecord) -> float:
    """Energy with the halved convention of the isothermal law."""
    return 0.5 * (record.kinetic + record.elastic_grad + record.elastic_bulk)


def isothermal_dissipation(record: EnergyRecord) -> float:
    """`nu |grad u|^2 + lam gamma |lap phi - F'|^2`."""
    return 2.0 * record.diss_visc + record.diss_phase


def isothermal_residual(
    rec_n: EnergyRecord,
    rec_np1: EnergyRecord,
    dt: float | None = None,
) -> float:
    """Relative defect of the discrete isothermal energy law.

    `|(E' - E) / dt + D'| / max(D', machine eps)`.

    ### Parameters:
    - `rec_n`, `rec_np1`: consecutive records of an isothermal run.
    - `dt`: expected step, checked against the record times.

    ### Raises:
    - `RecordMismatchError`: records aren't ordered
        or their spacing doesn't match `dt`.
    """
    step: Final = rec_np1.t - rec_n.t
    if step <= 0:
        order_err_msg: Final = (
            f"Records are not consecutive: t={rec_n.t} then t={rec_np1.t}"
        )
        raise RecordMismatchError(order_err_msg)
    if dt is not None and not np.isclose(step, dt, rtol=1e-9, atol=0.0):
        dt_err_msg: Final = f"Record spacing {step} doesn't match dt={dt}"
        raise RecordMismatchError(dt_err_msg)

    rate: Final = (
        isothermal_energy(rec_np1) - isothermal_energy(rec_n)
    ) / step
    dissipated: Final = isothermal_dissipation(rec_np1)
    return abs(rate + dissipated) / max(dissipated, MACHINE_EPS)
