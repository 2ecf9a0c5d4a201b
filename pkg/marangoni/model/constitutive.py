"""Constitutive functions and derived constants.

All functions are pure and accept scalars or numpy arrays.
"""
from __future__ import annotations

import math
from typing import TYPE_CHECKING, Final

import numpy as np

from marangoni.exceptions import IsothermalModeError
from marangoni.model.params import EnergyWeights

if TYPE_CHECKING:
    from marangoni.marangoni_types import ScalarOrArray
    from marangoni.model.params import PhysicalParams


def potential_value(phi: ScalarOrArray, eps: float) -> ScalarOrArray:
    """Double-well potential `(phi^2 - 1)^2 / (4 eps^2)`.

    ### Parameters:
    - `phi`: phase field value(s).
    - `eps`: interface thickness.

    ### Returns:
    nonnegative potential, zero exactly at `|phi| = 1`.
    """
    return (phi * phi - 1.0) ** 2 / (4.0 * eps * eps)


def potential_derivative(phi: ScalarOrArray, eps: float) -> ScalarOrArray:
    """Derivative of the double well, `(phi^3 - phi) / eps^2`."""
    return (phi * phi * phi - phi) / (eps * eps)


def potential_second_derivative(
    phi: ScalarOrArray,
    eps: float,
) -> ScalarOrArray:
    """Second derivative of the double well, `(3 phi^2 - 1) / eps^2`."""
    return (3.0 * phi * phi - 1.0) / (eps * eps)


def surface_tension(
    theta: ScalarOrArray,
    params: PhysicalParams,
) -> ScalarOrArray:
    """Temperature-dependent surface tension `lambda0 (a - b theta)`.

    Non-positive values are not rejected here,
    monitors flag them as a regime violation.
    """
    return params.lambda0 * (params.a - params.b * theta)


def buoyancy_density(
    theta: ScalarOrArray,
    params: PhysicalParams,
) -> ScalarOrArray:
    """Upward body-force density `alpha g theta`.

    The constant part of the Boussinesq density is a gradient
    and goes into the pressure.
    """
    return params.alpha * params.g * theta


def smallness_threshold(params: PhysicalParams) -> float:
    """Return the bound on `||theta0||_inf` for the dissipative regime.

    `(1 / (4 C1^2 |b|)) sqrt(a gamma nu / (2 lambda0))`.
    The verdict is only as good as `c1_estimate`.

    ### Returns:
    threshold for the initial temperature.

    ### Raises:
    - `IsothermalModeError`: if `b` is zero, condition is vacuous.
    """
    if params.b == 0:
        isothermal_err_msg: Final = "isothermal mode: condition vacuous"
        raise IsothermalModeError(isothermal_err_msg)

    return (
        1.0
        / (4.0 * params.c1_estimate**2 * abs(params.b))
        * math.sqrt(
            params.a * params.gamma * params.nu / (2.0 * params.lambda0),
        )
    )


def energy_weights(params: PhysicalParams) -> EnergyWeights:
    """Build total-energy weights.

    `zeta = k b^2 lambda0 / (a gamma)`, `omega` is taken from config.
    """
    zeta: Final = (
        params.k * params.b**2 * params.lambda0 / (params.a * params.gamma)
    )
    return EnergyWeights(zeta=zeta, omega=params.omega_weight)


def satisfies_smallness(
    phi0_linf: float,
    theta0_linf: float,
    params: PhysicalParams,
) -> bool:
    """Check the initial-data smallness condition.

    In isothermal mode only the phase bound is checked.
    """
    if phi0_linf > 1.0:
        return False
    if params.b == 0:
        return True
    return theta0_linf <= smallness_threshold(params)


def dissipation_bound(
    initial_energy: float,
    params: PhysicalParams,
    weights: EnergyWeights,
) -> float:
    """Bound on the time-integrated dissipation of a monotone run.

    `E(0) max(2/nu, 1/(a lambda0 gamma), 1/(k zeta))`;
    the thermal term is dropped when `zeta` is zero.
    """
    factors = [
        2.0 / params.nu,
        1.0 / (params.a * params.lambda0 * params.gamma),
    ]
    if weights.zeta > 0:
        factors.append(1.0 / (params.k * weights.zeta))
    return initial_energy * max(factors)


def exponential_decay_bound(
    theta0_norm: float,
    rate: float,
    t: ScalarOrArray,
) -> ScalarOrArray:
    """Evaluate `||theta0|| exp(-C0 t)`."""
    return theta0_norm * np.exp(-rate * t)
