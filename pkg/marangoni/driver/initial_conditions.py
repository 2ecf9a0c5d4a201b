"""Named initial-condition presets.

Every preset starts the fluid at rest. Temperature presets use
`ic_amplitude` as sup norm, so a preset satisfies the smallness
condition iff `ic_amplitude <= smallness_threshold(params)`.
Phase presets stay within `[-1, 1]`.
"""
from __future__ import annotations

import math
from typing import TYPE_CHECKING, Final

import numpy as np

from marangoni.grid.fields import BoundaryCondition, CellField
from marangoni.state import State

if TYPE_CHECKING:
    from collections.abc import Callable

    from marangoni.config import InitialConditionSettings, RunConfig
    from marangoni.grid.grid import Grid
    from marangoni.marangoni_types import FloatArray, InitialConditionName

    PresetBuilder = Callable[
        [Grid, InitialConditionSettings, float, float],
        tuple[FloatArray, FloatArray],
    ]

# radial wobble of the perturbed interface: relative amplitude, mode
WOBBLE: Final = (0.1, 4)


def eigenmode(grid: Grid) -> FloatArray:
    """Lowest Dirichlet mode `sin(pi x / lx) sin(pi y / ly)`."""
    x, y = grid.cell_mesh()
    return np.sin(np.pi * x / grid.lx) * np.sin(np.pi * y / grid.ly)


def interface_profile(distance: FloatArray, eps: float) -> FloatArray:
    """Equilibrium profile `tanh(d / (sqrt(2) eps))`, `+1` where `d > 0`."""
    return np.tanh(distance / (math.sqrt(2.0) * eps))


def two_phase_profile(
    distance: FloatArray,
    eps: float,
    phi_boundary: float,
) -> FloatArray:
    """Interface profile rescaled from `[-1, 1]` to `[phi_boundary, 1]`.

    The outer phase takes the boundary value, so the preset
    matches its Dirichlet data. With `phi_boundary = -1` this is
    `interface_profile`.
    """
    inner: Final = 0.5 * (interface_profile(distance, eps) + 1.0)
    return phi_boundary + (1.0 - phi_boundary) * inner


def _polar(grid: Grid) -> tuple[FloatArray, FloatArray]:
    x, y = grid.cell_mesh()
    dx = x - 0.5 * grid.lx
    dy = y - 0.5 * grid.ly
    return np.hypot(dx, dy), np.arctan2(dy, dx)


def _flat(
    grid: Grid,
    ic: InitialConditionSettings,
    eps: float,
    phi_boundary: float,
) -> tuple[FloatArray, FloatArray]:
    return (
        np.full(grid.cell_shape, phi_boundary),
        ic.amplitude * eigenmode(grid),
    )


def _bubble(
    grid: Grid,
    ic: InitialConditionSettings,
    eps: float,
    phi_boundary: float,
) -> tuple[FloatArray, FloatArray]:
    radius, _ = _polar(grid)
    return (
        two_phase_profile(ic.radius - radius, eps, phi_boundary),
        ic.amplitude * eigenmode(grid),
    )


def _stratified(
    grid: Grid,
    ic: InitialConditionSettings,
    eps: float,
    phi_boundary: float,
) -> tuple[FloatArray, FloatArray]:
    _, y = grid.cell_mesh()
    return (
        two_phase_profile(ic.radius * grid.ly - y, eps, phi_boundary),
        ic.amplitude * eigenmode(grid),
    )


def _eigenmode_theta(
    grid: Grid,
    ic: InitialConditionSettings,
    eps: float,
    phi_boundary: float,
) -> tuple[FloatArray, FloatArray]:
    return _flat(grid, ic, eps, phi_boundary)


def _random(
    grid: Grid,
    ic: InitialConditionSettings,
    eps: float,
    phi_boundary: float,
) -> tuple[FloatArray, FloatArray]:
    rng: Final = np.random.default_rng(ic.seed)
    phi: Final = rng.uniform(-1.0, 1.0, size=grid.cell_shape)
    theta: Final = ic.amplitude * rng.uniform(-1.0, 1.0, size=grid.cell_shape)
    return phi, theta


def _perturbed_interface(
    grid: Grid,
    ic: InitialConditionSettings,
    eps: float,
    phi_boundary: float,
) -> tuple[FloatArray, FloatArray]:
    radius, angle = _polar(grid)
    relative, mode = WOBBLE
    wobbly: Final = ic.radius * (1.0 + relative * np.cos(mode * angle))
    return (
        two_phase_profile(wobbly - radius, eps, phi_boundary),
        ic.amplitude * eigenmode(grid),
    )


PRESETS: Final[dict[InitialConditionName, PresetBuilder]] = {
    "flat": _flat,
    "bubble": _bubble,
    "stratified": _stratified,
    "eigenmode-theta": _eigenmode_theta,
    "random": _random,
    "perturbed-interface": _perturbed_interface,
}


def initial_state(cfg: RunConfig) -> State:
    """Build the state at `t = 0` from the configured preset.

    In `isothermal` mode the temperature is zero whatever the preset,
    in `heat_only` mode the phase field is flat.
    """
    grid: Final = cfg.grid.build()
    params: Final = cfg.effective_params
    phi, theta = PRESETS[cfg.ic.name](
        grid,
        cfg.ic,
        params.eps,
        params.phi_boundary,
    )
    if cfg.mode == "isothermal":
        theta = np.zeros(grid.cell_shape)
    if cfg.mode == "heat_only":
        phi = np.full(grid.cell_shape, params.phi_boundary)

    rest: Final = State.at_rest(grid, params)
    return rest.replace(
        phi=CellField(
            grid=grid,
            values=phi,
            bc=BoundaryCondition.dirichlet(params.phi_boundary),
        ),
        theta=CellField(grid=grid, values=theta),
    )
