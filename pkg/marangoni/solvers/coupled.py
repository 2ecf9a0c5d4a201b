"""One full time step of the coupled system, and its reduced modes."""
from __future__ import annotations

import dataclasses
import logging
from typing import TYPE_CHECKING, Final

from marangoni.grid.fields import FaceVector, MacVelocity
from marangoni.solvers.flow import (
    capillary_force,
    predict_velocity,
    pressure_poisson,
    project,
)
from marangoni.solvers.scalars import ScalarStepConfig, heat_step, phase_step

if TYPE_CHECKING:
    from marangoni.grid.grid import Grid
    from marangoni.marangoni_types import (
        FieldFunction,
        FloatArray,
        SimulationMode,
    )
    from marangoni.model.params import PhysicalParams
    from marangoni.state import State

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class StepConfig(ScalarStepConfig):
    """Scalar step settings plus the pressure tolerance."""

    poisson_tol: float = 1e-10


@dataclasses.dataclass(frozen=True)
class SourceTerms:
    """Optional volume sources `f(x, y, t)` added to each equation.

    Evaluated at the new time level. Used by manufactured solutions.
    """

    theta: FieldFunction | None = None
    phi: FieldFunction | None = None
    u: FieldFunction | None = None
    v: FieldFunction | None = None

    def cell(
        self: SourceTerms,
        func: FieldFunction | None,
        grid: Grid,
        t: float,
    ) -> FloatArray | None:
        if func is None:
            return None
        x, y = grid.cell_mesh()
        return func(x, y, t)

    def faces(self: SourceTerms, grid: Grid, t: float) -> FaceVector | None:
        if self.u is None and self.v is None:
            return None
        forcing: Final = FaceVector.zeros(grid)
        if self.u is not None:
            x, y = grid.u_mesh()
            forcing.x[1:-1, :] = self.u(x, y, t)[1:-1, :]
        if self.v is not None:
            x, y = grid.v_mesh()
            forcing.y[:, 1:-1] = self.v(x, y, t)[:, 1:-1]
        return forcing


NO_SOURCES: Final = SourceTerms()


def momentum_step(
    state: State,
    params: PhysicalParams,
    cfg: StepConfig,
    sources: SourceTerms = NO_SOURCES,
) -> State:
    """Advance the velocity with the current phase and temperature.

    Capillary force, prediction, pressure solve and projection.
    """
    t_new: Final = state.t + cfg.dt
    force: Final = capillary_force(state.phi, state.theta, params)
    u_star: Final = predict_velocity(
        state,
        force,
        cfg.dt,
        params,
        helmholtz_tol=cfg.helmholtz_tol,
        source=sources.faces(state.grid, t_new),
    )
    pressure, report = pressure_poisson(
        u_star,
        cfg.dt,
        cfg.poisson_tol,
        p0=state.pressure,
    )
    logger.debug("pressure solve at t=%.6g: %s", t_new, report)
    return state.replace(
        velocity=project(u_star, pressure, cfg.dt),
        pressure=pressure,
    )


def coupled_step(
    state: State,
    params: PhysicalParams,
    cfg: StepConfig,
    sources: SourceTerms = NO_SOURCES,
) -> State:
    """Advance the full system by `cfg.dt`.

    Ordering is temperature, phase, then momentum evaluated with
    the new phase and temperature, then projection.

    ### Raises:
    - `SolverError`: from the failing stage, tagged with its name.
    """
    grid: Final = state.grid
    t_new: Final = state.t + cfg.dt
    theta: Final = heat_step(
        state.theta,
        state.velocity,
        params,
        cfg,
        source=sources.cell(sources.theta, grid, t_new),
    )
    phi: Final = phase_step(
        state.phi,
        state.velocity,
        params,
        cfg,
        source=sources.cell(sources.phi, grid, t_new),
    )
    advanced: Final = momentum_step(
        state.replace(theta=theta, phi=phi),
        params,
        cfg,
        sources,
    )
    return advanced.replace(t=t_new)


def heat_only_step(
    state: State,
    params: PhysicalParams,
    cfg: StepConfig,
    sources: SourceTerms = NO_SOURCES,
) -> State:
    """Temperature alone, fluid frozen at rest."""
    t_new: Final = state.t + cfg.dt
    theta: Final = heat_step(
        state.theta,
        MacVelocity.zeros(state.grid),
        params,
        cfg,
        source=sources.cell(sources.theta, state.grid, t_new),
    )
    return state.replace(theta=theta, t=t_new)


def phase_only_step(
    state: State,
    params: PhysicalParams,
    cfg: StepConfig,
    sources: SourceTerms = NO_SOURCES,
) -> State:
    """Allen-Cahn gradient flow, fluid frozen at rest."""
    t_new: Final = state.t + cfg.dt
    phi: Final = phase_step(
        state.phi,
        MacVelocity.zeros(state.grid),
        params,
        cfg,
        source=sources.cell(sources.phi, state.grid, t_new),
    )
    return state.replace(phi=phi, t=t_new)


def mode_step(
    state: State,
    params: PhysicalParams,
    cfg: StepConfig,
    mode: SimulationMode,
    sources: SourceTerms = NO_SOURCES,
) -> State:
    """Dispatch one step of the requested simulation mode.

    `isothermal` runs the full step; the caller is responsible
    for `b = alpha = 0` and zero initial temperature.
    """
    if mode == "heat_only":
        return heat_only_step(state, params, cfg, sources)
    if mode == "phase_only":
        return phase_only_step(state, params, cfg, sources)
    return coupled_step(state, params, cfg, sources)
