"""Distance to equilibrium and the perturbation experiment around it."""
from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Final, NamedTuple

import msgspec
import numpy as np

from marangoni.energy.ledger import elastic_energy, total_energy
from marangoni.grid.fields import (
    BoundaryCondition,
    CellField,
    ensure_same_grid,
)
from marangoni.grid.norms import h1_norm, l2_norm, velocity_h1_norm
from marangoni.grid.operators import (
    laplacian_cc,
    velocity_from_stream_function,
)
from marangoni.model.constitutive import energy_weights
from marangoni.solvers.coupled import coupled_step
from marangoni.state import State

if TYPE_CHECKING:
    from marangoni.config import RunConfig
    from marangoni.equilibrium.stationary import EquilibriumSolution
    from marangoni.grid.fields import MacVelocity
    from marangoni.grid.grid import Grid
    from marangoni.marangoni_types import FloatArray
    from marangoni.model.params import PhysicalParams

logger = logging.getLogger(__name__)

STREAM_MODES: Final = 3
BUMP_RADIUS_FRACTION: Final = 0.25


class SteadyStateDistance(NamedTuple):
    """Discrete distances of a state to `(0, phi_inf, 0)`."""

    du: float
    dphi: float
    dtheta: float


class StabilityReport(msgspec.Struct, frozen=True):
    """Outcome of one perturbation run.

    - `perturbation_size`: `(|u0|_1, |phi0 - phi*|_1, |theta0|)`.
    - `max_excursion`: sup over time of `|phi - phi*|_1`.
    - `final_energy_gap`: `|E(T) - a lam0 (|grad phi*|^2 + 2 int F)|`.
    - `converged_to`: `|phi(T) - phi*|_1`.
    - `final_distance`: `steady_state_distance` at `T`.
    """

    perturbation_scale: float
    perturbation_size: tuple[float, float, float]
    max_excursion: float
    final_energy_gap: float
    converged_to: float
    final_distance: tuple[float, float, float]
    energy_level: float


def _difference(phi: CellField, reference: CellField) -> CellField:
    return CellField(
        grid=phi.grid,
        values=phi.values - reference.values,
        bc=phi.bc.homogeneous(),
    )


def phase_distance(phi: CellField, reference: CellField) -> float:
    """Discrete H1 norm of `phi - reference`, equal Dirichlet data."""
    ensure_same_grid(phi, reference)
    return h1_norm(_difference(phi, reference))


def steady_state_distance(
    state: State,
    eq: EquilibriumSolution,
) -> SteadyStateDistance:
    """Distance of `state` to the steady state `(0, phi_inf, 0)`.

    `du = |u|_1`, `dphi = |phi - phi_inf|_1 + |lap(phi - phi_inf)|`,
    `dtheta = |theta| + |lap theta|`.

    ### Raises:
    - `GridError`: state and equilibrium live on different grids.
    """
    ensure_same_grid(state.velocity, state.phi, state.theta, eq.phi_inf)
    diff: Final = _difference(state.phi, eq.phi_inf)
    return SteadyStateDistance(
        du=velocity_h1_norm(state.velocity),
        dphi=h1_norm(diff) + l2_norm(laplacian_cc(diff)),
        dtheta=l2_norm(state.theta) + l2_norm(laplacian_cc(state.theta)),
    )


def random_solenoidal_velocity(grid: Grid, seed: int) -> MacVelocity:
    """Divergence-free velocity with unit sup norm.

    Curl of a random stream function built from the lowest
    sine modes, which vanishes on the boundary.
    """
    rng: Final = np.random.default_rng(seed)
    x, y = grid.corner_mesh()
    psi: Final = np.zeros_like(x)
    for m in range(1, STREAM_MODES + 1):
        for n in range(1, STREAM_MODES + 1):
            psi += (
                rng.standard_normal()
                / (m * m + n * n)
                * np.sin(m * np.pi * x / grid.lx)
                * np.sin(n * np.pi * y / grid.ly)
            )
    psi[0, :] = 0.0
    psi[-1, :] = 0.0
    psi[:, 0] = 0.0
    psi[:, -1] = 0.0
    velocity: Final = velocity_from_stream_function(grid, psi)
    peak: Final = max(np.max(np.abs(velocity.u)), np.max(np.abs(velocity.v)))
    return velocity.scaled(1.0 / peak)


def compact_bump(grid: Grid) -> FloatArray:
    """Smooth bump `exp(1 - 1/(1 - r^2))` centered in the domain.

    Peak one, zero outside a quarter of the shorter extent.
    """
    x, y = grid.cell_mesh()
    radius: Final = BUMP_RADIUS_FRACTION * min(grid.lx, grid.ly)
    r_sq: Final = (
        (x - 0.5 * grid.lx) ** 2 + (y - 0.5 * grid.ly) ** 2
    ) / (radius * radius)
    bump: Final = np.zeros_like(r_sq)
    inside: Final = r_sq < 1.0
    bump[inside] = np.exp(1.0 - 1.0 / (1.0 - r_sq[inside]))
    return bump


def perturbed_state(
    base: EquilibriumSolution,
    params: PhysicalParams,
    perturbation_scale: float,
    seed: int = 0,
) -> State:
    """`(scale w, phi* + scale bump, scale bump)` around `base`."""
    grid: Final = base.phi_inf.grid
    bump: Final = compact_bump(grid)
    rest: Final = State.at_rest(grid, params)
    return rest.replace(
        velocity=random_solenoidal_velocity(grid, seed).scaled(
            perturbation_scale,
        ),
        phi=CellField(
            grid=grid,
            values=base.phi_inf.values + perturbation_scale * bump,
            bc=BoundaryCondition.dirichlet(params.phi_boundary),
        ),
        theta=CellField(grid=grid, values=perturbation_scale * bump),
    )


def equilibrium_energy_level(
    base: EquilibriumSolution,
    params: PhysicalParams,
) -> float:
    """Energy the ledger converges to at `phi*`."""
    return (
        2.0
        * params.a
        * params.lambda0
        * elastic_energy(base.phi_inf, params.eps)
    )


def stability_experiment(
    base: EquilibriumSolution,
    perturbation_scale: float,
    run_cfg: RunConfig,
) -> StabilityReport:
    """Run the coupled system from a perturbation of `base`.

    ### Parameters:
    - `base`: converged equilibrium `phi*`.
    - `perturbation_scale`: common scale of the three perturbations.
    - `run_cfg`: time step, horizon, coefficients and tolerances.

    ### Returns:
    `StabilityReport` with the excursion, energy gap and distances.

    ### Raises:
    - `SolverError`: propagated from the coupled step.
    """
    if perturbation_scale < 0:
        scale_err_msg: Final = "perturbation_scale must be nonnegative"
        raise ValueError(scale_err_msg)

    params: Final = run_cfg.effective_params
    weights: Final = energy_weights(params)
    cfg: Final = run_cfg.step_config()
    state = perturbed_state(
        base,
        params,
        perturbation_scale,
        seed=run_cfg.ic.seed,
    )
    size: Final = (
        velocity_h1_norm(state.velocity),
        phase_distance(state.phi, base.phi_inf),
        l2_norm(state.theta),
    )

    max_excursion = size[1]
    for step in range(run_cfg.n_steps):
        state = coupled_step(state, params, cfg)
        max_excursion = max(
            max_excursion,
            phase_distance(state.phi, base.phi_inf),
        )
        if step % 1000 == 0:
            logger.debug(
                "stability run t=%.4g excursion %.3e",
                state.t,
                max_excursion,
            )

    level: Final = equilibrium_energy_level(base, params)
    final_energy: Final = total_energy(state, weights, params).total
    distance: Final = steady_state_distance(state, base)
    report: Final = StabilityReport(
        perturbation_scale=perturbation_scale,
        perturbation_size=size,
        max_excursion=max_excursion,
        final_energy_gap=abs(final_energy - level),
        converged_to=phase_distance(state.phi, base.phi_inf),
        final_distance=(distance.du, distance.dphi, distance.dtheta),
        energy_level=level,
    )
    logger.info(
        "stability scale %.3g: excursion %.3e, energy gap %.3e",
        perturbation_scale,
        report.max_excursion,
        report.final_energy_gap,
    )
    return report
