"""Time steps for the temperature and phase-field equations."""
from __future__ import annotations

import dataclasses
from typing import TYPE_CHECKING, Final

from marangoni.exceptions import SolverError
from marangoni.grid.fields import CellField, ensure_same_grid
from marangoni.grid.matrices import helmholtz_matrix
from marangoni.grid.operators import advect_upwind, laplacian_cc
from marangoni.model.constitutive import potential_derivative
from marangoni.monitors.checks import cfl_number
from marangoni.solvers.linear import solve_helmholtz

if TYPE_CHECKING:
    from marangoni.grid.fields import MacVelocity
    from marangoni.marangoni_types import FloatArray
    from marangoni.model.params import PhysicalParams


@dataclasses.dataclass(frozen=True)
class ScalarStepConfig:
    """Settings shared by the scalar steps.

    - `dt`: time step.
    - `stab`: Allen-Cahn stabilization constant in `1/eps^2` units.
    - `helmholtz_tol`: linear-solve tolerance.
    """

    dt: float
    stab: float = 2.0
    helmholtz_tol: float = 1e-10


def _check_cfl(velocity: MacVelocity, dt: float, stage: str) -> None:
    cfl: Final = cfl_number(velocity, dt)
    if cfl > 1.0:
        cfl_err_msg: Final = f"CFL precondition violated: {cfl:.3f} > 1"
        raise SolverError(cfl_err_msg, stage=stage)


def _affine_part(field: CellField) -> FloatArray:
    """Boundary contribution of the Laplacian, `lap f - L f`."""
    zero_interior: Final = CellField.constant(field.grid, 0.0, field.bc)
    return laplacian_cc(zero_interior).values


def heat_step(
    theta: CellField,
    velocity: MacVelocity,
    params: PhysicalParams,
    cfg: ScalarStepConfig,
    source: FloatArray | None = None,
) -> CellField:
    """Advance the temperature one step.

    `(I - k dt lap) theta' = theta - dt adv(w, theta) [+ dt source]`.
    Upwind transport plus implicit diffusion keeps
    `|theta'|_inf <= |theta|_inf` up to the solve tolerance.

    ### Raises:
    - `SolverError`: tagged `heat` on CFL or solve failure.
    """
    grid: Final = ensure_same_grid(theta, velocity)
    _check_cfl(velocity, cfg.dt, "heat")
    diffusion: Final = params.k * cfg.dt
    rhs = theta.values - cfg.dt * advect_upwind(velocity, theta).values
    if source is not None:
        rhs = rhs + cfg.dt * source
    rhs = rhs + diffusion * _affine_part(theta)
    values: Final = solve_helmholtz(
        helmholtz_matrix(grid, "dirichlet", diffusion),
        rhs.ravel(),
        tol=cfg.helmholtz_tol,
        stage="heat",
        x0=theta.values.ravel(),
    )
    return theta.with_values(values.reshape(grid.cell_shape))


def phase_step(
    phi: CellField,
    velocity: MacVelocity,
    params: PhysicalParams,
    cfg: ScalarStepConfig,
    source: FloatArray | None = None,
) -> CellField:
    """Advance the phase field one stabilized semi-implicit step.

    `(I - gamma dt lap + gamma dt S/eps^2) phi'
    = phi + dt [-adv(w, phi) - gamma F'(phi) + gamma S/eps^2 phi]`.

    ### Raises:
    - `SolverError`: tagged `phase` on CFL or solve failure.
    """
    grid: Final = ensure_same_grid(phi, velocity)
    _check_cfl(velocity, cfg.dt, "phase")
    relax: Final = params.gamma * cfg.dt
    stabilizer: Final = cfg.stab / (params.eps * params.eps)
    rhs = phi.values + cfg.dt * (
        -advect_upwind(velocity, phi).values
        - params.gamma * potential_derivative(phi.values, params.eps)
        + params.gamma * stabilizer * phi.values
    )
    if source is not None:
        rhs = rhs + cfg.dt * source
    rhs = rhs + relax * _affine_part(phi)
    values: Final = solve_helmholtz(
        helmholtz_matrix(grid, "dirichlet", relax, relax * stabilizer),
        rhs.ravel(),
        tol=cfg.helmholtz_tol,
        stage="phase",
        x0=phi.values.ravel(),
    )
    return phi.with_values(values.reshape(grid.cell_shape))

