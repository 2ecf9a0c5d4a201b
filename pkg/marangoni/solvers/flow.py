"""Momentum update: capillary stress, buoyancy, prediction and projection."""
from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Final

import numpy as np

from marangoni.grid.fields import (
    BoundaryCondition,
    CellField,
    FaceVector,
    MacVelocity,
    ensure_same_grid,
)
from marangoni.grid.matrices import (
    cell_laplacian_matrix,
    helmholtz_matrix,
)
from marangoni.grid.operators import (
    divergence_mac,
    gradient_cc,
    padded,
    velocity_advection,
)
from marangoni.model.constitutive import (
    buoyancy_density,
    potential_value,
    surface_tension,
)
from marangoni.solvers.linear import (
    PoissonSolveReport,
    solve_helmholtz,
    solve_spd,
)

if TYPE_CHECKING:
    from marangoni.model.params import PhysicalParams
    from marangoni.state import State

logger = logging.getLogger(__name__)

ForceField = FaceVector


def capillary_force(
    phi: CellField,
    theta: CellField,
    params: PhysicalParams,
) -> ForceField:
    """Face-sampled capillary force density.

    Assembles, in conservative form,
    `f_i = -d_j[lam d_i phi d_j phi] + d_i[(lam - lam0 a) G]`
    with `G = |grad phi|^2 / 2 + F(phi)`. The constant-surface-tension
    part of the isotropic stress is a gradient and goes to the pressure.
    Diagonal stresses live at cell centers, the shear stress at corners
    from corner-averaged gradients.

    ### Parameters:
    - `phi`: phase field.
    - `theta`: temperature.
    - `params`: model coefficients.

    ### Returns:
    force with zero wall faces.
    """
    grid: Final = ensure_same_grid(phi, theta)
    dx: Final = grid.dx
    dy: Final = grid.dy
    phi_ext: Final = padded(phi)
    theta_ext: Final = padded(theta)

    grad_x_c: Final = (phi_ext[2:, 1:-1] - phi_ext[:-2, 1:-1]) / (2.0 * dx)
    grad_y_c: Final = (phi_ext[1:-1, 2:] - phi_ext[1:-1, :-2]) / (2.0 * dy)
    tension_c: Final = surface_tension(theta.values, params)
    stress_xx: Final = tension_c * grad_x_c * grad_x_c
    stress_yy: Final = tension_c * grad_y_c * grad_y_c

    diff_x: Final = np.diff(phi_ext, axis=0)
    diff_y: Final = np.diff(phi_ext, axis=1)
    grad_x_n: Final = 0.5 * (diff_x[:, :-1] + diff_x[:, 1:]) / dx
    grad_y_n: Final = 0.5 * (diff_y[:-1, :] + diff_y[1:, :]) / dy
    theta_n: Final = 0.25 * (
        theta_ext[:-1, :-1]
        + theta_ext[1:, :-1]
        + theta_ext[:-1, 1:]
        + theta_ext[1:, 1:]
    )
    stress_xy: Final = (
        surface_tension(theta_n, params) * grad_x_n * grad_y_n
    )

    # theta-dependent remainder of the isotropic stress
    isotropic: Final = (tension_c - params.lambda0 * params.a) * (
        0.5 * (grad_x_c * grad_x_c + grad_y_c * grad_y_c)
        + potential_value(phi.values, params.eps)
    )

    force: Final = FaceVector.zeros(grid)
    force.x[1:-1, :] = (
        -np.diff(stress_xx, axis=0) / dx
        - np.diff(stress_xy[1:-1, :], axis=1) / dy
        + np.diff(isotropic, axis=0) / dx
    )
    force.y[:, 1:-1] = (
        -np.diff(stress_xy[:, 1:-1], axis=0) / dx
        - np.diff(stress_yy, axis=1) / dy
        + np.diff(isotropic, axis=1) / dy
    )
    return force


def buoyancy_force(theta: CellField, params: PhysicalParams) -> ForceField:
    """Upward Boussinesq force on interior horizontal faces."""
    grid: Final = theta.grid
    force: Final = FaceVector.zeros(grid)
    face_theta: Final = 0.5 * (theta.values[:, :-1] + theta.values[:, 1:])
    force.y[:, 1:-1] = buoyancy_density(face_theta, params)
    return force


def predict_velocity(
    state: State,
    force: ForceField,
    dt: float,
    params: PhysicalParams,
    helmholtz_tol: float = 1e-10,
    source: ForceField | None = None,
) -> MacVelocity:
    """Provisional velocity of the projection scheme.

    Solves `(I - nu dt L) u* = u + dt (-(u . grad) u + f + buoyancy)`
    per component, explicit centered advection and implicit viscosity.

    ### Raises:
    - `LinearSolveError`: tagged `momentum` on non-convergence.
    """
    grid: Final = ensure_same_grid(state.velocity, force, state.theta)
    velocity: Final = state.velocity
    advection: Final = velocity_advection(velocity)
    explicit = force + buoyancy_force(state.theta, params)
    explicit = explicit + advection.scaled(-1.0)
    if source is not None:
        explicit = explicit + source

    diffusion: Final = params.nu * dt
    u_star: Final = np.zeros(grid.u_shape)
    v_star: Final = np.zeros(grid.v_shape)
    rhs_u: Final = (velocity.u + dt * explicit.x)[1:-1, :].ravel()
    rhs_v: Final = (velocity.v + dt * explicit.y)[:, 1:-1].ravel()
    u_star[1:-1, :] = solve_helmholtz(
        helmholtz_matrix(grid, "u", diffusion),
        rhs_u,
        tol=helmholtz_tol,
        stage="momentum",
        x0=velocity.u[1:-1, :].ravel(),
    ).reshape(grid.nx - 1, grid.ny)
    v_star[:, 1:-1] = solve_helmholtz(
        helmholtz_matrix(grid, "v", diffusion),
        rhs_v,
        tol=helmholtz_tol,
        stage="momentum",
        x0=velocity.v[:, 1:-1].ravel(),
    ).reshape(grid.nx, grid.ny - 1)
    return MacVelocity(grid=grid, u=u_star, v=v_star)


def pressure_poisson(
    u_star: MacVelocity,
    dt: float,
    tol: float,
    p0: CellField | None = None,
) -> tuple[CellField, PoissonSolveReport]:
    """Solve `lap p = div(u*) / dt` with Neumann walls.

    The right side mean is removed for compatibility and the
    pressure is returned zero-mean. CG stops once both the relative
    residual is below `tol` and the projected divergence
    `dt |r|` is below `tol`.

    ### Returns:
    zero-mean pressure and the solve report.

    ### Raises:
    - `LinearSolveError`: tagged `pressure` if the cap is hit.
    """
    grid: Final = u_star.grid
    rhs: Final = divergence_mac(u_star).values.ravel() / dt
    rhs_centered: Final = rhs - rhs.mean()
    rhs_norm: Final = float(np.linalg.norm(rhs_centered))
    pressure_bc: Final = BoundaryCondition.neumann()

    # -lap is positive semidefinite, constant vectors are its kernel
    solution, report = solve_spd(
        -cell_laplacian_matrix(grid, "neumann"),
        -rhs_centered,
        tol=tol,
        atol=tol * min(rhs_norm, 1.0 / dt),
        stage="pressure",
        x0=None if p0 is None else p0.values.ravel(),
    )
    values: Final = solution.reshape(grid.cell_shape)
    return (
        CellField(grid=grid, values=values - values.mean(), bc=pressure_bc),
        report,
    )


def project(u_star: MacVelocity, p: CellField, dt: float) -> MacVelocity:
    """Subtract `dt grad p` and re-pin the walls."""
    grid: Final = ensure_same_grid(u_star, p)
    grad: Final = gradient_cc(p)
    return MacVelocity(
        grid=grid,
        u=u_star.u - dt * grad.x,
        v=u_star.v - dt * grad.y,
    ).pinned()
