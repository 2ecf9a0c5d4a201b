"""Second-order discrete operators on the MAC grid.

All operators are pure: inputs are read-only and outputs freshly allocated.
"""
from __future__ import annotations

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
    u_laplacian_matrix,
    v_laplacian_matrix,
)

if TYPE_CHECKING:
    from marangoni.grid.grid import Grid
    from marangoni.marangoni_types import FloatArray


def padded(field: CellField) -> FloatArray:
    """Return `(nx+2, ny+2)` array with one layer of ghost cells.

    Dirichlet ghosts are `2 g - interior`, Neumann ghosts copy
    the interior. Corner ghosts are ghosts of ghosts.
    """
    values: Final = field.values
    out: Final = np.empty((values.shape[0] + 2, values.shape[1] + 2))
    out[1:-1, 1:-1] = values
    if field.bc.is_dirichlet:
        twice_g = 2.0 * field.bc.value
        out[0, 1:-1] = twice_g - values[0, :]
        out[-1, 1:-1] = twice_g - values[-1, :]
        out[:, 0] = twice_g - out[:, 1]
        out[:, -1] = twice_g - out[:, -2]
    else:
        out[0, 1:-1] = values[0, :]
        out[-1, 1:-1] = values[-1, :]
        out[:, 0] = out[:, 1]
        out[:, -1] = out[:, -2]
    return out


def gradient_cc(field: CellField) -> FaceVector:
    """Face-centered gradient of a cell field.

    ### Parameters:
    - `field`: cell field, ghosts from its bc.

    ### Returns:
    `FaceVector` with `x` on vertical faces, `y` on horizontal faces.
    Wall faces of a Neumann field get zero gradient.
    """
    grid: Final = field.grid
    ext: Final = padded(field)
    grad_x: Final = np.diff(ext[:, 1:-1], axis=0) / grid.dx
    grad_y: Final = np.diff(ext[1:-1, :], axis=1) / grid.dy
    return FaceVector(grid=grid, x=grad_x, y=grad_y)


def divergence_mac(velocity: MacVelocity) -> CellField:
    """Cell-centered divergence `du/dx + dv/dy`."""
    grid: Final = velocity.grid
    div: Final = (
        np.diff(velocity.u, axis=0) / grid.dx
        + np.diff(velocity.v, axis=1) / grid.dy
    )
    return CellField(grid=grid, values=div, bc=BoundaryCondition.neumann())


def divergence_faces(vector: FaceVector) -> CellField:
    """Cell-centered divergence of a face vector."""
    grid: Final = vector.grid
    div: Final = (
        np.diff(vector.x, axis=0) / grid.dx
        + np.diff(vector.y, axis=1) / grid.dy
    )
    return CellField(grid=grid, values=div, bc=BoundaryCondition.neumann())


def laplacian_cc(field: CellField) -> CellField:
    """Five-point Laplacian with ghost cells from the field bc."""
    grid: Final = field.grid
    ext: Final = padded(field)
    centre: Final = ext[1:-1, 1:-1]
    lap: Final = (ext[2:, 1:-1] - 2.0 * centre + ext[:-2, 1:-1]) / (
        grid.dx * grid.dx
    ) + (ext[1:-1, 2:] - 2.0 * centre + ext[1:-1, :-2]) / (grid.dy * grid.dy)
    return CellField(grid=grid, values=lap, bc=field.bc)


def cell_velocity(velocity: MacVelocity) -> tuple[FloatArray, FloatArray]:
    """Average face velocities to cell centers."""
    u_c: Final = 0.5 * (velocity.u[:-1, :] + velocity.u[1:, :])
    v_c: Final = 0.5 * (velocity.v[:, :-1] + velocity.v[:, 1:])
    return u_c, v_c


def advect_upwind(velocity: MacVelocity, field: CellField) -> CellField:
    """First-order upwind `(w . grad) f` at cell centers.

    Keeps discrete maximum principles under `CFL <= 1`.
    """
    grid: Final = ensure_same_grid(velocity, field)
    ext: Final = padded(field)
    centre: Final = ext[1:-1, 1:-1]
    u_c, v_c = cell_velocity(velocity)

    back_x: Final = (centre - ext[:-2, 1:-1]) / grid.dx
    fwd_x: Final = (ext[2:, 1:-1] - centre) / grid.dx
    back_y: Final = (centre - ext[1:-1, :-2]) / grid.dy
    fwd_y: Final = (ext[1:-1, 2:] - centre) / grid.dy

    transport: Final = (
        np.maximum(u_c, 0.0) * back_x
        + np.minimum(u_c, 0.0) * fwd_x
        + np.maximum(v_c, 0.0) * back_y
        + np.minimum(v_c, 0.0) * fwd_y
    )
    return CellField(grid=grid, values=transport, bc=field.bc.homogeneous())


def velocity_laplacian(velocity: MacVelocity) -> MacVelocity:
    """Component-wise Laplacian of a no-slip velocity.

    Wall faces are zero in the output. Tangential walls use
    ghost velocities `-interior`.
    """
    grid: Final = velocity.grid
    lap_u: Final = np.zeros(grid.u_shape)
    lap_v: Final = np.zeros(grid.v_shape)
    lap_u[1:-1, :] = (
        u_laplacian_matrix(grid) @ velocity.u[1:-1, :].ravel()
    ).reshape(grid.nx - 1, grid.ny)
    lap_v[:, 1:-1] = (
        v_laplacian_matrix(grid) @ velocity.v[:, 1:-1].ravel()
    ).reshape(grid.nx, grid.ny - 1)
    return MacVelocity(grid=grid, u=lap_u, v=lap_v)


def _tangential_padded_u(velocity: MacVelocity) -> FloatArray:
    """`u` with ghost rows in y, `(nx+1, ny+2)`."""
    u: Final = velocity.u
    out: Final = np.empty((u.shape[0], u.shape[1] + 2))
    out[:, 1:-1] = u
    out[:, 0] = -u[:, 0]
    out[:, -1] = -u[:, -1]
    return out


def _tangential_padded_v(velocity: MacVelocity) -> FloatArray:
    """`v` with ghost columns in x, `(nx+2, ny+1)`."""
    v: Final = velocity.v
    out: Final = np.empty((v.shape[0] + 2, v.shape[1]))
    out[1:-1, :] = v
    out[0, :] = -v[0, :]
    out[-1, :] = -v[-1, :]
    return out


def velocity_advection(velocity: MacVelocity) -> FaceVector:
    """Centered advective term `(u . grad) u` on interior faces."""
    grid: Final = velocity.grid
    u: Final = velocity.u
    v: Final = velocity.v
    u_ext: Final = _tangential_padded_u(velocity)
    v_ext: Final = _tangential_padded_v(velocity)

    adv_u: Final = np.zeros(grid.u_shape)
    # v averaged to interior vertical faces
    v_at_u: Final = 0.25 * (v[:-1, :-1] + v[1:, :-1] + v[:-1, 1:] + v[1:, 1:])
    adv_u[1:-1, :] = u[1:-1, :] * (u[2:, :] - u[:-2, :]) / (
        2.0 * grid.dx
    ) + v_at_u * (u_ext[1:-1, 2:] - u_ext[1:-1, :-2]) / (2.0 * grid.dy)

    adv_v: Final = np.zeros(grid.v_shape)
    u_at_v: Final = 0.25 * (u[:-1, :-1] + u[1:, :-1] + u[:-1, 1:] + u[1:, 1:])
    adv_v[:, 1:-1] = u_at_v * (v_ext[2:, 1:-1] - v_ext[:-2, 1:-1]) / (
        2.0 * grid.dx
    ) + v[:, 1:-1] * (v[:, 2:] - v[:, :-2]) / (2.0 * grid.dy)

    return FaceVector(grid=grid, x=adv_u, y=adv_v)


def velocity_from_stream_function(grid: Grid, psi: FloatArray) -> MacVelocity:
    """Discrete curl of a corner stream function.

    `u = d psi / dy`, `v = -d psi / dx`. With `psi` zero on the
    boundary the result has zero wall faces and zero discrete
    divergence up to rounding.
    """
    u: Final = np.diff(psi, axis=1) / grid.dy
    v: Final = -np.diff(psi, axis=0) / grid.dx
    return MacVelocity(grid=grid, u=u, v=v)


def curl_faces(vector: FaceVector) -> FloatArray:
    """Discrete curl `d fy/dx - d fx/dy` at interior corners."""
    grid: Final = vector.grid
    return (
        np.diff(vector.y[:, 1:-1], axis=0) / grid.dx
        - np.diff(vector.x[1:-1, :], axis=1) / grid.dy
    )
