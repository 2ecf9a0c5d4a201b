"""Sparse matrices of the grid stencils.

Unknowns are raveled in C order from `[i, j]` arrays, so the
x-direction acts through `kron(Dx, I)` and y through `kron(I, Dy)`.
Builders are cached per grid.
"""
from __future__ import annotations

import functools
from typing import TYPE_CHECKING, Final, Literal

import numpy as np
import scipy.sparse as sp

if TYPE_CHECKING:
    from marangoni.grid.grid import Grid
    from marangoni.marangoni_types import BoundaryKind

Stencil = Literal["dirichlet", "neumann", "u", "v"]


def _second_difference(size: int, spacing: float) -> sp.lil_matrix:
    inv_h2: Final = 1.0 / (spacing * spacing)
    return sp.diags(
        [
            inv_h2 * np.ones(size - 1),
            -2.0 * inv_h2 * np.ones(size),
            inv_h2 * np.ones(size - 1),
        ],
        offsets=[-1, 0, 1],
        format="lil",
    )


def cell_second_difference(
    size: int,
    spacing: float,
    kind: BoundaryKind,
) -> sp.csr_matrix:
    """1D cell-centered second difference.

    Dirichlet (linear ghost) puts `-3` in the corners,
    Neumann (copied ghost) puts `-1`.
    """
    matrix: Final = _second_difference(size, spacing)
    corner: Final = (-3.0 if kind == "dirichlet" else -1.0) / (
        spacing * spacing
    )
    matrix[0, 0] = corner
    matrix[size - 1, size - 1] = corner
    return matrix.tocsr()


def node_second_difference(size: int, spacing: float) -> sp.csr_matrix:
    """1D second difference on interior nodes, zero end values."""
    return _second_difference(size, spacing).tocsr()


@functools.lru_cache(maxsize=32)
def cell_laplacian_matrix(grid: Grid, kind: BoundaryKind) -> sp.csr_matrix:
    """Homogeneous part of the cell Laplacian for `kind` boundaries."""
    return (
        sp.kron(
            cell_second_difference(grid.nx, grid.dx, kind),
            sp.identity(grid.ny),
        )
        + sp.kron(
            sp.identity(grid.nx),
            cell_second_difference(grid.ny, grid.dy, kind),
        )
    ).tocsr()


@functools.lru_cache(maxsize=32)
def u_laplacian_matrix(grid: Grid) -> sp.csr_matrix:
    """Laplacian acting on interior `u` faces, `(nx-1) * ny` unknowns."""
    return (
        sp.kron(
            node_second_difference(grid.nx - 1, grid.dx),
            sp.identity(grid.ny),
        )
        + sp.kron(
            sp.identity(grid.nx - 1),
            cell_second_difference(grid.ny, grid.dy, "dirichlet"),
        )
    ).tocsr()


@functools.lru_cache(maxsize=32)
def v_laplacian_matrix(grid: Grid) -> sp.csr_matrix:
    """Laplacian acting on interior `v` faces, `nx * (ny-1)` unknowns."""
    return (
        sp.kron(
            cell_second_difference(grid.nx, grid.dx, "dirichlet"),
            sp.identity(grid.ny - 1),
        )
        + sp.kron(
            sp.identity(grid.nx),
            node_second_difference(grid.ny - 1, grid.dy),
        )
    ).tocsr()


def laplacian_matrix(grid: Grid, stencil: Stencil) -> sp.csr_matrix:
    """Return the Laplacian matrix of a named stencil."""
    if stencil == "u":
        return u_laplacian_matrix(grid)
    if stencil == "v":
        return v_laplacian_matrix(grid)
    return cell_laplacian_matrix(grid, stencil)


@functools.lru_cache(maxsize=64)
def helmholtz_matrix(
    grid: Grid,
    stencil: Stencil,
    diffusion: float,
    shift: float = 0.0,
) -> sp.csr_matrix:
    """Return `(1 + shift) I - diffusion L`.

    Symmetric positive definite for `diffusion >= 0`, `shift >= 0`.
    """
    laplacian: Final = laplacian_matrix(grid, stencil)
    size: Final = laplacian.shape[0]
    return (
        (1.0 + shift) * sp.identity(size, format="csr")
        - diffusion * laplacian
    ).tocsr()
