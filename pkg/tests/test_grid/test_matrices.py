"""Tests for sparse stencil matrices."""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest

from marangoni.grid.fields import BoundaryCondition, CellField, MacVelocity
from marangoni.grid.grid import Grid
from marangoni.grid.matrices import (
    cell_laplacian_matrix,
    cell_second_difference,
    helmholtz_matrix,
    laplacian_matrix,
)
from marangoni.grid.operators import laplacian_cc, velocity_laplacian

if TYPE_CHECKING:
    from marangoni.grid.matrices import Stencil
    from marangoni.marangoni_types import BoundaryKind


@pytest.mark.parametrize(
    ("kind", "corner"),
    [("dirichlet", -3.0), ("neumann", -1.0)],
)
def test_second_difference_corners(
    kind: BoundaryKind,
    corner: float,
) -> None:
    """Test boundary rows of the 1D stencil."""
    dense = cell_second_difference(5, 1.0, kind).toarray()
    assert dense[0, 0] == corner
    assert dense[-1, -1] == corner
    assert dense[2, 2] == -2.0
    assert dense[2, 1] == dense[2, 3] == 1.0


@pytest.mark.parametrize(
    "bc",
    [BoundaryCondition.dirichlet(), BoundaryCondition.neumann()],
)
def test_cell_matrix_matches_operator(
    rect_grid: Grid,
    rng: np.random.Generator,
    bc: BoundaryCondition,
) -> None:
    """Test the matrix applies the same stencil as `laplacian_cc`."""
    field = CellField(
        grid=rect_grid,
        values=rng.standard_normal(rect_grid.cell_shape),
        bc=bc,
    )
    matrix = cell_laplacian_matrix(rect_grid, bc.kind)
    np.testing.assert_allclose(
        matrix @ field.values.ravel(),
        laplacian_cc(field).values.ravel(),
        rtol=1e-12,
        atol=1e-9,
    )


def test_velocity_matrices_match_operator(
    rect_grid: Grid,
    rng: np.random.Generator,
) -> None:
    """Test face matrices act on interior faces only."""
    velocity = MacVelocity(
        grid=rect_grid,
        u=rng.standard_normal(rect_grid.u_shape),
        v=rng.standard_normal(rect_grid.v_shape),
    ).pinned()
    lap = velocity_laplacian(velocity)
    np.testing.assert_allclose(
        laplacian_matrix(rect_grid, "u") @ velocity.u[1:-1, :].ravel(),
        lap.u[1:-1, :].ravel(),
    )
    np.testing.assert_allclose(
        laplacian_matrix(rect_grid, "v") @ velocity.v[:, 1:-1].ravel(),
        lap.v[:, 1:-1].ravel(),
    )


@pytest.mark.parametrize("stencil", ["dirichlet", "neumann", "u", "v"])
@pytest.mark.parametrize("shift", [0.0, 0.5])
def test_helmholtz_spd(stencil: Stencil, shift: float) -> None:
    """Test the Helmholtz matrix is symmetric positive definite."""
    grid = Grid(nx=6, ny=5, lx=1.0, ly=0.8)
    dense = helmholtz_matrix(grid, stencil, 0.3, shift).toarray()
    np.testing.assert_array_equal(dense, dense.T)
    assert np.linalg.eigvalsh(dense).min() >= 1.0 + shift - 1e-10


def test_helmholtz_cached(grid: Grid) -> None:
    """Test repeated requests share one matrix."""
    first = helmholtz_matrix(grid, "dirichlet", 0.1, 0.0)
    assert helmholtz_matrix(grid, "dirichlet", 0.1, 0.0) is first
    assert helmholtz_matrix(grid, "dirichlet", 0.2, 0.0) is not first
