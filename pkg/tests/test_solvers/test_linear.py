"""Tests for conjugate-gradient solves."""
from __future__ import annotations

import numpy as np
import pytest
from scipy.sparse.linalg import spsolve

from marangoni.exceptions import LinearSolveError, SolverError
from marangoni.grid.grid import Grid
from marangoni.grid.matrices import cell_laplacian_matrix, helmholtz_matrix
from marangoni.solvers.linear import (
    default_maxiter,
    solve_helmholtz,
    solve_spd,
)


def test_zero_rhs(grid: Grid) -> None:
    """Test zero right side short-circuits to zero."""
    matrix = helmholtz_matrix(grid, "dirichlet", 0.1)
    solution, report = solve_spd(
        matrix,
        np.zeros(grid.nx * grid.ny),
        tol=1e-10,
        atol=1e-10,
        stage="heat",
    )
    assert np.all(solution == 0.0)
    assert report.converged
    assert report.iterations == 0


def test_matches_direct_solve(
    grid: Grid,
    rng: np.random.Generator,
) -> None:
    """Test CG agrees with a sparse direct solve."""
    matrix = helmholtz_matrix(grid, "dirichlet", 0.01, 0.5)
    rhs = rng.standard_normal(grid.nx * grid.ny)
    solution, report = solve_spd(
        matrix,
        rhs,
        tol=1e-12,
        atol=1e-12 * float(np.linalg.norm(rhs)),
        stage="heat",
    )
    np.testing.assert_allclose(solution, spsolve(matrix, rhs), atol=1e-10)
    assert report.converged
    assert report.residual <= 1e-12
    assert report.iterations > 0


def test_warm_start_at_solution(
    grid: Grid,
    rng: np.random.Generator,
) -> None:
    """Test an exact initial guess is returned without iterating."""
    matrix = helmholtz_matrix(grid, "dirichlet", 0.01)
    exact = rng.standard_normal(grid.nx * grid.ny)
    rhs = matrix @ exact
    solution, report = solve_spd(
        matrix,
        rhs,
        tol=1e-8,
        atol=1e-8 * float(np.linalg.norm(rhs)),
        stage="heat",
        x0=exact,
    )
    assert report.iterations == 0
    np.testing.assert_array_equal(solution, exact)


def test_iteration_cap(rng: np.random.Generator) -> None:
    """Test non-convergence raises with the stage and report attached."""
    grid = Grid(nx=32, ny=32)
    matrix = -cell_laplacian_matrix(grid, "dirichlet")
    rhs = rng.standard_normal(grid.nx * grid.ny)
    with pytest.raises(LinearSolveError, match=r"^\[pressure\] CG") as exc:
        solve_spd(
            matrix,
            rhs,
            tol=1e-14,
            atol=1e-14 * float(np.linalg.norm(rhs)),
            stage="pressure",
            maxiter=1,
        )
    assert isinstance(exc.value, SolverError)
    assert exc.value.stage == "pressure"
    assert exc.value.report is not None
    assert not exc.value.report.converged


def test_helmholtz_rms_accuracy(
    grid: Grid,
    rng: np.random.Generator,
) -> None:
    """Test the pointwise error of a Helmholtz solve."""
    matrix = helmholtz_matrix(grid, "neumann", 0.05)
    rhs = rng.standard_normal(grid.nx * grid.ny)
    solution = solve_helmholtz(matrix, rhs, tol=1e-10, stage="phase")
    rms = np.linalg.norm(rhs) / np.sqrt(rhs.size)
    assert np.max(np.abs(solution - spsolve(matrix, rhs))) <= 1e-10 * rms


def test_default_maxiter() -> None:
    """Test the cap grows with the square root of the size."""
    assert default_maxiter(100) == 600
    assert default_maxiter(4096) == 200 + 40 * 64
