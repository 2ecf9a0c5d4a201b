"""Tests for the temperature and phase steps."""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest

from marangoni.exceptions import SolverError
from marangoni.grid.fields import BoundaryCondition, CellField, MacVelocity
from marangoni.grid.grid import Grid
from marangoni.grid.norms import l2_norm, linf_norm
from marangoni.grid.operators import laplacian_cc
from marangoni.model.params import PhysicalParams
from marangoni.monitors.checks import cfl_number
from marangoni.solvers.scalars import ScalarStepConfig, heat_step, phase_step

if TYPE_CHECKING:
    from collections.abc import Callable


def _mode(grid: Grid) -> CellField:
    x, y = grid.cell_mesh()
    return CellField(
        grid=grid,
        values=np.sin(np.pi * x / grid.lx) * np.sin(np.pi * y / grid.ly),
    )


def _interior_box(field: CellField) -> np.ndarray:
    x, y = field.grid.cell_mesh()
    inside = (
        (x > 0.25 * field.grid.lx)
        & (x < 0.75 * field.grid.lx)
        & (y > 0.25 * field.grid.ly)
        & (y < 0.75 * field.grid.ly)
    )
    return field.values[inside]


def test_step_config_defaults() -> None:
    """Test default stabilization and tolerance."""
    cfg = ScalarStepConfig(dt=1e-3)
    assert cfg.stab == 2.0
    assert cfg.helmholtz_tol == 1e-10


def test_heat_zero_stays_zero(
    grid: Grid,
    params: PhysicalParams,
    swirl: MacVelocity,
) -> None:
    """Test zero temperature is invariant."""
    theta = heat_step(
        CellField.constant(grid, 0.0),
        swirl,
        params,
        ScalarStepConfig(dt=1e-3),
    )
    assert np.all(theta.values == 0.0)


def test_heat_eigenmode_decay(rect_grid: Grid) -> None:
    """Test an eigenmode decays by `(1 + k dt mu)^-m` exactly."""
    params = PhysicalParams(k=0.7)
    cfg = ScalarStepConfig(dt=1e-3)
    theta = _mode(rect_grid)
    lap = laplacian_cc(theta)
    mu = -float(np.sum(lap.values * theta.values)) / float(
        np.sum(theta.values * theta.values),
    )
    velocity = MacVelocity.zeros(rect_grid)
    initial = l2_norm(theta)
    steps = 10
    for _ in range(steps):
        theta = heat_step(theta, velocity, params, cfg)
    expected = initial * (1.0 + params.k * cfg.dt * mu) ** (-steps)
    assert l2_norm(theta) == pytest.approx(expected, rel=1e-10)


def test_heat_max_principle(
    grid: Grid,
    params: PhysicalParams,
    rng: np.random.Generator,
    swirl: MacVelocity,
) -> None:
    """Test sup norm doesn't grow under the CFL condition."""
    cfg = ScalarStepConfig(dt=0.01)
    velocity = swirl.scaled(0.9 / cfl_number(swirl, cfg.dt))
    theta = CellField(grid=grid, values=rng.uniform(-1, 1, grid.cell_shape))
    bound = linf_norm(theta)
    for _ in range(5):
        theta = heat_step(theta, velocity, params, cfg)
        assert linf_norm(theta) <= bound + 10 * cfg.helmholtz_tol


def test_heat_source(grid: Grid, params: PhysicalParams) -> None:
    """Test a positive source heats every cell."""
    theta = heat_step(
        CellField.constant(grid, 0.0),
        MacVelocity.zeros(grid),
        params,
        ScalarStepConfig(dt=1e-3),
        source=np.ones(grid.cell_shape),
    )
    assert np.all(theta.values > 0.0)
    assert np.all(theta.values <= 1e-3)


@pytest.mark.parametrize("step", [heat_step, phase_step])
def test_cfl_precondition(
    grid: Grid,
    params: PhysicalParams,
    swirl: MacVelocity,
    step: Callable[..., CellField],
) -> None:
    """Test steps refuse a velocity violating the CFL condition."""
    stage = "heat" if step is heat_step else "phase"
    field = CellField.constant(grid, -1.0, BoundaryCondition.dirichlet(-1.0))
    with pytest.raises(SolverError, match=rf"^\[{stage}\] CFL") as exc:
        step(field, swirl.scaled(1e3), params, ScalarStepConfig(dt=0.1))
    assert exc.value.stage == stage


def test_phase_pure_state_fixed(grid: Grid, params: PhysicalParams) -> None:
    """Test `phi = -1` is an exact fixed point."""
    phi = CellField.constant(grid, -1.0, BoundaryCondition.dirichlet(-1.0))
    advanced = phase_step(
        phi,
        MacVelocity.zeros(grid),
        params,
        ScalarStepConfig(dt=1e-4),
    )
    np.testing.assert_array_equal(advanced.values, -1.0)
    assert advanced.bc == phi.bc


def test_phase_opposite_well_interior(params: PhysicalParams) -> None:
    """Test `phi = +1` stays put away from the boundary layer."""
    grid = Grid(nx=32, ny=32)
    phi = CellField.constant(grid, 1.0, BoundaryCondition.dirichlet(-1.0))
    advanced = phase_step(
        phi,
        MacVelocity.zeros(grid),
        params,
        ScalarStepConfig(dt=1e-4, helmholtz_tol=1e-13),
    )
    centre = advanced.values[12:20, 12:20]
    assert np.max(np.abs(centre - 1.0)) <= 1e-12


def test_phase_standing_profile_residual() -> None:
    """Test the tanh profile residual shrinks under grid refinement."""
    params = PhysicalParams(eps=0.1)
    cfg = ScalarStepConfig(dt=1e-5, helmholtz_tol=1e-13)
    residuals = []
    for cells in (32, 64):
        grid = Grid(nx=cells, ny=cells)
        x, _ = grid.cell_mesh()
        phi = CellField(
            grid=grid,
            values=np.tanh((x - 0.5) / (np.sqrt(2.0) * params.eps)),
            bc=BoundaryCondition.dirichlet(-1.0),
        )
        advanced = phase_step(phi, MacVelocity.zeros(grid), params, cfg)
        change = _interior_box(advanced) - _interior_box(phi)
        residuals.append(
            float(np.sqrt(np.mean(change * change))) / cfg.dt,
        )
    assert residuals[1] <= residuals[0] / 2
