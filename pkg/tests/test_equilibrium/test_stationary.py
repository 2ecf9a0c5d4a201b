"""Tests for the stationary Allen-Cahn solvers."""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest

from marangoni.driver.initial_conditions import interface_profile
from marangoni.energy.ledger import dissipation
from marangoni.equilibrium.stationary import (
    classify_minimizer,
    gradient_flow_oracle,
    max_flow_step,
    solve_stationary,
    stationary_residual,
)
from marangoni.exceptions import (
    EnergyMonotonicityError,
    EquilibriumNotFoundError,
    SolverError,
)
from marangoni.grid.fields import BoundaryCondition, CellField
from marangoni.grid.grid import Grid
from marangoni.grid.norms import l2_norm
from marangoni.model.constitutive import energy_weights
from marangoni.model.params import PhysicalParams
from marangoni.solvers.coupled import StepConfig, coupled_step
from marangoni.state import State

if TYPE_CHECKING:
    from collections.abc import Callable

    from pytest_mock import MockerFixture

    from marangoni.equilibrium.stationary import EquilibriumSolution


def _lowest_dirichlet_eigenvalue(grid: Grid) -> float:
    return (
        4.0 * np.sin(np.pi * grid.dx / (2.0 * grid.lx)) ** 2 / grid.dx**2
        + 4.0 * np.sin(np.pi * grid.dy / (2.0 * grid.ly)) ** 2 / grid.dy**2
    )


def test_pure_phase_is_solved_at_once(
    pure_equilibrium: EquilibriumSolution,
) -> None:
    """Test Newton returns `-1` without iterating."""
    assert pure_equilibrium.iterations == 0
    assert pure_equilibrium.residual_l2 == 0.0
    assert pure_equilibrium.method == "newton"
    assert np.all(pure_equilibrium.phi_inf.values == -1.0)
    assert pure_equilibrium.local_minimizer


@pytest.mark.parametrize("tol", [0.0, -1e-8])
def test_non_positive_tolerance(
    grid: Grid,
    eq_params: PhysicalParams,
    tol: float,
) -> None:
    """Test Newton rejects a non-positive tolerance."""
    with pytest.raises(ValueError, match="tol must be positive"):
        solve_stationary(CellField.constant(grid, -1.0), eq_params, tol=tol)


def test_boundary_condition_is_reset(
    grid: Grid,
    eq_params: PhysicalParams,
) -> None:
    """Test the solution carries the Dirichlet boundary value."""
    init = CellField.constant(grid, -1.0, BoundaryCondition.neumann())
    solution = solve_stationary(init, eq_params)
    assert solution.phi_inf.bc == BoundaryCondition.dirichlet(-1.0)
    assert init.bc == BoundaryCondition.neumann()


@pytest.mark.parametrize("seed", range(5))
def test_newton_converges_from_smooth_data(
    grid: Grid,
    eq_params: PhysicalParams,
    smooth_phase: Callable[..., CellField],
    seed: int,
) -> None:
    """Test Newton reaches the tolerance and finds the pure phase."""
    solution = solve_stationary(smooth_phase(grid, seed), eq_params)
    assert 0 < solution.iterations <= 20
    assert solution.residual_l2 <= 1e-8
    assert solution.local_minimizer
    assert np.allclose(solution.phi_inf.values, -1.0, rtol=0.0, atol=1e-8)


def test_reported_residual_is_recomputed(
    grid: Grid,
    eq_params: PhysicalParams,
    smooth_phase: Callable[..., CellField],
) -> None:
    """Test `residual_l2` is the residual of the returned field."""
    solution = solve_stationary(smooth_phase(grid, 7), eq_params)
    assert solution.residual_l2 == l2_norm(
        stationary_residual(solution.phi_inf, eq_params.eps),
    )


def test_newton_iteration_cap(
    grid: Grid,
    eq_params: PhysicalParams,
    smooth_phase: Callable[..., CellField],
) -> None:
    """Test the cap raises and points to the gradient flow."""
    with pytest.raises(EquilibriumNotFoundError) as exc_info:
        solve_stationary(
            smooth_phase(grid, 0),
            eq_params,
            tol=1e-14,
            max_iter=1,
            max_flow_steps=0,
        )
    assert exc_info.value.stage == "newton"
    assert "no convergence in 1 iterations" in str(exc_info.value)
    assert "gradient_flow_oracle" in str(exc_info.value)


def test_newton_restarts_after_relaxation(
    grid: Grid,
    eq_params: PhysicalParams,
    smooth_phase: Callable[..., CellField],
) -> None:
    """Test a failed Newton solve is restarted from the relaxed field."""
    solution = solve_stationary(
        smooth_phase(grid, 0),
        eq_params,
        max_iter=1,
        max_flow_steps=500,
    )
    assert solution.flow_steps == 50
    assert solution.method == "newton"
    assert solution.residual_l2 <= 1e-8
    assert solution.local_minimizer
    assert np.allclose(solution.phi_inf.values, -1.0, rtol=0.0, atol=1e-8)


def test_no_relaxation_without_failure(
    grid: Grid,
    eq_params: PhysicalParams,
    smooth_phase: Callable[..., CellField],
) -> None:
    """Test a converging Newton solve takes no relaxation steps."""
    solution = solve_stationary(smooth_phase(grid, 2), eq_params)
    assert solution.flow_steps == 0


@pytest.mark.slow()
def test_planar_interface_residual() -> None:
    """Test the tanh interface is solved to `1e-8` at 256x64, `eps=0.05`."""
    grid = Grid(nx=256, ny=64)
    params = PhysicalParams(eps=0.05)
    x, _ = grid.cell_mesh()
    init = CellField(
        grid=grid,
        values=interface_profile(x - 0.5, params.eps),
        bc=BoundaryCondition.dirichlet(-1.0),
    )
    solution = solve_stationary(init, params)
    assert solution.residual_l2 <= 1e-8
    assert solution.residual_l2 == l2_norm(
        stationary_residual(solution.phi_inf, params.eps),
    )


def test_phase_dissipation_of_solution(
    grid: Grid,
    eq_params: PhysicalParams,
    smooth_phase: Callable[..., CellField],
) -> None:
    """Test the phase dissipation is `a lam0 gamma |R|^2`."""
    solution = solve_stationary(smooth_phase(grid, 3), eq_params)
    state = State.at_rest(grid, eq_params).replace(phi=solution.phi_inf)
    _, diss_phase, _ = dissipation(
        state,
        eq_params,
        energy_weights(eq_params),
    )
    expected = (
        eq_params.a
        * eq_params.lambda0
        * eq_params.gamma
        * solution.residual_l2**2
    )
    assert diss_phase == pytest.approx(expected, rel=1e-12)
    assert diss_phase <= eq_params.a * eq_params.lambda0 * 1e-16


def test_minimizer_at_pure_phase(
    grid: Grid,
    eq_params: PhysicalParams,
) -> None:
    """Test the smallest eigenvalue at `-1` is `mu_1 + 2/eps^2`."""
    phi = CellField.constant(grid, -1.0, BoundaryCondition.dirichlet(-1.0))
    expected = _lowest_dirichlet_eigenvalue(grid) + 2.0 / eq_params.eps**2
    assert classify_minimizer(phi, eq_params.eps) == pytest.approx(
        expected,
        rel=1e-10,
    )


def test_zero_phase_is_not_minimizer(
    grid: Grid,
    eq_params: PhysicalParams,
) -> None:
    """Test `phi = 0` has a negative direction for a thin interface."""
    phi = CellField.constant(grid, 0.0, BoundaryCondition.dirichlet(-1.0))
    expected = _lowest_dirichlet_eigenvalue(grid) - 1.0 / eq_params.eps**2
    eigenvalue = classify_minimizer(phi, eq_params.eps)
    assert eigenvalue < 0
    assert eigenvalue == pytest.approx(expected, rel=1e-10)


def test_flow_step_limit(eq_params: PhysicalParams) -> None:
    """Test the admissible flow step is `eps^2 / (2 gamma)`."""
    assert max_flow_step(eq_params) == pytest.approx(0.005)


def test_gradient_flow_fixed_point(
    grid: Grid,
    eq_params: PhysicalParams,
) -> None:
    """Test the pure phase is stationary after one flow step."""
    phi = CellField.constant(grid, -1.0, BoundaryCondition.dirichlet(-1.0))
    solution = gradient_flow_oracle(phi, eq_params)
    assert solution.iterations == 1
    assert solution.method == "gradient_flow"
    assert np.all(solution.phi_inf.values == -1.0)


@pytest.mark.parametrize("factor", [0.0, -1.0, 1.5])
def test_gradient_flow_step_out_of_range(
    grid: Grid,
    eq_params: PhysicalParams,
    factor: float,
) -> None:
    """Test steps outside `(0, eps^2/(2 gamma)]` are rejected."""
    with pytest.raises(SolverError, match=r"^\[gradient_flow\]"):
        gradient_flow_oracle(
            CellField.constant(grid, -1.0),
            eq_params,
            dt_flow=factor * max_flow_step(eq_params),
        )


def test_gradient_flow_step_cap(
    grid: Grid,
    eq_params: PhysicalParams,
    smooth_phase: Callable[..., CellField],
) -> None:
    """Test the step cap raises."""
    with pytest.raises(EquilibriumNotFoundError) as exc_info:
        gradient_flow_oracle(
            smooth_phase(grid, 0),
            eq_params,
            tol=1e-14,
            max_steps=1,
        )
    assert exc_info.value.stage == "gradient_flow"


def test_gradient_flow_energy_increase(
    grid: Grid,
    eq_params: PhysicalParams,
    smooth_phase: Callable[..., CellField],
    mocker: MockerFixture,
) -> None:
    """Test an energy increase aborts the flow."""
    mocker.patch(
        "marangoni.equilibrium.stationary.elastic_energy",
        side_effect=[0.0, 1.0],
    )
    with pytest.raises(EnergyMonotonicityError, match="step 1"):
        gradient_flow_oracle(smooth_phase(grid, 0), eq_params)


@pytest.mark.parametrize("seed", range(20))
def test_methods_agree(
    grid: Grid,
    eq_params: PhysicalParams,
    smooth_phase: Callable[..., CellField],
    seed: int,
) -> None:
    """Test Newton and the gradient flow find the same equilibrium."""
    init = smooth_phase(grid, seed)
    newton = solve_stationary(init, eq_params)
    flow = gradient_flow_oracle(init, eq_params)
    distance = l2_norm(
        newton.phi_inf.with_values(
            newton.phi_inf.values - flow.phi_inf.values,
        ),
    )
    assert distance <= 1e-4
    assert flow.local_minimizer


def test_equilibrium_is_fixed_point_of_coupled_step(
    grid: Grid,
    eq_params: PhysicalParams,
    smooth_phase: Callable[..., CellField],
) -> None:
    """Test `(0, phi_inf, 0)` barely moves under the full step."""
    solution = solve_stationary(smooth_phase(grid, 11), eq_params)
    state = State.at_rest(grid, eq_params).replace(phi=solution.phi_inf)
    cfg = StepConfig(dt=1e-4)
    for _ in range(100):
        state = coupled_step(state, eq_params, cfg)

    assert np.max(np.abs(state.phi.values - solution.phi_inf.values)) <= 1e-6
    assert np.max(np.abs(state.velocity.u)) <= 1e-6
    assert np.max(np.abs(state.velocity.v)) <= 1e-6
    assert np.max(np.abs(state.theta.values)) <= 1e-6
