from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest

from marangoni.equilibrium.stationary import (
    EquilibriumSolution,
    solve_stationary,
)
from marangoni.grid.fields import BoundaryCondition, CellField
from marangoni.model.params import PhysicalParams

if TYPE_CHECKING:
    from collections.abc import Callable

    from marangoni.grid.grid import Grid


def _smooth_phase(
    grid: Grid,
    seed: int,
    amplitude: float = 0.2,
) -> CellField:
    """`-1` plus a few random sine modes with sup norm `amplitude`."""
    rng = np.random.default_rng(seed)
    x, y = grid.cell_mesh()
    bump = np.zeros_like(x)
    for m in range(1, 4):
        for n in range(1, 4):
            bump += (
                rng.standard_normal()
                * np.sin(m * np.pi * x / grid.lx)
                * np.sin(n * np.pi * y / grid.ly)
            )
    bump *= amplitude / np.max(np.abs(bump))
    return CellField(
        grid=grid,
        values=-1.0 + bump,
        bc=BoundaryCondition.dirichlet(-1.0),
    )


@pytest.fixture()
def smooth_phase() -> Callable[..., CellField]:
    """Factory of smooth phase fields near the pure phase."""
    return _smooth_phase


@pytest.fixture()
def eq_params() -> PhysicalParams:
    """Wide interface, fast to resolve on small grids."""
    return PhysicalParams(eps=0.1, lambda0=0.1)


@pytest.fixture()
def pure_equilibrium(
    grid: Grid,
    eq_params: PhysicalParams,
) -> EquilibriumSolution:
    """The pure phase `phi = -1`."""
    return solve_stationary(
        CellField.constant(grid, -1.0, BoundaryCondition.dirichlet(-1.0)),
        eq_params,
    )
