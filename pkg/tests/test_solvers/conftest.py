from __future__ import annotations

import numpy as np
import pytest

from marangoni.grid.fields import MacVelocity
from marangoni.grid.grid import Grid
from marangoni.grid.operators import velocity_from_stream_function
from marangoni.model.params import PhysicalParams
from marangoni.state import State


@pytest.fixture()
def rest_state(grid: Grid, params: PhysicalParams) -> State:
    """Fluid at rest at the pure phase."""
    return State.at_rest(grid, params)


@pytest.fixture()
def swirl(grid: Grid) -> MacVelocity:
    """Divergence-free cell-sized vortex with unit peak stream function."""
    x, y = grid.corner_mesh()
    psi = np.sin(np.pi * x) ** 2 * np.sin(np.pi * y) ** 2 / np.pi
    return velocity_from_stream_function(grid, psi)
