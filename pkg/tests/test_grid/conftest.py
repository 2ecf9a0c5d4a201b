from __future__ import annotations

import numpy as np
import pytest

from marangoni.grid.fields import CellField
from marangoni.grid.grid import Grid


@pytest.fixture()
def mode(rect_grid: Grid) -> CellField:
    """Lowest Dirichlet eigenmode on the rectangular grid."""
    x, y = rect_grid.cell_mesh()
    return CellField(
        grid=rect_grid,
        values=np.sin(np.pi * x / rect_grid.lx)
        * np.sin(np.pi * y / rect_grid.ly),
    )
