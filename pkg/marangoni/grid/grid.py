from __future__ import annotations

import dataclasses
from typing import TYPE_CHECKING, Final

import numpy as np

from marangoni.exceptions import GridError

if TYPE_CHECKING:
    from typing_extensions import Self

    from marangoni.marangoni_types import FloatArray

MIN_CELLS: Final = 4


@dataclasses.dataclass(frozen=True)
class Grid:
    """Uniform rectangular MAC grid on `[0, lx] x [0, ly]`.

    ### Fields:
    - `nx`, `ny`: cell counts per axis.
    - `lx`, `ly`: domain extents.

    Scalars live at cell centers, `u` on vertical faces
    and `v` on horizontal faces.
    """

    nx: int
    ny: int
    lx: float = 1.0
    ly: float = 1.0

    def __post_init__(self: Self) -> None:
        if self.nx < MIN_CELLS or self.ny < MIN_CELLS:
            cells_err_msg: Final = (
                f"Grid needs at least {MIN_CELLS} cells per axis, "
                f"got {self.nx}x{self.ny}"
            )
            raise GridError(cells_err_msg)
        if not (self.lx > 0 and self.ly > 0):
            extent_err_msg: Final = "Grid extents must be positive"
            raise GridError(extent_err_msg)

    @property
    def dx(self: Self) -> float:
        """Cell width."""
        return self.lx / self.nx

    @property
    def dy(self: Self) -> float:
        """Cell height."""
        return self.ly / self.ny

    @property
    def cell_area(self: Self) -> float:
        """Area of one cell."""
        return self.dx * self.dy

    @property
    def cell_shape(self: Self) -> tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def u_shape(self: Self) -> tuple[int, int]:
        return (self.nx + 1, self.ny)

    @property
    def v_shape(self: Self) -> tuple[int, int]:
        return (self.nx, self.ny + 1)

    def x_centers(self: Self) -> FloatArray:
        return (np.arange(self.nx) + 0.5) * self.dx

    def y_centers(self: Self) -> FloatArray:
        return (np.arange(self.ny) + 0.5) * self.dy

    def x_nodes(self: Self) -> FloatArray:
        return np.arange(self.nx + 1) * self.dx

    def y_nodes(self: Self) -> FloatArray:
        return np.arange(self.ny + 1) * self.dy

    def cell_mesh(self: Self) -> tuple[FloatArray, FloatArray]:
        """Return coordinates of cell centers, `ij` indexed."""
        return np.meshgrid(self.x_centers(), self.y_centers(), indexing="ij")

    def u_mesh(self: Self) -> tuple[FloatArray, FloatArray]:
        """Return coordinates of vertical faces."""
        return np.meshgrid(self.x_nodes(), self.y_centers(), indexing="ij")

    def v_mesh(self: Self) -> tuple[FloatArray, FloatArray]:
        """Return coordinates of horizontal faces."""
        return np.meshgrid(self.x_centers(), self.y_nodes(), indexing="ij")

    def corner_mesh(self: Self) -> tuple[FloatArray, FloatArray]:
        """Return coordinates of cell corners."""
        return np.meshgrid(self.x_nodes(), self.y_nodes(), indexing="ij")

    def refined(self: Self, factor: int = 2) -> Grid:
        """Return the same domain with `factor` times more cells per axis."""
        return Grid(
            nx=self.nx * factor,
            ny=self.ny * factor,
            lx=self.lx,
            ly=self.ly,
        )
