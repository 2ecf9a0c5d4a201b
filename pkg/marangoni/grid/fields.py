"""Field containers living on a `Grid`."""
from __future__ import annotations

import dataclasses
from typing import TYPE_CHECKING, Final

import numpy as np

from marangoni.exceptions import GridError

if TYPE_CHECKING:
    from typing_extensions import Self

    from marangoni.grid.grid import Grid
    from marangoni.marangoni_types import BoundaryKind, FloatArray


@dataclasses.dataclass(frozen=True)
class BoundaryCondition:
    """Boundary treatment of a cell field.

    Dirichlet ghosts are `2 value - interior`,
    Neumann ghosts copy the interior value.
    """

    kind: BoundaryKind = "dirichlet"
    value: float = 0.0

    @classmethod
    def dirichlet(
        cls: type[BoundaryCondition],
        value: float = 0.0,
    ) -> BoundaryCondition:
        return cls(kind="dirichlet", value=value)

    @classmethod
    def neumann(cls: type[BoundaryCondition]) -> BoundaryCondition:
        return cls(kind="neumann", value=0.0)

    @property
    def is_dirichlet(self: Self) -> bool:
        return self.kind == "dirichlet"

    def homogeneous(self: Self) -> BoundaryCondition:
        """Same kind, zero data."""
        return BoundaryCondition(kind=self.kind, value=0.0)


def _check_shape(
    name: str,
    values: FloatArray,
    expected: tuple[int, int],
) -> None:
    if values.shape != expected:
        shape_err_msg: Final = (
            f"{name} has shape {values.shape}, grid expects {expected}"
        )
        raise GridError(shape_err_msg)


@dataclasses.dataclass
class CellField:
    """Scalar field at cell centers.

    ### Fields:
    - `grid`: grid of the field.
    - `values`: `(nx, ny)` array.
    - `bc`: boundary condition used for ghost cells.
    """

    grid: Grid
    values: FloatArray
    bc: BoundaryCondition = dataclasses.field(
        default_factory=BoundaryCondition.dirichlet,
    )

    def __post_init__(self: Self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        _check_shape("CellField", self.values, self.grid.cell_shape)

    @classmethod
    def constant(
        cls: type[CellField],
        grid: Grid,
        value: float,
        bc: BoundaryCondition | None = None,
    ) -> CellField:
        """Create a field filled with `value`."""
        return cls(
            grid=grid,
            values=np.full(grid.cell_shape, value, dtype=np.float64),
            bc=bc or BoundaryCondition.dirichlet(),
        )

    def with_values(self: Self, values: FloatArray) -> CellField:
        """Return new field on the same grid with the same bc."""
        return CellField(grid=self.grid, values=values, bc=self.bc)

    def copy(self: Self) -> CellField:
        return self.with_values(self.values.copy())


@dataclasses.dataclass
class FaceVector:
    """Vector field sampled on MAC faces.

    `x` lives on vertical faces `(nx+1, ny)`,
    `y` on horizontal faces `(nx, ny+1)`.
    Used for gradients and force densities.
    """

    grid: Grid
    x: FloatArray
    y: FloatArray

    def __post_init__(self: Self) -> None:
        self.x = np.asarray(self.x, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.float64)
        _check_shape("FaceVector.x", self.x, self.grid.u_shape)
        _check_shape("FaceVector.y", self.y, self.grid.v_shape)

    @classmethod
    def zeros(cls: type[FaceVector], grid: Grid) -> FaceVector:
        return cls(
            grid=grid,
            x=np.zeros(grid.u_shape),
            y=np.zeros(grid.v_shape),
        )

    def __add__(self: Self, other: FaceVector) -> FaceVector:
        return FaceVector(
            grid=self.grid,
            x=self.x + other.x,
            y=self.y + other.y,
        )

    def scaled(self: Self, factor: float) -> FaceVector:
        return FaceVector(grid=self.grid, x=factor * self.x, y=factor * self.y)


@dataclasses.dataclass
class MacVelocity:
    """Staggered velocity.

    ### Fields:
    - `u`: `(nx+1, ny)` normal velocity on vertical faces.
    - `v`: `(nx, ny+1)` normal velocity on horizontal faces.

    Wall faces carry zero normal velocity (no-slip).
    """

    grid: Grid
    u: FloatArray
    v: FloatArray

    def __post_init__(self: Self) -> None:
        self.u = np.asarray(self.u, dtype=np.float64)
        self.v = np.asarray(self.v, dtype=np.float64)
        _check_shape("MacVelocity.u", self.u, self.grid.u_shape)
        _check_shape("MacVelocity.v", self.v, self.grid.v_shape)

    @classmethod
    def zeros(cls: type[MacVelocity], grid: Grid) -> MacVelocity:
        return cls(
            grid=grid,
            u=np.zeros(grid.u_shape),
            v=np.zeros(grid.v_shape),
        )

    def pinned(self: Self) -> MacVelocity:
        """Return copy with wall faces set to zero."""
        u = self.u.copy()
        v = self.v.copy()
        u[0, :] = 0.0
        u[-1, :] = 0.0
        v[:, 0] = 0.0
        v[:, -1] = 0.0
        return MacVelocity(grid=self.grid, u=u, v=v)

    def copy(self: Self) -> MacVelocity:
        return MacVelocity(grid=self.grid, u=self.u.copy(), v=self.v.copy())

    def scaled(self: Self, factor: float) -> MacVelocity:
        return MacVelocity(
            grid=self.grid,
            u=factor * self.u,
            v=factor * self.v,
        )


def ensure_same_grid(*fields: CellField | MacVelocity | FaceVector) -> Grid:
    """Return the common grid.

    ### Raises:
    - `GridError`: if fields live on different grids.
    """
    grid: Final = fields[0].grid
    for field in fields[1:]:
        if field.grid != grid:
            grid_err_msg = (
                f"Grid mismatch: {field.grid} is not {grid}"
            )
            raise GridError(grid_err_msg)
    return grid
