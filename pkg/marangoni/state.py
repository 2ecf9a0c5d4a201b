from __future__ import annotations

import dataclasses
from typing import TYPE_CHECKING, Any

from marangoni.grid.fields import BoundaryCondition, CellField, MacVelocity

if TYPE_CHECKING:
    from typing_extensions import Self

    from marangoni.grid.grid import Grid
    from marangoni.model.params import PhysicalParams


@dataclasses.dataclass
class State:
    """Discrete fields at one time level.

    ### Fields:
    - `velocity`: staggered velocity `u`.
    - `pressure`: zero-mean pressure, Neumann bc.
    - `phi`: phase field, Dirichlet `phi_boundary`.
    - `theta`: temperature, homogeneous Dirichlet.
    - `t`: time.
    """

    velocity: MacVelocity
    pressure: CellField
    phi: CellField
    theta: CellField
    t: float = 0.0

    @property
    def grid(self: Self) -> Grid:
        return self.phi.grid

    @classmethod
    def at_rest(
        cls: type[State],
        grid: Grid,
        params: PhysicalParams,
        t: float = 0.0,
    ) -> State:
        """Fluid at rest, uniform phase at its boundary value, zero heat."""
        return cls(
            velocity=MacVelocity.zeros(grid),
            pressure=CellField.constant(
                grid,
                0.0,
                BoundaryCondition.neumann(),
            ),
            phi=CellField.constant(
                grid,
                params.phi_boundary,
                BoundaryCondition.dirichlet(params.phi_boundary),
            ),
            theta=CellField.constant(grid, 0.0),
            t=t,
        )

    def replace(self: Self, **changes: Any) -> State:
        """Return a copy with some fields replaced."""
        return dataclasses.replace(self, **changes)
