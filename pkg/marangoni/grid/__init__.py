from marangoni.grid.fields import (
    BoundaryCondition,
    CellField,
    FaceVector,
    MacVelocity,
)
from marangoni.grid.grid import Grid
from marangoni.grid.norms import h1_seminorm, l2_norm, linf_norm
from marangoni.grid.operators import (
    advect_upwind,
    divergence_mac,
    gradient_cc,
    laplacian_cc,
)

__all__ = [
    "BoundaryCondition",
    "CellField",
    "FaceVector",
    "Grid",
    "MacVelocity",
    "advect_upwind",
    "divergence_mac",
    "gradient_cc",
    "h1_seminorm",
    "l2_norm",
    "laplacian_cc",
    "linf_norm",
]
