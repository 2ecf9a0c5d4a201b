"""Discrete norms with midpoint quadrature."""
from __future__ import annotations

import math
from typing import TYPE_CHECKING, Final, Union

import numpy as np

from marangoni.grid.fields import CellField, FaceVector, MacVelocity
from marangoni.grid.operators import gradient_cc, velocity_laplacian

if TYPE_CHECKING:
    from marangoni.marangoni_types import FloatArray

AnyField = Union[CellField, MacVelocity, FaceVector]


def _components(field: AnyField) -> tuple[FloatArray, ...]:
    if isinstance(field, CellField):
        return (field.values,)
    if isinstance(field, MacVelocity):
        return (field.u, field.v)
    return (field.x, field.y)


def inner(first: CellField, second: CellField) -> float:
    """Discrete L2 inner product of two cell fields."""
    return float(np.sum(first.values * second.values) * first.grid.cell_area)


def l2_norm(field: AnyField) -> float:
    """Return `sqrt(sum values^2 dx dy)` over every component."""
    total: Final = sum(
        float(np.sum(part * part)) for part in _components(field)
    )
    return math.sqrt(total * field.grid.cell_area)


def linf_norm(field: AnyField) -> float:
    """Return max absolute value, NaN propagates."""
    return max(float(np.max(np.abs(part))) for part in _components(field))


def face_quadrature(vector: FaceVector) -> float:
    """Integral of `|vector|^2` over faces.

    Wall faces carry half weight, so for homogeneous Dirichlet
    fields `<lap f, f> = -|f|_1^2` holds exactly.
    """
    area: Final = vector.grid.cell_area
    x_sq: Final = vector.x * vector.x
    y_sq: Final = vector.y * vector.y
    interior: Final = float(np.sum(x_sq[1:-1, :]) + np.sum(y_sq[:, 1:-1]))
    walls: Final = float(
        np.sum(x_sq[0, :])
        + np.sum(x_sq[-1, :])
        + np.sum(y_sq[:, 0])
        + np.sum(y_sq[:, -1]),
    )
    return area * (interior + 0.5 * walls)


def h1_seminorm(field: CellField) -> float:
    """L2 norm of the face gradient."""
    return math.sqrt(face_quadrature(gradient_cc(field)))


def h1_norm(field: CellField) -> float:
    """Full H1 norm, `sqrt(|f|^2 + |grad f|^2)`."""
    return math.sqrt(l2_norm(field) ** 2 + h1_seminorm(field) ** 2)


def velocity_gradient_sq(velocity: MacVelocity) -> float:
    """Return `||grad u||^2` as `-<lap u, u>` of the viscous stencil."""
    lap: Final = velocity_laplacian(velocity)
    pairing: Final = float(
        np.sum(lap.u * velocity.u) + np.sum(lap.v * velocity.v),
    )
    return max(-pairing * velocity.grid.cell_area, 0.0)


def velocity_h1_norm(velocity: MacVelocity) -> float:
    """Full H1 norm of a velocity."""
    return math.sqrt(l2_norm(velocity) ** 2 + velocity_gradient_sq(velocity))
