"""Thermocapillary phase-field flow simulator."""

from marangoni.config import RunConfig, load_config
from marangoni.grid.grid import Grid
from marangoni.model.params import PhysicalParams
from marangoni.state import State

__all__ = [
    "Grid",
    "PhysicalParams",
    "RunConfig",
    "State",
    "load_config",
]
