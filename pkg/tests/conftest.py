"""Main conftest for all tests."""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest

from marangoni.config import MarangoniConfig, RunConfig
from marangoni.grid.grid import Grid
from marangoni.model.params import PhysicalParams

if TYPE_CHECKING:
    from collections.abc import Generator
    from pathlib import Path


@pytest.fixture()
def grid() -> Grid:
    """Small square grid."""
    return Grid(nx=16, ny=16)


@pytest.fixture()
def rect_grid() -> Grid:
    """Rectangular grid with unequal spacings."""
    return Grid(nx=12, ny=8, lx=1.5, ly=0.5)


@pytest.fixture()
def params() -> PhysicalParams:
    """Default coefficients."""
    return PhysicalParams()


@pytest.fixture()
def rng() -> np.random.Generator:
    """Seeded generator."""
    return np.random.default_rng(20240611)


@pytest.fixture()
def run_config(tmp_path: Path) -> RunConfig:
    """Small run writing into a temporary directory."""
    return RunConfig().replace(
        nx=16,
        ny=16,
        dt=1e-4,
        t_end=1e-3,
        trace_path=str(tmp_path / "trace.csv"),
        snapshot_dir=str(tmp_path / "snapshots"),
        snapshot_every=5,
    )


@pytest.fixture(autouse=True)
def _reset_discovered_config() -> Generator[None, None, None]:
    """Every test starts without a cached config."""
    MarangoniConfig.reset()
    yield
    MarangoniConfig.reset()
