"""Tests for decay-law fits."""
from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np
import pytest

from marangoni.energy.decay import fit_decay, heat_mode_rates
from marangoni.exceptions import DecayFitError
from marangoni.grid.fields import CellField, MacVelocity
from marangoni.grid.grid import Grid
from marangoni.grid.norms import l2_norm
from marangoni.model.params import PhysicalParams
from marangoni.solvers.scalars import ScalarStepConfig, heat_step

if TYPE_CHECKING:
    from marangoni.marangoni_types import DecayModel


def test_exponential_fit() -> None:
    """Test exact exponential data."""
    t = np.linspace(0.0, 2.0, 100)
    fit = fit_decay(t, np.exp(-3.0 * t), "exponential")
    assert fit.rate_or_exponent == pytest.approx(3.0, abs=1e-6)
    assert fit.r_squared > 0.999999
    assert fit.prefactor == pytest.approx(1.0)
    assert fit.window == (0.0, 2.0)


def test_algebraic_fit() -> None:
    """Test exact algebraic data."""
    t = np.linspace(0.0, 50.0, 100)
    fit = fit_decay(t, (1.0 + t) ** -2.0, "algebraic")
    assert fit.model == "algebraic"
    assert fit.rate_or_exponent == pytest.approx(2.0, abs=1e-6)
    assert fit.r_squared > 0.999999


def test_burn_in_window() -> None:
    """Test the transient is excluded from the fit."""
    t = np.linspace(0.0, 1.0, 101)
    values = np.exp(-2.0 * t)
    values[:5] = 50.0
    fit = fit_decay(t, values, "exponential", burn_fraction=0.1)
    assert fit.window[0] == pytest.approx(0.1)
    assert fit.rate_or_exponent == pytest.approx(2.0, abs=1e-9)


@pytest.mark.parametrize("level", [3.0, 0.1, 1e-7, 0.3])
@pytest.mark.parametrize("model", ["exponential", "algebraic"])
def test_constant_trace(level: float, model: DecayModel) -> None:
    """Test a flat trace fits a zero rate perfectly."""
    fit = fit_decay(np.arange(20.0), np.full(20, level), model)
    assert fit.rate_or_exponent == pytest.approx(0.0, abs=1e-12)
    assert fit.r_squared == 1.0
    assert fit.prefactor == pytest.approx(level)


@pytest.mark.parametrize(
    ("times", "values", "match"),
    [
        (np.arange(5.0), np.ones(5), "at least 10"),
        (np.arange(20.0), np.linspace(1.0, -1.0, 20), "non-positive"),
        (np.arange(20.0), np.ones(19), "differ in length"),
        (np.array([]), np.array([]), "empty"),
    ],
)
def test_fit_errors(
    times: np.ndarray,
    values: np.ndarray,
    match: str,
) -> None:
    """Test malformed traces are rejected."""
    with pytest.raises(DecayFitError, match=match):
        fit_decay(times, values, "exponential")


def test_heat_mode_rates_converge() -> None:
    """Test the discrete rate approaches the continuum one."""
    coarse, continuum = heat_mode_rates(Grid(nx=16, ny=16), 1.0, 1e-4)
    fine, same = heat_mode_rates(Grid(nx=128, ny=128), 1.0, 1e-4)
    assert continuum == same == pytest.approx(2.0 * math.pi**2)
    assert abs(fine - continuum) < abs(coarse - continuum)
    assert fine == pytest.approx(continuum, rel=0.01)


def test_heat_run_matches_discrete_rate() -> None:
    """Test fitted decay of implicit heat steps hits the prediction."""
    grid = Grid(nx=32, ny=16, lx=2.0, ly=1.0)
    params = PhysicalParams(k=0.5)
    cfg = ScalarStepConfig(dt=1e-3)
    x, y = grid.cell_mesh()
    theta = CellField(
        grid=grid,
        values=np.sin(np.pi * x / grid.lx) * np.sin(np.pi * y / grid.ly),
    )
    velocity = MacVelocity.zeros(grid)
    times, norms = [0.0], [l2_norm(theta)]
    for step in range(1, 51):
        theta = heat_step(theta, velocity, params, cfg)
        times.append(step * cfg.dt)
        norms.append(l2_norm(theta))
    fit = fit_decay(np.array(times), np.array(norms), "exponential")
    discrete, _ = heat_mode_rates(grid, params.k, cfg.dt)
    assert fit.rate_or_exponent == pytest.approx(discrete, rel=1e-3)
