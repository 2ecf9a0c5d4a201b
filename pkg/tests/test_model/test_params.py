"""Tests for the physical coefficients."""
from __future__ import annotations

import pydantic
import pytest

from marangoni.model.params import PhysicalParams


def test_defaults() -> None:
    """Test defaults are positive and phi is pinned to -1."""
    params = PhysicalParams()
    assert params.nu == 1.0
    assert params.lambda0 == 0.05
    assert params.phi_boundary == -1.0
    assert params.rho == 1.0


@pytest.mark.parametrize(
    "field",
    ["nu", "gamma", "k", "lambda0", "a", "eps", "c1_estimate"],
)
@pytest.mark.parametrize("value", [0.0, -1.0])
def test_non_positive_rejected(field: str, value: float) -> None:
    """Test that positive coefficients reject zero and negatives."""
    with pytest.raises(
        pydantic.ValidationError,
        match=f"{field} must be positive",
    ):
        PhysicalParams(**{field: value})


def test_phi_boundary_range() -> None:
    """Test `phi_boundary` outside [-1, 1] is rejected."""
    with pytest.raises(pydantic.ValidationError, match="phi_boundary"):
        PhysicalParams(phi_boundary=1.5)


def test_b_and_alpha_may_be_zero() -> None:
    """Test thermal couplings may vanish."""
    params = PhysicalParams(b=0.0, alpha=0.0)
    assert params.b == 0.0
    assert params.alpha == 0.0


def test_isothermal_copy() -> None:
    """Test `isothermal` switches off only the thermal couplings."""
    params = PhysicalParams(b=2.0, alpha=3.0, nu=0.5)
    iso = params.isothermal()
    assert (iso.b, iso.alpha, iso.nu) == (0.0, 0.0, 0.5)
    assert params.b == 2.0


def test_frozen() -> None:
    """Test coefficients can't be mutated."""
    params = PhysicalParams()
    with pytest.raises(pydantic.ValidationError):
        params.nu = 2.0  # type: ignore[misc]
