"""Runtime checks of the pointwise and structural constraints.

Checks only report, they never modify fields.
"""
from __future__ import annotations

import dataclasses
from typing import TYPE_CHECKING, Final

import msgspec
import numpy as np

from marangoni.exceptions import IsothermalModeError
from marangoni.grid.norms import linf_norm
from marangoni.grid.operators import divergence_mac
from marangoni.model.constitutive import smallness_threshold, surface_tension

if TYPE_CHECKING:
    from marangoni.grid.fields import MacVelocity
    from marangoni.model.params import PhysicalParams
    from marangoni.state import State


class Violation(msgspec.Struct, frozen=True):
    """One failed check."""

    check: str
    value: float
    threshold: float


class MonitorReport(msgspec.Struct, frozen=True):
    """Result of all checks on one state.

    `violations` is empty iff every check passed.
    """

    t: float
    max_abs_phi: float
    max_abs_theta: float
    div_u_inf: float
    cfl: float
    lambda_min: float
    smallness_ok: bool
    violations: list[Violation] = msgspec.field(default_factory=list)

    @property
    def passed(self: MonitorReport) -> bool:
        return not self.violations


@dataclasses.dataclass(frozen=True)
class InitialSummary:
    """Sup norms of the initial data, the baseline of the checks."""

    phi0_linf: float
    theta0_linf: float

    @classmethod
    def of(cls: type[InitialSummary], state: State) -> InitialSummary:
        return cls(
            phi0_linf=linf_norm(state.phi),
            theta0_linf=linf_norm(state.theta),
        )


@dataclasses.dataclass(frozen=True)
class MonitorTolerances:
    """Check tolerances.

    Defaults follow the solve tolerances: `tol_div` is ten times
    the Poisson tolerance, `tol_theta` ten times the Helmholtz one.
    """

    tol_phi: float = 1e-3
    tol_theta: float = 1e-9
    tol_div: float = 1e-9

    @classmethod
    def from_solver_tolerances(
        cls: type[MonitorTolerances],
        poisson_tol: float,
        helmholtz_tol: float,
        tol_phi: float = 1e-3,
    ) -> MonitorTolerances:
        return cls(
            tol_phi=tol_phi,
            tol_theta=10.0 * helmholtz_tol,
            tol_div=10.0 * poisson_tol,
        )


def cfl_number(velocity: MacVelocity, dt: float) -> float:
    """Return `dt (|u|_inf / dx + |v|_inf / dy)`."""
    grid: Final = velocity.grid
    return dt * (
        float(np.max(np.abs(velocity.u))) / grid.dx
        + float(np.max(np.abs(velocity.v))) / grid.dy
    )


def smallness_verdict(
    baseline: InitialSummary,
    params: PhysicalParams,
) -> bool:
    """Initial-data smallness under the supplied `c1_estimate`."""
    if baseline.phi0_linf > 1.0:
        return False
    try:
        threshold: Final = smallness_threshold(params)
    except IsothermalModeError:
        return True
    return baseline.theta0_linf <= threshold


def check_state(
    state: State,
    baseline: InitialSummary,
    params: PhysicalParams,
    tolerances: MonitorTolerances,
    dt: float,
) -> MonitorReport:
    """Run every check on `state`.

    ### Parameters:
    - `state`: state to check.
    - `baseline`: sup norms of the initial data.
    - `params`: model coefficients.
    - `tolerances`: check tolerances.
    - `dt`: time step, for the CFL number.

    ### Returns:
    `MonitorReport`, one `Violation` per failed check.
    """
    violations: Final[list[Violation]] = []

    fields: Final = {
        "u": state.velocity.u,
        "v": state.velocity.v,
        "p": state.pressure.values,
        "phi": state.phi.values,
        "theta": state.theta.values,
    }
    for name, values in fields.items():
        bad_cells = int(np.count_nonzero(~np.isfinite(values)))
        if bad_cells:
            violations.append(
                Violation(
                    check=f"finite:{name}",
                    value=float(bad_cells),
                    threshold=0.0,
                ),
            )

    max_abs_phi: Final = linf_norm(state.phi)
    max_abs_theta: Final = linf_norm(state.theta)
    div_u_inf: Final = linf_norm(divergence_mac(state.velocity))
    cfl: Final = cfl_number(state.velocity, dt)
    lambda_min: Final = float(
        np.min(surface_tension(state.theta.values, params)),
    )

    limits: Final = (
        ("phase_bound", max_abs_phi, 1.0 + tolerances.tol_phi),
        (
            "theta_max_principle",
            max_abs_theta,
            baseline.theta0_linf + tolerances.tol_theta,
        ),
        ("divergence", div_u_inf, tolerances.tol_div),
        ("cfl", cfl, 1.0),
    )
    for check, value, threshold in limits:
        if value > threshold:
            violations.append(
                Violation(check=check, value=value, threshold=threshold),
            )
    if lambda_min <= 0:
        violations.append(
            Violation(
                check="surface_tension",
                value=lambda_min,
                threshold=0.0,
            ),
        )

    return MonitorReport(
        t=state.t,
        max_abs_phi=max_abs_phi,
        max_abs_theta=max_abs_theta,
        div_u_inf=div_u_inf,
        cfl=cfl,
        lambda_min=lambda_min,
        smallness_ok=smallness_verdict(baseline, params),
        violations=violations,
    )
