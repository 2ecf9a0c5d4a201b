"""Manufactured solutions and convergence orders in space and time.

Exact fields are written in `sympy`, the forcing that makes them
solutions is derived symbolically and lambdified to numpy.
Every field has a time-periodic amplitude and satisfies the
boundary conditions of the scheme.
"""
from __future__ import annotations

import dataclasses
import functools
import logging
import math
from typing import TYPE_CHECKING, Final, Literal

import msgspec
import numpy as np
import sympy

from marangoni.exceptions import ConfigValidationError
from marangoni.grid.fields import BoundaryCondition, CellField, MacVelocity
from marangoni.grid.grid import Grid
from marangoni.grid.norms import l2_norm
from marangoni.grid.operators import velocity_from_stream_function
from marangoni.solvers.coupled import SourceTerms, mode_step
from marangoni.state import State

if TYPE_CHECKING:
    from marangoni.config import RunConfig
    from marangoni.marangoni_types import (
        FieldFunction,
        FloatArray,
        SimulationMode,
    )
    from marangoni.model.params import PhysicalParams

logger = logging.getLogger(__name__)

MmsName = Literal["heat", "phase", "coupled", "rest"]

MMS_NAMES: Final[tuple[MmsName, ...]] = ("heat", "phase", "coupled", "rest")
DEFAULT_LADDER: Final = (32, 64, 128)
DEFAULT_STEP_LADDER: Final = (20, 40, 80, 160)
MIN_TIME_RUNGS: Final = 3
MMS_FIELDS: Final = ("theta", "phi", "velocity")

X, Y, T = sympy.symbols("x y t", real=True)

# amplitudes of the manufactured fields
THETA_SCALE: Final = 0.5
PHI_SCALE: Final = 0.5
# the upwind O(h) transport error stays below the O(h^2) terms
# on ladders up to 256 cells
PSI_SCALE: Final = 1e-4


class MmsReport(msgspec.Struct, frozen=True):
    """Errors and observed orders of one manufactured solution.

    - `errors`: field -> L2 error at `t_end` per rung.
    - `orders`: field -> `log2(e_coarse / e_fine)` per rung pair,
        `nan` where errors are at the rounding floor. On a `time`
        ladder the ratios are taken over `differences`.
    - `ladder`: `space` for grid refinement, `time` for step
        refinement on a fixed grid.
    - `differences`: field -> distance between successive rungs,
        `time` ladders only.
    """

    solution: str
    resolutions: list[int]
    time_steps: list[float]
    errors: dict[str, list[float]]
    orders: dict[str, list[float]]
    ladder: Literal["space", "time"] = "space"
    differences: dict[str, list[float]] = msgspec.field(default_factory=dict)

    def observed_order(self: MmsReport, field: str) -> float:
        """Order on the finest pair of rungs."""
        return self.orders[field][-1]


@dataclasses.dataclass(frozen=True)
class ManufacturedSolution:
    """Exact fields and forcing as numpy callables `f(x, y, t)`.

    `psi` is the stream function of the velocity.
    """

    mode: SimulationMode
    theta: FieldFunction
    phi: FieldFunction
    psi: FieldFunction
    u: FieldFunction
    v: FieldFunction
    sources: SourceTerms


def _lambdify(expression: sympy.Expr) -> FieldFunction:
    compiled: Final = sympy.lambdify((X, Y, T), expression, modules="numpy")

    def evaluate(x: FloatArray, y: FloatArray, t: float) -> FloatArray:
        values = np.asarray(compiled(x, y, t), dtype=np.float64)
        return np.broadcast_to(values, np.shape(x)).copy()

    return evaluate


def _grad(expression: sympy.Expr) -> tuple[sympy.Expr, sympy.Expr]:
    return sympy.diff(expression, X), sympy.diff(expression, Y)


def _laplacian(expression: sympy.Expr) -> sympy.Expr:
    return sympy.diff(expression, X, 2) + sympy.diff(expression, Y, 2)


def _capillary_force(
    phi: sympy.Expr,
    theta: sympy.Expr,
    params: PhysicalParams,
) -> tuple[sympy.Expr, sympy.Expr]:
    """Conservative capillary force, same splitting as the solver."""
    eps: Final = sympy.Float(params.eps)
    tension: Final = params.lambda0 * (params.a - params.b * theta)
    excess: Final = tension - params.lambda0 * params.a
    phi_x, phi_y = _grad(phi)
    energy_density: Final = (
        (phi_x**2 + phi_y**2) / 2 + (phi**2 - 1) ** 2 / (4 * eps**2)
    )
    force_x: Final = (
        -sympy.diff(tension * phi_x * phi_x, X)
        - sympy.diff(tension * phi_x * phi_y, Y)
        + sympy.diff(excess * energy_density, X)
    )
    force_y: Final = (
        -sympy.diff(tension * phi_y * phi_x, X)
        - sympy.diff(tension * phi_y * phi_y, Y)
        + sympy.diff(excess * energy_density, Y)
    )
    return force_x, force_y


@functools.lru_cache(maxsize=16)
def manufactured_solution(
    name: MmsName,
    params: PhysicalParams,
    lx: float = 1.0,
    ly: float = 1.0,
) -> ManufacturedSolution:
    """Build exact fields and forcing of a named solution.

    - `heat`: temperature mode, fluid at rest.
    - `phase`: phase bump around `phi_boundary`, fluid at rest.
    - `coupled`: all fields, fluid driven by a stream function.
    - `rest`: the equilibrium `(0, phi_boundary, 0)`, no forcing.
    """
    amplitude: Final = 1 + sympy.sin(2 * sympy.pi * T) / 2
    mode_x: Final = sympy.sin(sympy.pi * X / lx)
    mode_y: Final = sympy.sin(sympy.pi * Y / ly)
    zero: Final = sympy.Integer(0)

    theta = zero
    phi = sympy.Float(params.phi_boundary)
    psi = zero
    if name in ("heat", "coupled"):
        theta = THETA_SCALE * amplitude * mode_x * mode_y
    if name in ("phase", "coupled"):
        phi = phi + PHI_SCALE * amplitude * mode_x * mode_y
    if name == "coupled":
        psi = PSI_SCALE * amplitude * mode_x**2 * mode_y**2
    u = sympy.diff(psi, Y)
    v = -sympy.diff(psi, X)

    eps: Final = sympy.Float(params.eps)
    theta_x, theta_y = _grad(theta)
    phi_x, phi_y = _grad(phi)
    theta_source: Final = (
        sympy.diff(theta, T)
        + u * theta_x
        + v * theta_y
        - params.k * _laplacian(theta)
    )
    phi_source: Final = (
        sympy.diff(phi, T)
        + u * phi_x
        + v * phi_y
        - params.gamma * (_laplacian(phi) - (phi**3 - phi) / eps**2)
    )
    force_x, force_y = _capillary_force(phi, theta, params)
    u_source: Final = (
        sympy.diff(u, T)
        + u * sympy.diff(u, X)
        + v * sympy.diff(u, Y)
        - params.nu * _laplacian(u)
        - force_x
    )
    v_source: Final = (
        sympy.diff(v, T)
        + u * sympy.diff(v, X)
        + v * sympy.diff(v, Y)
        - params.nu * _laplacian(v)
        - force_y
        - params.alpha * params.g * theta
    )

    mode: Final[dict[MmsName, SimulationMode]] = {
        "heat": "heat_only",
        "phase": "phase_only",
        "coupled": "full",
        "rest": "full",
    }
    sources: Final = (
        SourceTerms()
        if name == "rest"
        else SourceTerms(
            theta=_lambdify(theta_source),
            phi=_lambdify(phi_source),
            u=_lambdify(u_source),
            v=_lambdify(v_source),
        )
    )
    return ManufacturedSolution(
        mode=mode[name],
        theta=_lambdify(theta),
        phi=_lambdify(phi),
        psi=_lambdify(psi),
        u=_lambdify(u),
        v=_lambdify(v),
        sources=sources,
    )


def exact_state(
    solution: ManufacturedSolution,
    grid: Grid,
    params: PhysicalParams,
    t: float,
) -> State:
    """Sample the exact fields at time `t`.

    The velocity is the discrete curl of the sampled stream
    function, so it is discretely divergence-free.
    """
    x_c, y_c = grid.cell_mesh()
    x_n, y_n = grid.corner_mesh()
    rest: Final = State.at_rest(grid, params, t=t)
    return rest.replace(
        velocity=velocity_from_stream_function(
            grid,
            solution.psi(x_n, y_n, t),
        ),
        phi=CellField(
            grid=grid,
            values=solution.phi(x_c, y_c, t),
            bc=BoundaryCondition.dirichlet(params.phi_boundary),
        ),
        theta=CellField(grid=grid, values=solution.theta(x_c, y_c, t)),
    )


def _errors(
    state: State,
    solution: ManufacturedSolution,
    params: PhysicalParams,
) -> dict[str, float]:
    grid: Final = state.grid
    x_c, y_c = grid.cell_mesh()
    x_u, y_u = grid.u_mesh()
    x_v, y_v = grid.v_mesh()
    exact_velocity: Final = MacVelocity(
        grid=grid,
        u=solution.u(x_u, y_u, state.t),
        v=solution.v(x_v, y_v, state.t),
    ).pinned()
    velocity_error: Final = MacVelocity(
        grid=grid,
        u=state.velocity.u - exact_velocity.u,
        v=state.velocity.v - exact_velocity.v,
    )
    return {
        "theta": l2_norm(
            state.theta.with_values(
                state.theta.values - solution.theta(x_c, y_c, state.t),
            ),
        ),
        "phi": l2_norm(
            state.phi.with_values(
                state.phi.values - solution.phi(x_c, y_c, state.t),
            ),
        ),
        "velocity": l2_norm(velocity_error),
    }


def _order(coarse: float, fine: float) -> float:
    if coarse <= 0 or fine <= 0:
        return math.nan
    return math.log2(coarse / fine)


def _orders(values: dict[str, list[float]]) -> dict[str, list[float]]:
    return {
        field: [
            _order(coarse, fine)
            for coarse, fine in zip(series[:-1], series[1:])
        ]
        for field, series in values.items()
    }


def _advance(
    cfg: RunConfig,
    solution: ManufacturedSolution,
    grid: Grid,
    n_steps: int,
    t_end: float,
) -> State:
    """Step the exact state at `t = 0` to `t_end` in `n_steps` steps."""
    params: Final = cfg.params
    step_cfg: Final = dataclasses.replace(
        cfg.step_config(),
        dt=t_end / n_steps,
    )
    state = exact_state(solution, grid, params, 0.0)
    for _ in range(n_steps):
        state = mode_step(
            state,
            params,
            step_cfg,
            solution.mode,
            solution.sources,
        )
    return state


def _differences(coarse: State, fine: State) -> dict[str, float]:
    """L2 distances between two runs on one grid."""
    return {
        "theta": l2_norm(
            coarse.theta.with_values(coarse.theta.values - fine.theta.values),
        ),
        "phi": l2_norm(
            coarse.phi.with_values(coarse.phi.values - fine.phi.values),
        ),
        "velocity": l2_norm(
            MacVelocity(
                grid=coarse.grid,
                u=coarse.velocity.u - fine.velocity.u,
                v=coarse.velocity.v - fine.velocity.v,
            ),
        ),
    }


def _field_lists() -> dict[str, list[float]]:
    return {field: [] for field in MMS_FIELDS}


def mms_convergence(
    cfg: RunConfig,
    name: MmsName,
    resolutions: tuple[int, ...] = DEFAULT_LADDER,
    t_end: float = 0.05,
    dt_factor: float = 0.25,
) -> MmsReport:
    """Run a manufactured solution on a grid ladder.

    Each rung uses `n x n` cells and `dt ~ dt_factor h^2`,
    adjusted so that `t_end` is hit exactly.

    ### Parameters:
    - `cfg`: coefficients, domain, stabilization and tolerances.
    - `name`: manufactured solution.
    - `resolutions`: cells per axis, coarse to fine.
    - `t_end`: final time.
    - `dt_factor`: time step in units of `h^2`.

    ### Raises:
    - `SolverError`: a rung failed.
    """
    solution: Final = manufactured_solution(
        name,
        cfg.params,
        cfg.grid.lx,
        cfg.grid.ly,
    )
    errors: Final = _field_lists()
    time_steps: Final[list[float]] = []

    for cells in resolutions:
        grid = Grid(nx=cells, ny=cells, lx=cfg.grid.lx, ly=cfg.grid.ly)
        spacing = min(grid.dx, grid.dy)
        n_steps = max(1, math.ceil(t_end / (dt_factor * spacing * spacing)))
        state = _advance(cfg, solution, grid, n_steps, t_end)
        rung_errors = _errors(state, solution, cfg.params)
        logger.info(
            "mms %s on %dx%d, %d steps: %s",
            name,
            cells,
            cells,
            n_steps,
            rung_errors,
        )
        for field, error in rung_errors.items():
            errors[field].append(error)
        time_steps.append(t_end / n_steps)

    return MmsReport(
        solution=name,
        resolutions=list(resolutions),
        time_steps=time_steps,
        errors=errors,
        orders=_orders(errors),
    )


def mms_temporal_convergence(
    cfg: RunConfig,
    name: MmsName,
    cells: int = 32,
    step_counts: tuple[int, ...] = DEFAULT_STEP_LADDER,
    t_end: float = 0.05,
) -> MmsReport:
    """Run a manufactured solution on a time-step ladder.

    The grid is fixed, so the spatial error cancels in the
    difference of two rungs. Orders come from the differences of
    successive rungs, `log2(d_k / d_{k+1})` with `d_k` the distance
    between the runs with `N_k` and `N_{k+1}` steps. Step counts
    should double from rung to rung.

    ### Parameters:
    - `cfg`: coefficients, domain, stabilization and tolerances.
    - `name`: manufactured solution.
    - `cells`: cells per axis.
    - `step_counts`: steps to `t_end` per rung, coarse to fine.
    - `t_end`: final time.

    ### Raises:
    - `ConfigValidationError`: fewer than three rungs.
    - `SolverError`: a rung failed.
    """
    if len(step_counts) < MIN_TIME_RUNGS:
        rungs_err_msg: Final = (
            f"need at least {MIN_TIME_RUNGS} step counts, "
            f"got {len(step_counts)}"
        )
        raise ConfigValidationError(rungs_err_msg)

    solution: Final = manufactured_solution(
        name,
        cfg.params,
        cfg.grid.lx,
        cfg.grid.ly,
    )
    grid: Final = Grid(nx=cells, ny=cells, lx=cfg.grid.lx, ly=cfg.grid.ly)
    errors: Final = _field_lists()
    differences: Final = _field_lists()
    previous: State | None = None

    for n_steps in step_counts:
        state = _advance(cfg, solution, grid, n_steps, t_end)
        rung_errors = _errors(state, solution, cfg.params)
        logger.info(
            "mms %s on %dx%d, %d steps: %s",
            name,
            cells,
            cells,
            n_steps,
            rung_errors,
        )
        for field, error in rung_errors.items():
            errors[field].append(error)
        if previous is not None:
            for field, distance in _differences(previous, state).items():
                differences[field].append(distance)
        previous = state

    return MmsReport(
        solution=name,
        resolutions=[cells] * len(step_counts),
        time_steps=[t_end / n_steps for n_steps in step_counts],
        errors=errors,
        orders=_orders(differences),
        ladder="time",
        differences=differences,
    )
