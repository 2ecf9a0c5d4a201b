"""Stationary Allen-Cahn problem `-lap phi + F'(phi) = 0`."""
from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING, Final

import msgspec
import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from marangoni.energy.ledger import elastic_energy
from marangoni.exceptions import (
    EnergyMonotonicityError,
    EquilibriumNotFoundError,
    SolverError,
)
from marangoni.grid.fields import BoundaryCondition, CellField, MacVelocity
from marangoni.grid.matrices import cell_laplacian_matrix
from marangoni.grid.norms import l2_norm
from marangoni.grid.operators import laplacian_cc
from marangoni.model.constitutive import (
    potential_derivative,
    potential_second_derivative,
)
from marangoni.solvers.scalars import ScalarStepConfig, phase_step

if TYPE_CHECKING:
    from marangoni.grid.grid import Grid
    from marangoni.marangoni_types import EquilibriumMethod, FloatArray
    from marangoni.model.params import PhysicalParams

logger = logging.getLogger(__name__)

MAX_HALVINGS: Final = 50
POWER_ITERATIONS: Final = 50
MONOTONICITY_SLACK: Final = 1e-12
FLOW_CHUNK: Final = 50
RETRY_ITERATIONS: Final = 20
FLOW_HELMHOLTZ_TOL: Final = 1e-12


class EquilibriumSolution(msgspec.Struct):
    """Result of a stationary solve.

    - `phi_inf`: the equilibrium phase field.
    - `residual_l2`: `|-lap phi + F'(phi)|`, re-evaluated on `phi_inf`.
    - `iterations`: Newton iterations or gradient-flow steps.
    - `flow_steps`: relaxation steps taken before Newton converged.
    - `method`: `newton` or `gradient_flow`.
    - `min_eigenvalue`: power-method estimate of the smallest
        eigenvalue of `-lap + F''(phi_inf)`.
    - `local_minimizer`: heuristic verdict, `min_eigenvalue > 0`.
    """

    phi_inf: CellField
    residual_l2: float
    iterations: int
    method: EquilibriumMethod
    min_eigenvalue: float = math.nan
    local_minimizer: bool = False
    flow_steps: int = 0


def _boundary_bc(params: PhysicalParams) -> BoundaryCondition:
    return BoundaryCondition.dirichlet(params.phi_boundary)


def stationary_residual(phi: CellField, eps: float) -> CellField:
    """Return `-lap phi + F'(phi)`."""
    return phi.with_values(
        -laplacian_cc(phi).values + potential_derivative(phi.values, eps),
    )


def jacobian(phi: CellField, eps: float) -> sp.csr_matrix:
    """Jacobian of the stationary residual, `-L + diag(F''(phi))`."""
    return (
        -cell_laplacian_matrix(phi.grid, "dirichlet")
        + sp.diags(potential_second_derivative(phi.values, eps).ravel())
    ).tocsr()


def _lowest_mode(grid: Grid) -> FloatArray:
    x, y = grid.cell_mesh()
    mode: Final = np.sin(np.pi * x / grid.lx) * np.sin(np.pi * y / grid.ly)
    return mode.ravel() / np.linalg.norm(mode)


def classify_minimizer(phi: CellField, eps: float) -> float:
    """Estimate the smallest eigenvalue of `-lap + F''(phi)`.

    Power iteration on `sigma I - J` with `sigma` a Gershgorin
    bound of the spectrum, started from the lowest Laplacian mode.
    A heuristic, not a proof of minimality.
    """
    matrix: Final = jacobian(phi, eps)
    sigma: Final = float(abs(matrix).sum(axis=1).max())
    vector = _lowest_mode(phi.grid)
    for _ in range(POWER_ITERATIONS):
        shifted = sigma * vector - matrix @ vector
        vector = shifted / np.linalg.norm(shifted)
    return float(vector @ (matrix @ vector))


def _finish(
    phi: CellField,
    params: PhysicalParams,
    iterations: int,
    method: EquilibriumMethod,
    flow_steps: int = 0,
) -> EquilibriumSolution:
    min_eigenvalue: Final = classify_minimizer(phi, params.eps)
    return EquilibriumSolution(
        phi_inf=phi,
        residual_l2=l2_norm(stationary_residual(phi, params.eps)),
        iterations=iterations,
        method=method,
        min_eigenvalue=min_eigenvalue,
        local_minimizer=min_eigenvalue > 0,
        flow_steps=flow_steps,
    )


def _newton(
    phi: CellField,
    eps: float,
    tol: float,
    max_iter: int,
) -> tuple[CellField, int, str | None]:
    """Damped Newton from `phi`, steps halved until `|R|` decreases.

    ### Returns:
    `(last iterate, iterations, failure)`, `failure` being `None`
    on convergence and the reason otherwise.
    """
    residual = stationary_residual(phi, eps)
    residual_norm = l2_norm(residual)

    for iteration in range(max_iter + 1):
        logger.debug(
            "newton iteration %d: residual %.3e",
            iteration,
            residual_norm,
        )
        if residual_norm <= tol:
            return phi, iteration, None
        if iteration == max_iter:
            break

        step = spsolve(
            jacobian(phi, eps).tocsc(),
            -residual.values.ravel(),
        ).reshape(phi.grid.cell_shape)
        if not np.all(np.isfinite(step)):
            return phi, iteration, "singular Jacobian"

        damping = 1.0
        for _ in range(MAX_HALVINGS):
            trial = phi.with_values(phi.values + damping * step)
            trial_residual = stationary_residual(trial, eps)
            trial_norm = l2_norm(trial_residual)
            if trial_norm < residual_norm:
                break
            damping *= 0.5
        else:
            return (
                phi,
                iteration,
                f"line search stagnated at residual {residual_norm:.3e}",
            )

        phi = trial
        residual = trial_residual
        residual_norm = trial_norm

    return (
        phi,
        max_iter,
        f"no convergence in {max_iter} iterations, residual "
        f"{residual_norm:.3e} > {tol:.3e}",
    )


def solve_stationary(
    phi_init: CellField,
    params: PhysicalParams,
    tol: float = 1e-8,
    max_iter: int = 100,
    max_flow_steps: int = 2000,
) -> EquilibriumSolution:
    """Solve the stationary problem by damped Newton.

    Steps are halved until `|R|` decreases.
    The bc of `phi_init` is replaced by `phi = phi_boundary`.
    When Newton fails from `phi_init`, the guess is relaxed by the
    Allen-Cahn flow at rest in chunks of `FLOW_CHUNK` steps of
    `max_flow_step(params)`, and Newton is restarted after each
    chunk with at most `RETRY_ITERATIONS` iterations.

    ### Parameters:
    - `phi_init`: initial guess.
    - `params`: model coefficients, `eps` and `phi_boundary` are used.
    - `tol`: target for `|R|` in the discrete L2 norm.
    - `max_iter`: Newton iteration cap.
    - `max_flow_steps`: cap on the relaxation steps, `0` disables
        the restarts.

    ### Returns:
    `EquilibriumSolution` with `residual_l2 <= tol`.

    ### Raises:
    - `EquilibriumNotFoundError`: on stagnation, divergence
        or the iteration cap of the last restart.
        Use `gradient_flow_oracle` then.
    """
    if not tol > 0:
        tol_err_msg: Final = "tol must be positive"
        raise ValueError(tol_err_msg)

    grid: Final = phi_init.grid
    phi = CellField(
        grid=grid,
        values=phi_init.values.copy(),
        bc=_boundary_bc(params),
    )
    candidate, iterations, failure = _newton(phi, params.eps, tol, max_iter)
    total_iterations = iterations
    flow_steps = 0
    rest: Final = MacVelocity.zeros(grid)
    flow_cfg: Final = ScalarStepConfig(
        dt=max_flow_step(params),
        helmholtz_tol=FLOW_HELMHOLTZ_TOL,
    )
    if failure is not None and max_flow_steps > 0:
        logger.info("newton failed from the initial guess: %s", failure)
    while failure is not None and flow_steps < max_flow_steps:
        chunk = min(FLOW_CHUNK, max_flow_steps - flow_steps)
        for _ in range(chunk):
            phi = phase_step(phi, rest, params, flow_cfg)
        flow_steps += chunk
        candidate, iterations, failure = _newton(
            phi,
            params.eps,
            tol,
            min(RETRY_ITERATIONS, max_iter),
        )
        total_iterations += iterations
        logger.debug(
            "newton restart after %d flow steps: %s",
            flow_steps,
            failure or "converged",
        )

    if failure is not None:
        newton_err_msg: Final = f"{failure}, try gradient_flow_oracle instead"
        raise EquilibriumNotFoundError(newton_err_msg, stage="newton")
    return _finish(
        candidate,
        params,
        total_iterations,
        "newton",
        flow_steps=flow_steps,
    )


def max_flow_step(params: PhysicalParams) -> float:
    """Largest admissible gradient-flow step, `eps^2 / (2 gamma)`."""
    return params.eps * params.eps / (2.0 * params.gamma)


def gradient_flow_oracle(
    phi_init: CellField,
    params: PhysicalParams,
    tol: float = 1e-8,
    dt_flow: float | None = None,
    max_steps: int = 100_000,
    stab: float = 2.0,
    helmholtz_tol: float = 1e-12,
) -> EquilibriumSolution:
    """Relax `phi_init` by the Allen-Cahn flow with the fluid at rest.

    Stops when `|phi' - phi| / dt_flow <= tol`. The elastic energy
    is checked to be non-increasing at every step.

    ### Parameters:
    - `phi_init`: initial phase field.
    - `params`: model coefficients.
    - `tol`: stopping threshold on the discrete time derivative.
    - `dt_flow`: flow step, defaults to `max_flow_step(params)`.
    - `max_steps`: step cap.
    - `stab`: stabilization constant of the phase step.
    - `helmholtz_tol`: linear-solve tolerance.

    ### Raises:
    - `SolverError`: if `dt_flow` exceeds `max_flow_step(params)`.
    - `EnergyMonotonicityError`: if the energy increases by more
        than `1e-12 max(E0, 1)`.
    - `EquilibriumNotFoundError`: on the step cap.
    """
    limit: Final = max_flow_step(params)
    step_size: Final = limit if dt_flow is None else dt_flow
    if not 0 < step_size <= limit:
        dt_err_msg: Final = (
            f"dt_flow={step_size} outside (0, eps^2/(2 gamma)={limit}]"
        )
        raise SolverError(dt_err_msg, stage="gradient_flow")

    grid: Final = phi_init.grid
    rest: Final = MacVelocity.zeros(grid)
    cfg: Final = ScalarStepConfig(
        dt=step_size,
        stab=stab,
        helmholtz_tol=helmholtz_tol,
    )
    phi = CellField(
        grid=grid,
        values=phi_init.values.copy(),
        bc=_boundary_bc(params),
    )
    energy = elastic_energy(phi, params.eps)
    slack: Final = MONOTONICITY_SLACK * max(energy, 1.0)

    for step in range(1, max_steps + 1):
        advanced = phase_step(phi, rest, params, cfg)
        new_energy = elastic_energy(advanced, params.eps)
        if new_energy > energy + slack:
            energy_err_msg = (
                f"energy increased at step {step}: "
                f"{energy:.17g} -> {new_energy:.17g}"
            )
            raise EnergyMonotonicityError(energy_err_msg)

        rate = l2_norm(
            advanced.with_values(advanced.values - phi.values),
        ) / step_size
        phi = advanced
        energy = new_energy
        if rate <= tol:
            logger.debug(
                "gradient flow converged in %d steps, energy %.6g",
                step,
                energy,
            )
            return _finish(phi, params, step, "gradient_flow")

    flow_cap_err_msg: Final = (
        f"gradient flow not stationary after {max_steps} steps"
    )
    raise EquilibriumNotFoundError(flow_cap_err_msg, stage="gradient_flow")
