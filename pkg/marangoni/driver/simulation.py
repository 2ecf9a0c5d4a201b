"""Time loop of one run: stepping, checks, trace and snapshots."""
from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import TYPE_CHECKING, Final

import msgspec
import numpy as np

from marangoni.config import ensure_output_paths
from marangoni.driver.initial_conditions import initial_state
from marangoni.driver.snapshot import SnapshotHeader, write_snapshot
from marangoni.driver.trace import TraceWriter
from marangoni.energy.ledger import (
    isothermal_residual,
    total_energy,
    unweighted_dissipation,
)
from marangoni.exceptions import IsothermalModeError, MonitorViolationError
from marangoni.grid.operators import cell_velocity
from marangoni.model.constitutive import (
    dissipation_bound,
    energy_weights,
    smallness_threshold,
)
from marangoni.monitors.checks import (
    InitialSummary,
    MonitorReport,
    MonitorTolerances,
    Violation,
    check_state,
    smallness_verdict,
)
from marangoni.solvers.coupled import NO_SOURCES, SourceTerms, mode_step

if TYPE_CHECKING:
    from marangoni.config import RunConfig
    from marangoni.marangoni_types import FloatArray
    from marangoni.model.params import PhysicalParams
    from marangoni.state import State

logger = logging.getLogger(__name__)

ENERGY_SLACK: Final = 1e-8


class RunOutcome(msgspec.Struct, frozen=True):
    """Summary of a finished run.

    - `energy_increases`: steps where the total energy grew
        beyond `1e-8 E(0) + 10 helmholtz_tol`.
    - `diss_integral`: running integral of
        `|grad u|^2 + |lap phi - F'|^2 + |lap theta|^2`.
    - `dissipation_bound`: `E(0) max(2/nu, 1/(a lam0 gamma), 1/(k zeta))`.
        A step whose `diss_integral` exceeds it counts as a violation.
    """

    steps: int
    t_final: float
    violations: int
    smallness_ok: bool
    energy_increases: int
    diss_integral: float
    dissipation_bound: float
    trace_path: str
    snapshots: list[str] = msgspec.field(default_factory=list)


def snapshot_fields(state: State) -> dict[str, FloatArray]:
    """Cell-centered arrays written per snapshot.

    Velocity components are averaged from faces to cell centers.
    """
    u_c, v_c = cell_velocity(state.velocity)
    return {
        "phi": state.phi.values,
        "theta": state.theta.values,
        "p": state.pressure.values,
        "u": u_c,
        "v": v_c,
    }


def write_snapshots(state: State, step: int, directory: Path) -> list[str]:
    """Write every field of `state`, return the written paths."""
    grid: Final = state.grid
    paths: Final = []
    for name, values in snapshot_fields(state).items():
        path = directory / f"{name}_{step:08d}.txt"
        write_snapshot(
            values,
            SnapshotHeader(
                field_name=name,
                nx=grid.nx,
                ny=grid.ny,
                lx=grid.lx,
                ly=grid.ly,
                t=state.t,
            ),
            path,
        )
        paths.append(str(path))
    return paths


def report_smallness(state: State, params: PhysicalParams) -> None:
    """Log the smallness verdict of the initial data."""
    baseline: Final = InitialSummary.of(state)
    try:
        threshold: Final = smallness_threshold(params)
    except IsothermalModeError as exc:
        logger.info("smallness check: %s", exc)
        return
    verdict: Final = smallness_verdict(baseline, params)
    logger.info(
        "smallness check: |theta0|_inf=%.6g, threshold=%.6g "
        "(c1_estimate=%.3g), |phi0|_inf=%.6g: %s",
        baseline.theta0_linf,
        threshold,
        params.c1_estimate,
        baseline.phi0_linf,
        "satisfied" if verdict else "NOT satisfied",
    )


def _screen(
    step: int,
    t: float,
    report: MonitorReport,
    *,
    strict: bool,
) -> int:
    """Log the violations of `report` and return their count.

    ### Raises:
    - `MonitorViolationError`: in strict mode, on any violation.
    """
    if not report.violations:
        return 0
    if strict:
        strict_err_msg: Final = f"step {step}, t={t:.6g}: {report.violations}"
        raise MonitorViolationError(strict_err_msg)
    logger.warning(
        "step %d, t=%.6g: %d monitor violations: %s",
        step,
        t,
        len(report.violations),
        ", ".join(v.check for v in report.violations),
    )
    return len(report.violations)


def run_simulation(
    cfg: RunConfig,
    *,
    strict: bool = False,
    clamp_phi: bool = False,
    sources: SourceTerms = NO_SOURCES,
) -> RunOutcome:
    """Run the configured experiment to `t_end`.

    Writes one trace row per step, the initial row included,
    and snapshots at step zero, every `snapshot_every` steps
    and at the end.

    ### Parameters:
    - `cfg`: validated run configuration.
    - `strict`: abort on the first monitor violation.
    - `clamp_phi`: clip `phi` to `[-1, 1]` after every step.
        Departs from the scheme, off by default.
    - `sources`: optional volume sources.

    ### Returns:
    `RunOutcome` with counts and written paths.

    ### Raises:
    - `OutputPathError`: output paths not writable.
    - `SolverError`: tagged with the failing stage.
    - `MonitorViolationError`: in strict mode.
    """
    ensure_output_paths(cfg)
    params: Final = cfg.effective_params
    weights: Final = energy_weights(params)
    step_cfg: Final = cfg.step_config()
    tolerances: Final = MonitorTolerances.from_solver_tolerances(
        cfg.tolerances.poisson_tol,
        cfg.tolerances.helmholtz_tol,
        cfg.tolerances.tol_phi,
    )
    snapshot_dir: Final = Path(cfg.output.snapshot_dir)

    state = initial_state(cfg)
    baseline: Final = InitialSummary.of(state)
    report_smallness(state, params)

    record = total_energy(state, weights, params)
    report = check_state(state, baseline, params, tolerances, cfg.dt)
    initial_energy: Final = record.total
    energy_slack: Final = (
        ENERGY_SLACK * initial_energy + 10.0 * cfg.tolerances.helmholtz_tol
    )
    bound: Final = dissipation_bound(initial_energy, params, weights)
    # forced runs carry no dissipation bound
    check_bound: Final = sources is NO_SOURCES
    diss_integral = 0.0
    violations = 0
    energy_increases = 0
    snapshots: Final = write_snapshots(state, 0, snapshot_dir)
    n_steps: Final = cfg.n_steps
    logger.info(
        "running %s mode on %dx%d, %d steps of dt=%.3g",
        cfg.mode,
        state.grid.nx,
        state.grid.ny,
        n_steps,
        cfg.dt,
    )

    with TraceWriter(cfg.output.trace_path) as trace:
        trace.write(0, record, report, math.nan, diss_integral)
        violations += _screen(0, state.t, report, strict=strict)
        for step in range(1, n_steps + 1):
            state = mode_step(state, params, step_cfg, cfg.mode, sources)
            if clamp_phi:
                state = state.replace(
                    phi=state.phi.with_values(
                        np.clip(state.phi.values, -1.0, 1.0),
                    ),
                )

            new_record = total_energy(state, weights, params)
            report = check_state(state, baseline, params, tolerances, cfg.dt)
            diss_integral += cfg.dt * unweighted_dissipation(
                new_record,
                params,
                weights,
            )
            if check_bound and diss_integral > bound:
                report = msgspec.structs.replace(
                    report,
                    violations=[
                        *report.violations,
                        Violation("dissipation_bound", diss_integral, bound),
                    ],
                )
            residual = (
                isothermal_residual(record, new_record)
                if cfg.mode == "isothermal"
                else math.nan
            )
            if new_record.total > record.total + energy_slack:
                energy_increases += 1
            record = new_record
            trace.write(step, record, report, residual, diss_integral)

            violations += _screen(step, state.t, report, strict=strict)

            every = cfg.output.snapshot_every
            if (every and step % every == 0) or step == n_steps:
                snapshots.extend(
                    write_snapshots(state, step, snapshot_dir),
                )

    logger.info(
        "finished at t=%.6g: %d violations, %d energy increases",
        state.t,
        violations,
        energy_increases,
    )
    return RunOutcome(
        steps=n_steps,
        t_final=state.t,
        violations=violations,
        smallness_ok=report.smallness_ok,
        energy_increases=energy_increases,
        diss_integral=diss_integral,
        dissipation_bound=bound,
        trace_path=str(cfg.output.trace_path),
        snapshots=snapshots,
    )
