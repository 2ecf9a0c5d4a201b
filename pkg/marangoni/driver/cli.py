"""Command-line entry point.

Exit codes: 0 success, 1 invalid input, 2 solver failure,
3 monitor violation in strict mode.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import TYPE_CHECKING, Any, Final

import msgspec

from marangoni.config import MarangoniConfig, RunConfig, load_config
from marangoni.driver.initial_conditions import initial_state
from marangoni.driver.mms import (
    DEFAULT_LADDER,
    DEFAULT_STEP_LADDER,
    MMS_NAMES,
    mms_convergence,
    mms_temporal_convergence,
)
from marangoni.driver.simulation import run_simulation
from marangoni.driver.snapshot import SnapshotHeader, write_snapshot
from marangoni.driver.trace import TRACE_COLUMNS, read_trace
from marangoni.energy.decay import fit_decay
from marangoni.equilibrium.stability import stability_experiment
from marangoni.equilibrium.stationary import (
    gradient_flow_oracle,
    solve_stationary,
)
from marangoni.exceptions import (
    EnergyMonotonicityError,
    EquilibriumNotFoundError,
    IsothermalModeError,
    MarangoniBaseError,
    MonitorViolationError,
    SolverError,
)
from marangoni.model.constitutive import energy_weights, smallness_threshold
from marangoni.monitors.checks import InitialSummary, smallness_verdict

if TYPE_CHECKING:
    from collections.abc import Sequence

    from marangoni.equilibrium.stationary import EquilibriumSolution

logger = logging.getLogger(__name__)

EXIT_OK: Final = 0
EXIT_INVALID: Final = 1
EXIT_SOLVER: Final = 2
EXIT_STRICT: Final = 3

DEFAULT_SCALES: Final = (0.02, 0.04, 0.08, 0.16, 0.32)


def _emit(payload: Any) -> None:
    sys.stdout.write(msgspec.json.encode(payload).decode() + "\n")


def _resolve_config(path: Path | None) -> RunConfig:
    if path is None:
        config = MarangoniConfig.config()
        logger.info("using %s config", MarangoniConfig.config_type)
        return config
    return load_config(path)


def _solve_equilibrium(
    cfg: RunConfig,
    method: str,
) -> EquilibriumSolution:
    params: Final = cfg.effective_params
    phi_init: Final = initial_state(cfg).phi
    if method == "gradient_flow":
        return gradient_flow_oracle(
            phi_init,
            params,
            tol=cfg.tolerances.newton_tol,
        )
    try:
        return solve_stationary(
            phi_init,
            params,
            tol=cfg.tolerances.newton_tol,
        )
    except EquilibriumNotFoundError as exc:
        logger.warning("%s; falling back to the gradient flow", exc)
        return gradient_flow_oracle(
            phi_init,
            params,
            tol=cfg.tolerances.newton_tol,
        )


def _cmd_run(args: argparse.Namespace) -> int:
    cfg: Final = _resolve_config(args.config)
    outcome: Final = run_simulation(
        cfg,
        strict=args.strict,
        clamp_phi=args.clamp_phi,
    )
    _emit(outcome)
    return EXIT_OK


def _cmd_mms(args: argparse.Namespace) -> int:
    cfg: Final = _resolve_config(args.config)
    if args.ladder == "time":
        _emit(
            mms_temporal_convergence(
                cfg,
                args.solution,
                cells=args.cells,
                step_counts=tuple(args.steps),
                t_end=args.t_end,
            ),
        )
        return EXIT_OK
    report: Final = mms_convergence(
        cfg,
        args.solution,
        resolutions=tuple(args.resolutions),
        t_end=args.t_end,
    )
    _emit(report)
    return EXIT_OK


def _cmd_equilibrium(args: argparse.Namespace) -> int:
    cfg: Final = _resolve_config(args.config)
    solution: Final = _solve_equilibrium(cfg, args.method)
    grid: Final = solution.phi_inf.grid
    write_snapshot(
        solution.phi_inf.values,
        SnapshotHeader(
            field_name="phi_inf",
            nx=grid.nx,
            ny=grid.ny,
            lx=grid.lx,
            ly=grid.ly,
            t=0.0,
        ),
        args.output,
    )
    _emit(
        {
            "method": solution.method,
            "iterations": solution.iterations,
            "flow_steps": solution.flow_steps,
            "residual_l2": solution.residual_l2,
            "min_eigenvalue": solution.min_eigenvalue,
            "local_minimizer": solution.local_minimizer,
            "snapshot": str(args.output),
        },
    )
    return EXIT_OK


def _cmd_stability(args: argparse.Namespace) -> int:
    cfg: Final = _resolve_config(args.config).replace(ic="flat")
    base: Final = _solve_equilibrium(cfg, "newton")
    reports: Final = [
        stability_experiment(base, scale, cfg) for scale in args.scales
    ]
    _emit(reports)
    return EXIT_OK


def _cmd_decay_fit(args: argparse.Namespace) -> int:
    trace: Final = read_trace(args.trace)
    fit: Final = fit_decay(
        trace["t"],
        trace[args.column],
        args.model,
        burn_fraction=args.burn_fraction,
    )
    _emit(fit)
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    cfg: Final = _resolve_config(args.config)
    params: Final = cfg.effective_params
    baseline: Final = InitialSummary.of(initial_state(cfg))
    try:
        threshold: float | None = smallness_threshold(params)
    except IsothermalModeError:
        threshold = None
    weights: Final = energy_weights(params)
    _emit(
        {
            "mode": cfg.mode,
            "n_steps": cfg.n_steps,
            "smallness_threshold": threshold,
            "phi0_linf": baseline.phi0_linf,
            "theta0_linf": baseline.theta0_linf,
            "smallness_ok": smallness_verdict(baseline, params),
            "zeta": weights.zeta,
            "omega": weights.omega,
        },
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    parser: Final = argparse.ArgumentParser(
        prog="marangoni",
        description="Thermocapillary phase-field flow simulator",
    )
    parser.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
    )
    commands: Final = parser.add_subparsers(dest="command", required=True)

    def with_config(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument(
            "--config",
            type=Path,
            default=None,
            help="config file, discovered in the working dir if omitted",
        )
        return sub

    run = with_config("run", "run a simulation")
    run.add_argument("--strict", action="store_true")
    run.add_argument(
        "--clamp-phi",
        action="store_true",
        help="clip phi to [-1, 1] after each step, departs from the scheme",
    )
    run.set_defaults(handler=_cmd_run)

    mms = with_config("mms", "manufactured-solution convergence orders")
    mms.add_argument("--solution", choices=MMS_NAMES, default="heat")
    mms.add_argument(
        "--resolutions",
        type=int,
        nargs="+",
        default=list(DEFAULT_LADDER),
    )
    mms.add_argument("--ladder", choices=["space", "time"], default="space")
    mms.add_argument("--cells", type=int, default=32)
    mms.add_argument(
        "--steps",
        type=int,
        nargs="+",
        default=list(DEFAULT_STEP_LADDER),
    )
    mms.add_argument("--t-end", type=float, default=0.05)
    mms.set_defaults(handler=_cmd_mms)

    equilibrium = with_config("equilibrium", "solve the stationary problem")
    equilibrium.add_argument(
        "--method",
        choices=["newton", "gradient_flow"],
        default="newton",
    )
    equilibrium.add_argument(
        "--output",
        type=Path,
        default=Path("phi_inf.txt"),
    )
    equilibrium.set_defaults(handler=_cmd_equilibrium)

    stability = with_config("stability", "perturbation runs around phi*")
    stability.add_argument(
        "--scales",
        type=float,
        nargs="+",
        default=list(DEFAULT_SCALES),
    )
    stability.set_defaults(handler=_cmd_stability)

    decay = commands.add_parser("decay-fit", help="fit a decay law")
    decay.add_argument("trace", type=Path)
    decay.add_argument(
        "--column",
        choices=TRACE_COLUMNS[2:],
        default="thermal_l2",
    )
    decay.add_argument(
        "--model",
        choices=["exponential", "algebraic"],
        default="exponential",
    )
    decay.add_argument("--burn-fraction", type=float, default=0.1)
    decay.set_defaults(handler=_cmd_decay_fit)

    check = with_config("check", "validate config and report thresholds")
    check.set_defaults(handler=_cmd_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run the command, map errors to exit codes."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # usage errors count as invalid input
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return int(args.handler(args))
    except MonitorViolationError as exc:
        logger.error("strict mode abort: %s", exc)  # noqa: TRY400
        return EXIT_STRICT
    except (SolverError, EnergyMonotonicityError) as exc:
        logger.error("solver failure: %s", exc)  # noqa: TRY400
        return EXIT_SOLVER
    except MarangoniBaseError as exc:
        logger.error("invalid input: %s", exc)  # noqa: TRY400
        return EXIT_INVALID
    except OSError as exc:
        logger.error("I/O error: %s", exc)  # noqa: TRY400
        return EXIT_INVALID
