from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from typing_extensions import Self

    from marangoni.solvers.linear import PoissonSolveReport


class MarangoniBaseError(Exception):
    """Base error for all errors."""


class ConfigError(MarangoniBaseError):
    """Base error for all config-related errors."""


class ConfigParseError(ConfigError):
    """If config file cannot be parsed.

    Message always contains the line number.
    """


class ConfigKeyError(ConfigError):
    """If config file contains an unknown key."""


class ConfigValidationError(ConfigError):
    """If config value doesn't pass validation."""


class OutputPathError(ConfigError):
    """If output path isn't writable."""


class GridError(MarangoniBaseError):
    """Error for invalid grids or fields living on different grids."""


class SolverError(MarangoniBaseError):
    """Base error for numerical solver failures.

    ### Parameters:
    - `stage`: the step stage that failed,
        for example `heat`, `phase`, `momentum`, `pressure`.
    - `report`: report of the failed linear solve, if any.
    """

    def __init__(
        self: Self,
        message: str,
        stage: str = "",
        report: PoissonSolveReport | None = None,
    ) -> None:
        super().__init__(f"[{stage}] {message}" if stage else message)
        self.stage = stage
        self.report = report


class LinearSolveError(SolverError):
    """Conjugate gradient iteration didn't converge."""


class EquilibriumNotFoundError(SolverError):
    """Newton iteration diverged or stagnated."""


class RegimeError(MarangoniBaseError):
    """Base error for physical-regime related errors."""


class IsothermalModeError(RegimeError):
    """Smallness condition is vacuous because `b` is zero."""


class EnergyError(MarangoniBaseError):
    """Base error for energy ledger errors."""


class DecayFitError(EnergyError):
    """Trace cannot be fitted with a decay law."""


class RecordMismatchError(EnergyError):
    """Energy records are not consecutive records of one run."""


class EnergyMonotonicityError(EnergyError):
    """Energy increased along a flow that must dissipate it."""


class SnapshotError(MarangoniBaseError):
    """Base error for snapshot file errors."""


class SnapshotMagicError(SnapshotError):
    """Snapshot header doesn't start with the magic string."""


class SnapshotShapeError(SnapshotError):
    """Snapshot body doesn't match the header shape."""


class SnapshotValueError(SnapshotError):
    """Snapshot contains a non-numeric token."""


class MonitorViolationError(MarangoniBaseError):
    """Monitor recorded a violation in strict mode."""
