"""Versioned CSV trace, one row per time step."""
from __future__ import annotations

import csv
from pathlib import Path
from typing import TYPE_CHECKING, Final, TextIO

import numpy as np

from marangoni.driver.snapshot import format_float
from marangoni.exceptions import SnapshotMagicError, SnapshotShapeError

if TYPE_CHECKING:
    from types import TracebackType

    from typing_extensions import Self

    from marangoni.energy.ledger import EnergyRecord
    from marangoni.marangoni_types import FloatArray
    from marangoni.monitors.checks import MonitorReport

TRACE_MAGIC: Final = "# MARANGONI-TRACE v1"

RECORD_COLUMNS: Final = (
    "kinetic",
    "elastic_grad",
    "elastic_bulk",
    "thermal_grad",
    "thermal_l2",
    "total",
    "diss_visc",
    "diss_phase",
    "diss_heat",
    "a1",
    "a2",
    "max_abs_phi",
    "max_abs_theta",
    "div_u_inf",
)

TRACE_COLUMNS: Final = (
    "step",
    "t",
    *RECORD_COLUMNS,
    "cfl",
    "lambda_min",
    "smallness_ok",
    "violations",
    "isothermal_residual",
    "diss_integral",
)


def trace_row(
    step: int,
    record: EnergyRecord,
    report: MonitorReport,
    isothermal_residual: float,
    diss_integral: float,
) -> list[str]:
    """Render one trace row in `TRACE_COLUMNS` order."""
    return [
        str(step),
        format_float(record.t),
        *(format_float(getattr(record, name)) for name in RECORD_COLUMNS),
        format_float(report.cfl),
        format_float(report.lambda_min),
        str(int(report.smallness_ok)),
        str(len(report.violations)),
        format_float(isothermal_residual),
        format_float(diss_integral),
    ]


class TraceWriter:
    """Write trace rows to a file.

    Usage:
    ```
    with TraceWriter("trace.csv") as trace:
        trace.write(0, record, report, nan, 0.0)
    ```
    """

    def __init__(self: Self, path: str | Path) -> None:
        self.path = Path(path)
        self._stream: TextIO | None = None
        self.rows_written = 0

    def __enter__(self: Self) -> Self:
        self._stream = self.path.open("w", encoding="utf-8", newline="")
        self._stream.write(TRACE_MAGIC + "\n")
        self._writer = csv.writer(self._stream, lineterminator="\n")
        self._writer.writerow(TRACE_COLUMNS)
        return self

    def __exit__(
        self: Self,
        exc_type: type[BaseException] | None,
        exc_value: BaseException | None,
        traceback: TracebackType | None,
    ) -> None:
        if self._stream is not None:
            self._stream.close()
            self._stream = None

    def write(
        self: Self,
        step: int,
        record: EnergyRecord,
        report: MonitorReport,
        isothermal_residual: float,
        diss_integral: float,
    ) -> None:
        self._writer.writerow(
            trace_row(
                step,
                record,
                report,
                isothermal_residual,
                diss_integral,
            ),
        )
        self.rows_written += 1


def read_trace(path: str | Path) -> dict[str, FloatArray]:
    """Read a trace into one float array per column.

    ### Raises:
    - `SnapshotMagicError`: first line isn't the trace magic.
    - `SnapshotShapeError`: header doesn't list `TRACE_COLUMNS`.
    """
    with Path(path).open(encoding="utf-8", newline="") as stream:
        magic: Final = stream.readline().rstrip("\n")
        if magic != TRACE_MAGIC:
            magic_err_msg: Final = (
                f"line 1: expected {TRACE_MAGIC!r}, got {magic!r}"
            )
            raise SnapshotMagicError(magic_err_msg)
        rows: Final = list(csv.reader(stream))

    if not rows or tuple(rows[0]) != TRACE_COLUMNS:
        header_err_msg: Final = "line 2: trace header doesn't match schema"
        raise SnapshotShapeError(header_err_msg)
    body: Final = np.array(rows[1:], dtype=np.float64).reshape(
        -1,
        len(TRACE_COLUMNS),
    )
    return {name: body[:, index] for index, name in enumerate(TRACE_COLUMNS)}
