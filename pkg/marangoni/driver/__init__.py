from marangoni.driver.initial_conditions import initial_state
from marangoni.driver.mms import MmsReport, mms_convergence
from marangoni.driver.simulation import RunOutcome, run_simulation
from marangoni.driver.snapshot import (
    SnapshotHeader,
    read_snapshot,
    write_snapshot,
)
from marangoni.driver.trace import TRACE_COLUMNS, TraceWriter, read_trace

__all__ = [
    "TRACE_COLUMNS",
    "MmsReport",
    "RunOutcome",
    "SnapshotHeader",
    "TraceWriter",
    "initial_state",
    "mms_convergence",
    "read_snapshot",
    "read_trace",
    "run_simulation",
    "write_snapshot",
]
