from marangoni.monitors.checks import (
    InitialSummary,
    MonitorReport,
    MonitorTolerances,
    Violation,
    cfl_number,
    check_state,
)

__all__ = [
    "InitialSummary",
    "MonitorReport",
    "MonitorTolerances",
    "Violation",
    "cfl_number",
    "check_state",
]
