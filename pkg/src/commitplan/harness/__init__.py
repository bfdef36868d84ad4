from .bench import (
    CSV_HEADER,
    BenchRecord,
    BenchSummary,
    PlannerSpec,
    SuiteTask,
    aggregate,
    discover_suite,
    read_csv,
    run_benchmark,
    run_task,
    summary_table,
)
from .external import ExternalPlanInvalid, ExternalPlannerConfig, ExternalPlannerError, external_solve
from .metrics import agl_score, sat_score

__all__ = [
    "CSV_HEADER", "BenchRecord", "BenchSummary", "ExternalPlanInvalid", "ExternalPlannerConfig",
    "ExternalPlannerError", "PlannerSpec", "SuiteTask", "aggregate", "agl_score", "discover_suite",
    "external_solve", "read_csv", "run_benchmark", "run_task", "sat_score", "summary_table",
]
