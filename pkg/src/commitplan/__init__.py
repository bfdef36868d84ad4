"""Commit-action compilation for STRIPS planning tasks.

Compiling a task adds commit fluents for its pending goals.  Plans of the
compiled task then mark, at planning time, the step that permanently achieves
each goal.
"""

from .compiler import (
    CompilationError,
    CompilationOptions,
    CompiledAction,
    CompiledTask,
    GoalClass,
    Variant,
    classify_action,
    commit_subsets,
    compile_task,
    forecast_size,
    pending_goals,
)
from .plan_map import INIT, backward_map, commit_achievers, forward_map, permanent_achievers
from .search import Outcome, SearchLimits, SearchResult, enumerate_reachable, solve_greedy, solve_optimal
from .heuristics import h_add, h_max
from .strips import (
    Action,
    InapplicableActionError,
    Task,
    apply_sequence,
    is_applicable,
    make_task,
    progress,
    validate_plan,
    validate_task,
)
from .taskgen import GenParams, generate

__version__ = "0.1.0"
