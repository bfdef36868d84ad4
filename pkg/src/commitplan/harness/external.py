"""Run an external planner on emitted PDDL and re-validate whatever it returns."""

from __future__ import annotations

import glob
import os
import resource
import shlex
import signal
import subprocess
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from ..pddl_io import emit_pddl, parse_plan_file
from ..search import Outcome, SearchLimits, SearchResult, SearchStats
from ..strips import Task, validate_plan

PLACEHOLDERS = ("{domain}", "{problem}", "{plan_out}")


class ExternalPlannerError(RuntimeError):
    pass


class ExternalPlanInvalid(ExternalPlannerError):
    """The planner returned a plan that fails internal validation."""


@dataclass(frozen=True)
class ExternalPlannerConfig:
    """``command`` is a shell-style template; placeholders are substituted per
    argument after splitting, so paths containing spaces stay intact.

    ``plan_file`` may contain glob characters (e.g. ``{plan_out}*`` for planners
    writing numbered anytime plans); the lexicographically last match is used.
    """

    command: str
    expected_exit_codes: tuple[int, ...] = (0,)
    unsolvable_exit_codes: tuple[int, ...] = ()
    plan_file: str = "{plan_out}"
    memory_limit_mb: int | None = None

    def __post_init__(self):
        missing = [p for p in PLACEHOLDERS if p not in self.command]
        if missing:
            raise ValueError(f"planner command template lacks {', '.join(missing)}")


def _limit_memory(mb: int | None):
    if mb is None:
        return None

    def apply():
        limit = mb * 1024**2
        resource.setrlimit(resource.RLIMIT_AS, (limit, limit))
        resource.setrlimit(resource.RLIMIT_CORE, (0, 0))

    return apply


def external_solve(
    config: ExternalPlannerConfig,
    task: Task,
    limits: SearchLimits | None = None,
    workdir: str | os.PathLike | None = None,
) -> SearchResult:
    limits = limits or SearchLimits()
    with tempfile.TemporaryDirectory(prefix="commitplan-", dir=workdir) as tmp:
        tmp = Path(tmp)
        pair = emit_pddl(task)
        domain, problem, plan_out = tmp / "domain.pddl", tmp / "problem.pddl", tmp / "plan.txt"
        domain.write_text(pair.domain_text, encoding="utf-8", newline="\n")
        problem.write_text(pair.problem_text, encoding="utf-8", newline="\n")
        values = {
            "domain": str(domain),
            "problem": str(problem),
            "plan_out": str(plan_out),
            "time_limit": str(int(limits.time_limit)) if limits.time_limit else "",
        }
        argv = [tok.format(**values) for tok in shlex.split(config.command)]

        start = time.perf_counter()
        proc = subprocess.Popen(
            argv, cwd=tmp, stdout=subprocess.PIPE, stderr=subprocess.PIPE,
            start_new_session=True, preexec_fn=_limit_memory(config.memory_limit_mb),
        )
        try:
            out, err = proc.communicate(timeout=limits.time_limit)
        except subprocess.TimeoutExpired:
            os.killpg(proc.pid, signal.SIGKILL)
            proc.communicate()
            stats = SearchStats(wall_time=time.perf_counter() - start)
            return SearchResult(Outcome.LIMIT, stats=stats, limit="time")
        stats = SearchStats(wall_time=time.perf_counter() - start)

        if proc.returncode in config.unsolvable_exit_codes:
            return SearchResult(Outcome.UNSOLVABLE, stats=stats)
        if proc.returncode not in config.expected_exit_codes:
            tail = err.decode(errors="replace").strip().splitlines()[-5:]
            raise ExternalPlannerError(f"planner exited with code {proc.returncode}: {' | '.join(tail)}")

        matches = sorted(glob.glob(config.plan_file.format(**values)))
        if not matches:
            raise ExternalPlannerError("planner exited normally but wrote no plan file")
        parsed = parse_plan_file(Path(matches[-1]).read_text(encoding="utf-8"))

    origin = pair.names.action_origin
    try:
        plan = tuple(task.action_id(origin.get(n, n)) for n in parsed.actions)
    except KeyError as e:
        raise ExternalPlanInvalid(f"plan names unknown action {e.args[0]!r}") from None
    check = validate_plan(task, plan)
    if not check.valid:
        raise ExternalPlanInvalid(f"planner returned an invalid plan: {check.failure.message}")
    if parsed.declared_cost is not None and parsed.declared_cost != check.cost:
        raise ExternalPlanInvalid(
            f"declared plan cost {parsed.declared_cost} differs from recomputed cost {check.cost}"
        )
    return SearchResult(Outcome.SOLVED, plan, check.cost, stats)
