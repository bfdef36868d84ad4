"""Plan translation between a task and its commit compilation, and goal attribution."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .compiler import CompiledTask, GoalClass, Variant, classify_action
from .strips import Plan, Task, validate_plan

REPORT_FORMAT = "achievement-report/1"
MAPPING_FORMAT = "plan-mapping/1"


class Initial(enum.Enum):
    INIT = "INIT"

    def __repr__(self):
        return "INIT"


INIT = Initial.INIT


class InvalidPlanError(ValueError):
    pass


class CorruptProvenanceError(ValueError):
    pass


class AttributionError(RuntimeError):
    pass


@dataclass(frozen=True)
class AchievementReport:
    """Per goal: the permanent achiever and every earlier achievement later undone.

    Intervals are ``(start, end)`` plan indices meaning the goal became true by
    action ``start`` (or held initially, ``INIT``) and was deleted by action ``end``.
    """

    task: Task
    achievers: dict[int, int | Initial]
    transient: dict[int, list[tuple[int | Initial, int]]]

    def achiever_of(self, goal_name: str) -> int | Initial:
        return self.achievers[self.task.fluent_id(goal_name)]

    def to_json(self, plan: Sequence[int] | None = None) -> dict:
        def enc(v):
            return v.value if isinstance(v, Initial) else v

        goals = []
        for g in sorted(self.achievers):
            goals.append({
                "goal": self.task.fluents[g],
                "achiever": enc(self.achievers[g]),
                "achiever_action": (
                    self.task.actions[plan[self.achievers[g]]].name
                    if plan is not None and isinstance(self.achievers[g], int) else None
                ),
                "transient": [[enc(a), b] for a, b in self.transient[g]],
            })
        return {"format": REPORT_FORMAT, "goals": goals}


def permanent_achievers(task: Task, plan: Sequence[int]) -> AchievementReport:
    check = validate_plan(task, plan)
    if not check.valid:
        raise InvalidPlanError(check.failure.message)
    states = check.trace.states
    achievers: dict[int, int | Initial] = {}
    transient: dict[int, list] = {}
    for g in sorted(task.goal):
        intervals = []
        start: int | Initial | None = INIT if states[0] >> g & 1 else None
        for i in range(len(plan)):
            before = states[i] >> g & 1
            after = states[i + 1] >> g & 1
            if not before and after:
                start = i
            elif before and not after:
                intervals.append((start, i))
                start = None
        achievers[g] = start
        transient[g] = intervals
    return AchievementReport(task, achievers, transient)


@dataclass(frozen=True)
class StepMapping:
    source_index: int
    target_index: int
    action: int
    variant: Variant
    committed: frozenset[int]


@dataclass(frozen=True)
class MappingResult:
    plan: Plan
    steps: tuple[StepMapping, ...]
    commit_steps: dict[int, int] = field(default_factory=dict)  # forward maps only

    def to_json(self, source: Task, target: Task, direction: str) -> dict:
        # committed goal ids refer to the base task in both directions
        base = source if direction == "forward" else target
        return {
            "format": MAPPING_FORMAT,
            "direction": direction,
            "plan": target.plan_names(self.plan),
            "cost": target.plan_cost(self.plan),
            "steps": [
                {
                    "source": s.source_index,
                    "target": s.target_index,
                    "action": target.actions[s.action].name,
                    "variant": s.variant.value,
                    "committed": sorted(base.fluents[g] for g in s.committed),
                }
                for s in self.steps
            ],
            "commit_steps": {base.fluents[g]: k for g, k in sorted(self.commit_steps.items())},
        }


def forward_map(task: Task, plan: Sequence[int], compiled: CompiledTask) -> MappingResult:
    """Translate a plan for ``task`` into an equal-cost plan for the commit task.

    Each goal-adding occurrence commits exactly the pending goals it achieves
    permanently; goal-deleting actions use their guarded variant.
    """
    report = permanent_achievers(task, plan)
    pending = compiled.pending_goals
    committed_at: dict[int, set[int]] = {}
    for g in pending:
        committed_at.setdefault(report.achievers[g], set()).add(g)

    out = []
    steps = []
    for k, aid in enumerate(plan):
        subset = frozenset(committed_at.get(k, ()))
        cid = compiled.variant_id(aid, subset)
        out.append(cid)
        steps.append(StepMapping(k, k, cid, compiled.provenance[cid].variant, subset))
    mapped = tuple(out)

    check = validate_plan(compiled.task, mapped)
    if not check.valid:
        raise AttributionError(f"forward-mapped plan fails on the commit task: {check.failure.message}")
    commit_steps = {g: report.achievers[g] for g in sorted(pending)}
    return MappingResult(mapped, tuple(steps), commit_steps)


def backward_map(compiled: CompiledTask, plan_c: Sequence[int]) -> MappingResult:
    out = []
    steps = []
    for k, cid in enumerate(plan_c):
        if not 0 <= cid < len(compiled.provenance):
            raise CorruptProvenanceError(f"compiled action id {cid} has no provenance record")
        p = compiled.provenance[cid]
        out.append(p.base_action_id)
        steps.append(StepMapping(k, k, p.base_action_id, p.variant, p.committed_subset))
    return MappingResult(tuple(out), tuple(steps))


def commit_achievers(compiled: CompiledTask, plan_c: Sequence[int]) -> dict[int, int]:
    """Map each pending goal to the index of the step that committed it."""
    check = validate_plan(compiled.task, plan_c)
    if not check.valid:
        raise InvalidPlanError(check.failure.message)
    found: dict[int, int] = {}
    for k, cid in enumerate(plan_c):
        for g in compiled.provenance[cid].committed_subset:
            if g in found:
                raise AttributionError(
                    f"goal {compiled.base.fluents[g]} committed twice (steps {found[g]} and {k})"
                )
            found[g] = k
    missing = compiled.pending_goals - found.keys()
    if missing:
        names = ", ".join(sorted(compiled.base.fluents[g] for g in missing))
        raise AttributionError(f"goal-reaching plan never commits: {names}")
    return dict(sorted(found.items()))


def goal_classes(compiled: CompiledTask) -> list[GoalClass]:
    return [classify_action(a, compiled.pending_goals) for a in compiled.base.actions]
