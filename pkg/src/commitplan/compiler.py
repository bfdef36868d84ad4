"""Compile a STRIPS task into a commit task.

Every pending goal (a goal not initially true that some action can add) gets a
``<goal>--commit`` fluent.  Actions adding pending goals get one variant per
subset of those goals they may commit; actions deleting pending goals are
guarded by negative preconditions on the corresponding commit fluents.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Hashable, Iterable, Sequence, TypeVar

from .strips import Action, Task, validate_task

COMMIT_SUFFIX = "--commit"
DEFAULT_MAX_SUBSET_EXPONENT = 12

T = TypeVar("T", bound=Hashable)


class CompilationError(ValueError):
    pass


class GoalClass(enum.Enum):
    ADD_ONLY = "add_only"
    DEL_ONLY = "del_only"
    ADD_AND_DEL = "add_and_del"
    NEUTRAL = "neutral"


class Variant(enum.Enum):
    COMMIT = "COMMIT"
    FORCECOMMIT = "FORCECOMMIT"
    SIMULTANEOUS = "SIMULTANEOUS"
    UNCHANGED = "UNCHANGED"


@dataclass(frozen=True)
class CompilationOptions:
    max_subset_exponent: int = DEFAULT_MAX_SUBSET_EXPONENT


@dataclass(frozen=True)
class CompiledAction:
    action: Action
    base_action_id: int
    committed_subset: frozenset[int]  # pending-goal fluent ids
    variant: Variant


@dataclass(frozen=True)
class CompiledTask:
    task: Task
    base: Task
    commit_map: dict[int, int]  # pending goal id -> commit fluent id in ``task``
    provenance: tuple[CompiledAction, ...]
    pending_goals: frozenset[int]

    def variant_id(self, base_action_id: int, committed: frozenset[int]) -> int:
        """Compiled action id for ``base_action_id`` committing exactly ``committed``."""
        return self._variant_lookup[(base_action_id, frozenset(committed))]

    @property
    def _variant_lookup(self) -> dict:
        lookup = self.__dict__.get("_lookup")
        if lookup is None:
            lookup = {(p.base_action_id, p.committed_subset): i for i, p in enumerate(self.provenance)}
            object.__setattr__(self, "_lookup", lookup)
        return lookup

    def commit_fluent(self, goal: int) -> int:
        return self.commit_map[goal]


def pending_goals(task: Task) -> frozenset[int]:
    addable = set()
    for a in task.actions:
        addable |= a.add
    return frozenset(g for g in task.goal - task.init if g in addable)


def classify_action(action: Action, pending: Iterable[int]) -> GoalClass:
    pending = frozenset(pending)
    adds = bool(action.add & pending)
    dels = bool(action.delete & pending)
    if adds and dels:
        return GoalClass.ADD_AND_DEL
    if adds:
        return GoalClass.ADD_ONLY
    if dels:
        return GoalClass.DEL_ONLY
    return GoalClass.NEUTRAL


def commit_subsets(
    goals: Iterable[T],
    key: Callable[[T], object] | None = None,
    max_exponent: int = DEFAULT_MAX_SUBSET_EXPONENT,
    action_name: str | None = None,
) -> list[frozenset[T]]:
    """All subsets of ``goals``, ordered by size then lexicographically by ``key``."""
    members = sorted(goals, key=key)
    if len(members) > max_exponent:
        who = f"action {action_name}" if action_name else "goal set"
        raise CompilationError(
            f"{who} adds {len(members)} pending goals; 2^{len(members)} commit variants "
            f"exceed the cap of 2^{max_exponent}"
        )
    return [frozenset(c) for k in range(len(members) + 1) for c in combinations(members, k)]


@dataclass(frozen=True)
class SizeForecast:
    compiled_action_count: int
    max_subset_exponent: int


def forecast_size(task: Task) -> SizeForecast:
    pending = pending_goals(task)
    count = 0
    max_exp = 0
    for a in task.actions:
        cls = classify_action(a, pending)
        if cls in (GoalClass.ADD_ONLY, GoalClass.ADD_AND_DEL):
            n = len(a.add & pending)
            max_exp = max(max_exp, n)
            count += 2**n
        else:
            count += 1
    return SizeForecast(count, max_exp)


def commit_name(goal_name: str) -> str:
    return goal_name + COMMIT_SUFFIX


def _variant_name(base: str, variant: Variant, goal_names: Sequence[str]) -> str:
    if variant is Variant.UNCHANGED or (variant is Variant.COMMIT and not goal_names):
        return base
    if variant is Variant.FORCECOMMIT:
        return base + "--forcecommit"
    tag = "--commit" if variant is Variant.COMMIT else "--sim"
    return base + tag + "".join("--" + g for g in goal_names)


def compile_task(task: Task, options: CompilationOptions | None = None) -> CompiledTask:
    options = options or CompilationOptions()
    problems = validate_task(task)
    if problems:
        raise CompilationError("invalid task: " + "; ".join(problems))

    pending = pending_goals(task)
    n = len(task.fluents)
    commit_map: dict[int, int] = {}
    fluents = list(task.fluents)
    for k, g in enumerate(sorted(pending)):
        cname = commit_name(task.fluents[g])
        if task.has_fluent(cname):
            raise CompilationError(f"commit fluent name {cname!r} collides with an existing fluent")
        commit_map[g] = n + k
        fluents.append(cname)

    def gname(g: int) -> str:
        return task.fluents[g]

    def commits(goals: Iterable[int]) -> frozenset[int]:
        return frozenset(commit_map[g] for g in goals)

    out: list[CompiledAction] = []
    for aid, a in enumerate(task.actions):
        cls = classify_action(a, pending)
        if cls is GoalClass.NEUTRAL:
            out.append(CompiledAction(a, aid, frozenset(), Variant.UNCHANGED))
        elif cls is GoalClass.DEL_ONLY:
            guarded = commits(a.delete & pending)
            act = Action(
                _variant_name(a.name, Variant.FORCECOMMIT, ()),
                a.pre_pos, a.pre_neg | guarded, a.add, a.delete, a.cost,
            )
            out.append(CompiledAction(act, aid, frozenset(), Variant.FORCECOMMIT))
        else:
            variant = Variant.COMMIT if cls is GoalClass.ADD_ONLY else Variant.SIMULTANEOUS
            guarded = commits(a.delete & pending)
            for subset in commit_subsets(a.add & pending, key=gname, max_exponent=options.max_subset_exponent, action_name=a.name):
                c = commits(subset)
                act = Action(
                    _variant_name(a.name, variant, sorted(gname(g) for g in subset)),
                    a.pre_pos, a.pre_neg | c | guarded, a.add | c, a.delete, a.cost,
                )
                out.append(CompiledAction(act, aid, subset, variant))

    seen: set[str] = set()
    for p in out:
        if p.action.name in seen:
            raise CompilationError(f"compiled action name {p.action.name!r} is not unique")
        seen.add(p.action.name)

    goal_c = (task.goal - pending) | commits(pending)
    compiled = Task(tuple(fluents), tuple(p.action for p in out), task.init, goal_c, name=task.name)
    return CompiledTask(compiled, task, commit_map, tuple(out), pending)
