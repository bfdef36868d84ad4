"""Grounded STRIPS tasks and their execution semantics.

States are Python ints used as bitsets over the task's dense fluent indexing:
fluent ``i`` is true in state ``s`` iff ``s >> i & 1``.  Plans are tuples of
action ids, where an action id is the action's position in ``Task.actions``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

State = int
Plan = tuple[int, ...]

DEFAULT_COST = 1


def mask_of(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def ids_of(state: State) -> frozenset[int]:
    out = []
    i = 0
    while state:
        if state & 1:
            out.append(i)
        state >>= 1
        i += 1
    return frozenset(out)


@dataclass(frozen=True)
class Action:
    name: str
    pre_pos: frozenset[int] = frozenset()
    pre_neg: frozenset[int] = frozenset()
    add: frozenset[int] = frozenset()
    delete: frozenset[int] = frozenset()
    cost: int = DEFAULT_COST

    def __post_init__(self):
        for attr in ("pre_pos", "pre_neg", "add", "delete"):
            object.__setattr__(self, attr, frozenset(getattr(self, attr)))

    # Masks are derived lazily; tasks failing validation may hold ids that
    # cannot be turned into bit positions.
    @property
    def pre_pos_mask(self) -> int:
        return _cached_mask(self, "_pre_pos_mask", self.pre_pos)

    @property
    def pre_neg_mask(self) -> int:
        return _cached_mask(self, "_pre_neg_mask", self.pre_neg)

    @property
    def add_mask(self) -> int:
        return _cached_mask(self, "_add_mask", self.add)

    @property
    def del_mask(self) -> int:
        return _cached_mask(self, "_del_mask", self.delete)


def _cached_mask(action: Action, slot: str, ids: frozenset[int]) -> int:
    cached = action.__dict__.get(slot)
    if cached is None:
        cached = mask_of(ids)
        object.__setattr__(action, slot, cached)
    return cached


@dataclass(frozen=True)
class Task:
    """A grounded STRIPS task.  ``fluents[i]`` is the name of fluent ``i``."""

    fluents: tuple[str, ...]
    actions: tuple[Action, ...]
    init: frozenset[int]
    goal: frozenset[int]
    name: str = "task"
    _fluent_index: dict = field(default=None, init=False, repr=False, compare=False)
    _action_index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "fluents", tuple(self.fluents))
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "init", frozenset(self.init))
        object.__setattr__(self, "goal", frozenset(self.goal))
        object.__setattr__(self, "_fluent_index", {n: i for i, n in enumerate(self.fluents)})
        object.__setattr__(self, "_action_index", {a.name: i for i, a in enumerate(self.actions)})

    @property
    def init_state(self) -> State:
        return mask_of(self.init)

    @property
    def goal_mask(self) -> int:
        return mask_of(self.goal)

    def fluent_id(self, name: str) -> int:
        return self._fluent_index[name]

    def action_id(self, name: str) -> int:
        return self._action_index[name]

    def has_fluent(self, name: str) -> bool:
        return name in self._fluent_index

    def state(self, names: Iterable[str]) -> State:
        return mask_of(self.fluent_id(n) for n in names)

    def state_names(self, state: State) -> frozenset[str]:
        return frozenset(self.fluents[i] for i in ids_of(state))

    def plan_from_names(self, names: Iterable[str]) -> Plan:
        return tuple(self.action_id(n) for n in names)

    def plan_names(self, plan: Sequence[int]) -> list[str]:
        return [self.actions[i].name for i in plan]

    def plan_cost(self, plan: Sequence[int]) -> int:
        return sum(self.actions[i].cost for i in plan)

    def is_goal(self, state: State) -> bool:
        gm = self.goal_mask
        return state & gm == gm


def make_task(
    fluents: Sequence[str],
    actions: Iterable[Mapping],
    init: Iterable[str],
    goal: Iterable[str],
    name: str = "task",
) -> Task:
    """Build a task from fluent names.

    Each action mapping has ``name`` and optional ``pre_pos``, ``pre_neg``,
    ``add``, ``del`` (fluent names) and ``cost``.
    """
    index = {n: i for i, n in enumerate(fluents)}
    acts = []
    for spec in actions:
        acts.append(
            Action(
                name=spec["name"],
                pre_pos=frozenset(index[f] for f in spec.get("pre_pos", ())),
                pre_neg=frozenset(index[f] for f in spec.get("pre_neg", ())),
                add=frozenset(index[f] for f in spec.get("add", ())),
                delete=frozenset(index[f] for f in spec.get("del", ())),
                cost=spec.get("cost", DEFAULT_COST),
            )
        )
    return Task(
        fluents=tuple(fluents),
        actions=tuple(acts),
        init=frozenset(index[f] for f in init),
        goal=frozenset(index[f] for f in goal),
        name=name,
    )


# -- validation -------------------------------------------------------------


def validate_task(task: Task) -> list[str]:
    """Return every structural violation found in ``task``; empty when valid."""
    problems: list[str] = []
    n = len(task.fluents)

    def fname(i: int) -> str:
        return task.fluents[i] if 0 <= i < n else f"#{i}"

    seen: dict[str, int] = {}
    for i, f in enumerate(task.fluents):
        if not f or any(c.isspace() for c in f):
            problems.append(f"fluent {i} has non-canonical name {f!r}")
        if f in seen:
            problems.append(f"duplicate fluent name {f!r}")
        seen[f] = i

    for i in sorted(task.init):
        if not 0 <= i < n:
            problems.append(f"init fluent {i} out of range")
    for i in sorted(task.goal):
        if not 0 <= i < n:
            problems.append(f"goal out of range: fluent {i}")

    names: set[str] = set()
    for a in task.actions:
        if a.name in names:
            problems.append(f"duplicate action name {a.name!r}")
        names.add(a.name)
        for label, ids in (("pre_pos", a.pre_pos), ("pre_neg", a.pre_neg), ("add", a.add), ("del", a.delete)):
            for i in sorted(ids):
                if not 0 <= i < n:
                    problems.append(f"action {a.name}: {label} fluent {i} out of range")
        for i in sorted(a.add & a.delete):
            problems.append(f"action {a.name}: add/del overlap on {fname(i)}")
        for i in sorted(a.pre_pos & a.pre_neg):
            problems.append(f"action {a.name}: pre_pos/pre_neg overlap on {fname(i)}")
        if not isinstance(a.cost, int) or isinstance(a.cost, bool) or a.cost < 0:
            problems.append(f"action {a.name}: cost must be a non-negative integer, got {a.cost!r}")
    return problems


# -- semantics --------------------------------------------------------------


class InapplicableActionError(ValueError):
    def __init__(self, action: Action, fluent: str, negative: bool, step: int | None = None):
        self.action = action
        self.fluent = fluent
        self.negative = negative
        self.step = step
        what = f"{fluent} is true" if negative else f"{fluent} is not true"
        where = f"step {step}: " if step is not None else ""
        super().__init__(f"{where}action {action.name} inapplicable ({what})")


def is_applicable(state: State, action: Action) -> bool:
    pm = action.pre_pos_mask
    return state & pm == pm and not state & action.pre_neg_mask


def progress(state: State, action: Action, task: Task | None = None) -> State:
    if not is_applicable(state, action):
        raise _inapplicable(state, action, task)
    return (state & ~action.del_mask) | action.add_mask


def _inapplicable(state: State, action: Action, task: Task | None, step: int | None = None):
    names = task.fluents if task is not None else None
    for i in sorted(action.pre_pos):
        if not state >> i & 1:
            return InapplicableActionError(action, names[i] if names else f"#{i}", False, step)
    for i in sorted(action.pre_neg):
        if state >> i & 1:
            return InapplicableActionError(action, names[i] if names else f"#{i}", True, step)
    raise AssertionError("action is applicable")


@dataclass(frozen=True)
class Trace:
    states: tuple[State, ...]

    @property
    def final(self) -> State:
        return self.states[-1]

    def __len__(self):
        return len(self.states)

    def __getitem__(self, i):
        return self.states[i]


def apply_sequence(init: State, plan: Sequence[int], task: Task) -> Trace:
    """Execute ``plan`` from ``init``; raises InapplicableActionError with the step index."""
    states = [init]
    s = init
    for k, aid in enumerate(plan):
        a = task.actions[aid]
        if not is_applicable(s, a):
            raise _inapplicable(s, a, task, step=k)
        s = (s & ~a.del_mask) | a.add_mask
        states.append(s)
    return Trace(tuple(states))


@dataclass(frozen=True)
class PlanFailure:
    kind: str  # "inapplicable" or "goal"
    message: str
    step: int | None = None
    fluents: tuple[str, ...] = ()


@dataclass(frozen=True)
class PlanCheck:
    valid: bool
    cost: int
    trace: Trace | None
    failure: PlanFailure | None = None

    def __bool__(self):
        return self.valid


def validate_plan(task: Task, plan: Sequence[int]) -> PlanCheck:
    cost = task.plan_cost(plan)
    try:
        trace = apply_sequence(task.init_state, plan, task)
    except InapplicableActionError as e:
        return PlanCheck(False, cost, None, PlanFailure("inapplicable", str(e), e.step, (e.fluent,)))
    missing = tuple(task.fluents[g] for g in sorted(task.goal) if not trace.final >> g & 1)
    if missing:
        msg = "goal not satisfied: " + ", ".join(missing)
        return PlanCheck(False, cost, trace, PlanFailure("goal", msg, None, missing))
    return PlanCheck(True, cost, trace)
