"""Forward state-space planners used both as verification oracles and benchmark engines."""

from __future__ import annotations

import enum
import heapq
import math
import time
from collections import deque
from dataclasses import dataclass, field
from itertools import count
from typing import Callable

from .heuristics import RelaxedTask
from .strips import Plan, State, Task, is_applicable, validate_plan


class Outcome(enum.Enum):
    SOLVED = "solved"
    UNSOLVABLE = "unsolvable"
    LIMIT = "limit"


@dataclass(frozen=True)
class SearchLimits:
    time_limit: float | None = None
    max_states: int | None = None
    max_expansions: int | None = None

    def __post_init__(self):
        for name in ("time_limit", "max_states", "max_expansions"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"{name} must be positive, got {v}")


@dataclass
class SearchStats:
    expansions: int = 0
    generations: int = 0
    wall_time: float = 0.0
    peak_states: int = 0


@dataclass(frozen=True)
class SearchResult:
    outcome: Outcome
    plan: Plan | None = None
    cost: int | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    limit: str | None = None  # which limit tripped, for LIMIT outcomes

    @property
    def solved(self) -> bool:
        return self.outcome is Outcome.SOLVED


class _LimitHit(Exception):
    def __init__(self, which: str):
        self.which = which


def _successors(task: Task, state: State):
    for aid, a in enumerate(task.actions):
        pm = a.pre_pos_mask
        if state & pm == pm and not state & a.pre_neg_mask:
            yield aid, (state & ~a.del_mask) | a.add_mask, a.cost


def _extract(parents: dict, state: State) -> Plan:
    plan = []
    while True:
        prev = parents[state]
        if prev is None:
            break
        state, aid = prev
        plan.append(aid)
    plan.reverse()
    return tuple(plan)


def _best_first(
    task: Task,
    limits: SearchLimits,
    heuristic: Callable[[State], float],
    weight_g: bool,
) -> SearchResult:
    """Shared best-first loop.

    With ``weight_g`` the priority is (g + h, h, fifo) and duplicates are
    reopened whenever a cheaper path is found (A*); otherwise the priority is
    (h, fifo) and a state is generated at most once (greedy best-first).
    """
    limits = limits or SearchLimits()
    stats = SearchStats()
    start = time.perf_counter()
    deadline = start + limits.time_limit if limits.time_limit else None
    goal_mask = task.goal_mask

    def done(outcome: Outcome, plan=None, cost=None, limit=None) -> SearchResult:
        stats.wall_time = time.perf_counter() - start
        return SearchResult(outcome, plan, cost, stats, limit)

    init = task.init_state
    h0 = heuristic(init)
    if h0 == math.inf:
        return done(Outcome.UNSOLVABLE)
    tie = count()
    best_g: dict[State, int] = {init: 0}
    parents: dict[State, tuple[State, int] | None] = {init: None}
    closed: set[State] = set()
    frontier = [(h0, h0, next(tie), 0, init)]

    try:
        while frontier:
            _, h, _, g, s = heapq.heappop(frontier)
            if g > best_g[s] or (s in closed and not weight_g):
                continue
            if s & goal_mask == goal_mask:
                plan = _extract(parents, s)
                return done(Outcome.SOLVED, plan, g)
            closed.add(s)
            stats.expansions += 1
            if limits.max_expansions and stats.expansions > limits.max_expansions:
                raise _LimitHit("expansions")
            if deadline and stats.expansions % 64 == 0 and time.perf_counter() > deadline:
                raise _LimitHit("time")
            for aid, t, c in _successors(task, s):
                stats.generations += 1
                g2 = g + c
                old = best_g.get(t)
                if weight_g:
                    if old is not None and g2 >= old:
                        continue
                elif old is not None:
                    continue
                h2 = heuristic(t)
                if h2 == math.inf:
                    continue
                best_g[t] = g2
                parents[t] = (s, aid)
                if weight_g and t in closed:
                    closed.discard(t)  # reopen
                key = g2 + h2 if weight_g else h2
                heapq.heappush(frontier, (key, h2, next(tie), g2, t))
            stored = len(best_g)
            if stored > stats.peak_states:
                stats.peak_states = stored
            if limits.max_states and stored > limits.max_states:
                raise _LimitHit("states")
    except _LimitHit as hit:
        return done(Outcome.LIMIT, limit=hit.which)
    return done(Outcome.UNSOLVABLE)


def solve_optimal(task: Task, limits: SearchLimits | None = None, heuristic: str = "hmax") -> SearchResult:
    """A* with h_max (``heuristic="hmax"``) or uniform-cost search (``"blind"``)."""
    if heuristic == "hmax":
        rt = RelaxedTask(task)
        h = lambda s: rt.evaluate(s, "max")  # noqa: E731
    elif heuristic == "blind":
        h = lambda s: 0  # noqa: E731
    else:
        raise ValueError(f"unknown heuristic {heuristic!r}")
    return _best_first(task, limits or SearchLimits(), h, weight_g=True)


def solve_greedy(task: Task, limits: SearchLimits | None = None) -> SearchResult:
    """Greedy best-first search guided by h_add; no optimality guarantee."""
    rt = RelaxedTask(task)
    return _best_first(task, limits or SearchLimits(), lambda s: rt.evaluate(s, "add"), weight_g=False)


class ReachabilityCapExceeded(RuntimeError):
    pass


def enumerate_reachable(task: Task, cap: int = 200_000) -> set[State]:
    init = task.init_state
    seen = {init}
    queue = deque([init])
    while queue:
        s = queue.popleft()
        for _, t, _ in _successors(task, s):
            if t not in seen:
                seen.add(t)
                if len(seen) > cap:
                    raise ReachabilityCapExceeded(f"more than {cap} reachable states")
                queue.append(t)
    return seen


def check_result(task: Task, result: SearchResult) -> None:
    """Raise AssertionError unless a SOLVED result carries a valid plan of the stated cost."""
    if result.outcome is not Outcome.SOLVED:
        return
    check = validate_plan(task, result.plan)
    if not check.valid or check.cost != result.cost:
        raise AssertionError(f"planner returned a bad plan: {check.failure}")


__all__ = [
    "Outcome", "SearchLimits", "SearchResult", "SearchStats", "solve_optimal", "solve_greedy",
    "enumerate_reachable", "ReachabilityCapExceeded", "check_result", "is_applicable",
]
