"""Delete-relaxation heuristics h_max and h_add.

Negative preconditions are dropped by the relaxation, which keeps h_max
admissible on tasks that use them.
"""

from __future__ import annotations

import heapq
import math

from .strips import State, Task

INF = math.inf


class RelaxedTask:
    """Precomputed relaxed-action tables for repeated heuristic evaluation."""

    def __init__(self, task: Task):
        self.task = task
        self.n = len(task.fluents)
        self.pre_count = [len(a.pre_pos) for a in task.actions]
        self.pre = [tuple(sorted(a.pre_pos)) for a in task.actions]
        self.add = [tuple(sorted(a.add)) for a in task.actions]
        self.cost = [a.cost for a in task.actions]
        self.triggers: list[list[int]] = [[] for _ in range(self.n)]
        for i, a in enumerate(task.actions):
            for f in a.pre_pos:
                self.triggers[f].append(i)
        self.no_pre = [i for i, c in enumerate(self.pre_count) if c == 0]
        self.goal = tuple(sorted(task.goal))
        self.goal_set = frozenset(task.goal)

    def evaluate(self, state: State, combine: str) -> float:
        """Generalized Dijkstra over fluent costs; ``combine`` is "max" or "add"."""
        use_max = combine == "max"
        n = self.n
        dist = [INF] * n
        heap: list[tuple[float, int]] = []
        for f in range(n):
            if state >> f & 1:
                dist[f] = 0
                heap.append((0, f))
        heapq.heapify(heap)
        remaining = self.pre_count[:]
        acc = [0.0] * len(remaining)

        def fire(i: int, base: float):
            c = base + self.cost[i]
            for q in self.add[i]:
                if c < dist[q]:
                    dist[q] = c
                    heapq.heappush(heap, (c, q))

        for i in self.no_pre:
            fire(i, 0)

        goals_left = sum(1 for g in self.goal if not state >> g & 1)
        done = [False] * n
        while heap and goals_left:
            d, f = heapq.heappop(heap)
            if done[f] or d > dist[f]:
                continue
            done[f] = True
            if f in self.goal_set and not state >> f & 1:
                goals_left -= 1
            for i in self.triggers[f]:
                acc[i] = max(acc[i], d) if use_max else acc[i] + d
                remaining[i] -= 1
                if remaining[i] == 0:
                    fire(i, acc[i])
        total = 0.0
        for g in self.goal:
            if dist[g] == INF:
                return INF
            total = max(total, dist[g]) if use_max else total + dist[g]
        return total


def h_max(state: State, task: Task | RelaxedTask) -> float:
    rt = task if isinstance(task, RelaxedTask) else RelaxedTask(task)
    return rt.evaluate(state, "max")


def h_add(state: State, task: Task | RelaxedTask) -> float:
    rt = task if isinstance(task, RelaxedTask) else RelaxedTask(task)
    return rt.evaluate(state, "add")
