"""Seeded random STRIPS tasks for property-based testing."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .strips import Action, Task


@dataclass(frozen=True)
class GenParams:
    fluents: tuple[int, int] = (2, 8)
    actions: tuple[int, int] = (1, 8)
    max_pre: int = 2
    min_add: int = 1
    max_add: int = 2
    max_del: int = 2
    neg_pre_prob: float = 0.2
    goals: tuple[int, int] = (1, 3)
    goal_init_prob: float = 0.15
    init_density: float = 0.3
    costs: tuple[int, int] = (1, 3)
    seed: int = 0

    def __post_init__(self):
        for name in ("fluents", "actions", "goals", "costs"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} range is empty: {lo}..{hi}")
        if not 0 <= self.min_add <= self.max_add:
            raise ValueError(f"add size range is empty: {self.min_add}..{self.max_add}")
        if self.fluents[0] < 1:
            raise ValueError("need at least one fluent")
        if self.costs[0] < 0:
            raise ValueError("costs must be non-negative")
        for name in ("neg_pre_prob", "goal_init_prob", "init_density"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def generate(params: GenParams) -> Task:
    rng = random.Random(params.seed)
    n = rng.randint(*params.fluents)
    m = rng.randint(*params.actions)
    universe = list(range(n))

    def sample(pool: list[int], k_max: int, k_min: int = 0) -> frozenset[int]:
        k = rng.randint(min(k_min, len(pool)), min(k_max, len(pool)))
        return frozenset(rng.sample(pool, k))

    actions = []
    for i in range(m):
        add = sample(universe, params.max_add, params.min_add)
        delete = sample([f for f in universe if f not in add], params.max_del)
        pre = sample(universe, params.max_pre)
        pre_pos = frozenset(f for f in pre if rng.random() >= params.neg_pre_prob)
        pre_neg = pre - pre_pos
        cost = rng.randint(*params.costs)
        actions.append(Action(f"a{i}", pre_pos, pre_neg, add, delete, cost))

    goal = frozenset(rng.sample(universe, min(rng.randint(*params.goals), n)))
    init = set(f for f in universe if f not in goal and rng.random() < params.init_density)
    for g in sorted(goal):
        if rng.random() < params.goal_init_prob:
            init.add(g)
    return Task(
        tuple(f"f{i}" for i in universe),
        tuple(actions),
        frozenset(init),
        goal,
        name=f"random-{params.seed}",
    )
