"""IPC plan files: one parenthesized action per line, ``;`` comments."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from ..strips import Task
from .grounding import atom_name

_COST = re.compile(r"^;\s*cost\s*=\s*(\d+)\b", re.IGNORECASE)


class PlanFileError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class PlanFile:
    actions: list[str]
    declared_cost: int | None = None


def parse_plan_file(text: str) -> PlanFile:
    """Action names are returned in canonical form: ``(pick b1 rooma)`` becomes ``pick(b1,rooma)``."""
    actions: list[str] = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(";"):
            m = _COST.match(line)
            if m:
                declared = int(m.group(1))
            continue
        if not (line.startswith("(") and line.endswith(")")):
            raise PlanFileError(lineno, f"expected '(action args...)', got {line!r}")
        parts = line[1:-1].split()
        if not parts or any(c in p for p in parts for c in "()"):
            raise PlanFileError(lineno, f"malformed action {line!r}")
        actions.append(atom_name(tuple(p.lower() for p in parts)))
    return PlanFile(actions, declared)


def write_plan_file(task: Task, plan: Sequence[int]) -> str:
    lines = []
    for aid in plan:
        name = task.actions[aid].name
        if "(" in name and name.endswith(")"):
            head, args = name[:-1].split("(", 1)
            name = " ".join([head, *args.split(",")])
        lines.append(f"({name})")
    unit = all(a.cost == 1 for a in task.actions)
    lines.append(f"; cost = {task.plan_cost(plan)} ({'unit cost' if unit else 'general cost'})")
    return "\n".join(lines) + "\n"
