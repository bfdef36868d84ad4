"""Emit grounded tasks as PDDL with 0-ary predicates."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..strips import Task, validate_task

_IDENT = re.compile(r"^[a-z][a-z0-9_-]*$")
_RESERVED = frozenset({
    "and", "not", "or", "imply", "forall", "exists", "when", "either", "increase", "decrease",
    "assign", "define", "domain", "problem", "object", "number", "total-cost", "minimize",
})


class NamingError(ValueError):
    pass


@dataclass
class NamingContext:
    """Bidirectional map between task names and the PDDL identifiers used for them."""

    fluents: dict[str, str] = field(default_factory=dict)
    actions: dict[str, str] = field(default_factory=dict)

    @property
    def fluent_origin(self) -> dict[str, str]:
        return {v: k for k, v in self.fluents.items()}

    @property
    def action_origin(self) -> dict[str, str]:
        return {v: k for k, v in self.actions.items()}

    def original_action(self, pddl_name: str) -> str:
        return self.action_origin.get(pddl_name, pddl_name)

    def to_json(self) -> dict:
        return {"fluents": dict(self.fluents), "actions": dict(self.actions)}


def mangle(name: str) -> str:
    s = name.lower()
    s = s.replace("(", "_").replace(",", "_").replace(")", "")
    s = re.sub(r"[^a-z0-9_-]", "_", s)
    if not s or not s[0].isalpha():
        s = "n_" + s
    if s in _RESERVED:
        s += "_"
    return s


def _assign(names, kind: str) -> dict[str, str]:
    out: dict[str, str] = {}
    used: dict[str, str] = {}
    for n in names:
        m = n if _IDENT.match(n) and n not in _RESERVED else mangle(n)
        if m in used:
            raise NamingError(f"{kind} names {used[m]!r} and {n!r} both map to PDDL name {m!r}")
        used[m] = n
        out[n] = m
    return out


@dataclass(frozen=True)
class PDDLPair:
    domain_text: str
    problem_text: str
    names: NamingContext


def emit_pddl(task: Task, names: NamingContext | None = None, domain_name: str | None = None) -> PDDLPair:
    problems = validate_task(task)
    if problems:
        raise NamingError("cannot emit an invalid task: " + "; ".join(problems))
    ctx = names or NamingContext()
    ctx.fluents = _assign(task.fluents, "fluent")
    ctx.actions = _assign([a.name for a in task.actions], "action")
    f = [ctx.fluents[n] for n in task.fluents]
    dname = mangle(domain_name or task.name) if (domain_name or task.name) else "task"

    needs_neg = any(a.pre_neg for a in task.actions)
    needs_cost = any(a.cost != 1 for a in task.actions)
    reqs = [":strips"]
    if needs_neg:
        reqs.append(":negative-preconditions")
    if needs_cost:
        reqs.append(":action-costs")

    def conj(parts: list[str], indent: str) -> str:
        if not parts:
            return "(and)"
        return "(and\n" + "".join(f"{indent}  {p}\n" for p in parts) + f"{indent})"

    lines = [f"(define (domain {dname})", f"  (:requirements {' '.join(reqs)})"]
    lines.append("  (:predicates" + "".join(f" ({p})" for p in f) + ")")
    if needs_cost:
        lines.append("  (:functions (total-cost) - number)")
    for a in task.actions:
        pre = [f"({f[i]})" for i in sorted(a.pre_pos)] + [f"(not ({f[i]}))" for i in sorted(a.pre_neg)]
        eff = [f"({f[i]})" for i in sorted(a.add)] + [f"(not ({f[i]}))" for i in sorted(a.delete)]
        if needs_cost:
            eff.append(f"(increase (total-cost) {a.cost})")
        lines.append(f"  (:action {ctx.actions[a.name]}")
        lines.append("    :parameters ()")
        lines.append(f"    :precondition {conj(pre, '    ')}")
        lines.append(f"    :effect {conj(eff, '    ')})")
    lines.append(")")
    domain = "\n".join(lines) + "\n"

    init = [f"({f[i]})" for i in sorted(task.init)]
    if needs_cost:
        init.append("(= (total-cost) 0)")
    goal = [f"({f[i]})" for i in sorted(task.goal)]
    plines = [
        f"(define (problem {dname}-problem)",
        f"  (:domain {dname})",
        "  (:init" + "".join(f" {x}" for x in init) + ")",
        f"  (:goal {conj(goal, '  ')})",
    ]
    if needs_cost:
        plines.append("  (:metric minimize (total-cost))")
    plines.append(")")
    problem = "\n".join(plines) + "\n"
    return PDDLPair(domain, problem, ctx)
