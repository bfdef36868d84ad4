"""JSON exchange format for grounded and compiled tasks."""

from __future__ import annotations

import json

import jsonschema

from ..compiler import CompiledAction, CompiledTask, Variant
from ..strips import Action, Task

TASK_FORMAT = "strips-task/1"
COMPILED_FORMAT = "commit-task/1"

_names = {"type": "array", "items": {"type": "string"}}

TASK_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["format", "fluents", "actions", "init", "goal"],
    "properties": {
        "format": {"const": TASK_FORMAT},
        "name": {"type": "string"},
        "fluents": _names,
        "actions": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["name"],
                "properties": {
                    "name": {"type": "string"},
                    "pre_pos": _names,
                    "pre_neg": _names,
                    "add": _names,
                    "del": _names,
                    "cost": {"type": "integer", "minimum": 0},
                },
            },
        },
        "init": _names,
        "goal": _names,
    },
}

COMPILED_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["format", "base", "task", "pending_goals", "commit_map", "provenance"],
    "properties": {
        "format": {"const": COMPILED_FORMAT},
        "base": TASK_SCHEMA,
        "task": TASK_SCHEMA,
        "pending_goals": _names,
        "commit_map": {"type": "object", "additionalProperties": {"type": "string"}},
        "provenance": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["action", "base", "committed", "variant"],
                "properties": {
                    "action": {"type": "string"},
                    "base": {"type": "string"},
                    "committed": _names,
                    "variant": {"enum": [v.value for v in Variant]},
                },
            },
        },
    },
}


class TaskFormatError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path or '<root>'}: {message}")


def _json_path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out


def _check(doc, schema, prefix: str = "") -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        path = _json_path(e.absolute_path)
        raise TaskFormatError(prefix + ("." + path if prefix and path else path), e.message)


def task_to_dict(task: Task) -> dict:
    names = task.fluents

    def ns(ids):
        return [names[i] for i in sorted(ids)]

    actions = []
    for a in task.actions:
        actions.append({
            "name": a.name,
            "pre_pos": ns(a.pre_pos),
            "pre_neg": ns(a.pre_neg),
            "add": ns(a.add),
            "del": ns(a.delete),
            "cost": a.cost,
        })
    return {
        "format": TASK_FORMAT,
        "name": task.name,
        "fluents": list(names),
        "actions": actions,
        "init": ns(task.init),
        "goal": ns(task.goal),
    }


def task_from_dict(doc, prefix: str = "") -> Task:
    _check(doc, TASK_SCHEMA, prefix)
    p = prefix + "." if prefix else ""
    index: dict[str, int] = {}
    for i, f in enumerate(doc["fluents"]):
        if f in index:
            raise TaskFormatError(f"{p}fluents[{i}]", f"duplicate fluent {f!r}")
        index[f] = i

    def ids(names, path):
        out = []
        for k, n in enumerate(names):
            if n not in index:
                raise TaskFormatError(f"{path}[{k}]", f"unknown fluent {n!r}")
            out.append(index[n])
        return frozenset(out)

    actions = []
    for i, a in enumerate(doc["actions"]):
        base = f"{p}actions[{i}]"
        actions.append(Action(
            a["name"],
            ids(a.get("pre_pos", []), base + ".pre_pos"),
            ids(a.get("pre_neg", []), base + ".pre_neg"),
            ids(a.get("add", []), base + ".add"),
            ids(a.get("del", []), base + ".del"),
            a.get("cost", 1),
        ))
    return Task(
        tuple(doc["fluents"]),
        tuple(actions),
        ids(doc["init"], p + "init"),
        ids(doc["goal"], p + "goal"),
        name=doc.get("name", "task"),
    )


def write_json_task(task: Task) -> str:
    return json.dumps(task_to_dict(task), indent=2) + "\n"


def read_json_task(text: str) -> Task:
    return task_from_dict(_loads(text))


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise TaskFormatError("", f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None


def compiled_to_dict(compiled: CompiledTask) -> dict:
    base = compiled.base
    task = compiled.task
    return {
        "format": COMPILED_FORMAT,
        "base": task_to_dict(base),
        "task": task_to_dict(task),
        "pending_goals": [base.fluents[g] for g in sorted(compiled.pending_goals)],
        "commit_map": {base.fluents[g]: task.fluents[c] for g, c in sorted(compiled.commit_map.items())},
        "provenance": [
            {
                "action": p.action.name,
                "base": base.actions[p.base_action_id].name,
                "committed": sorted(base.fluents[g] for g in p.committed_subset),
                "variant": p.variant.value,
            }
            for p in compiled.provenance
        ],
    }


def compiled_from_dict(doc) -> CompiledTask:
    _check(doc, COMPILED_SCHEMA)
    base = task_from_dict(doc["base"], "base")
    task = task_from_dict(doc["task"], "task")

    def lookup(kind: str, name: str, path: str, finder):
        try:
            return finder(name)
        except KeyError:
            raise TaskFormatError(path, f"unknown {kind} {name!r}") from None

    pending = frozenset(
        lookup("fluent", g, f"pending_goals[{i}]", base.fluent_id) for i, g in enumerate(doc["pending_goals"])
    )
    commit_map = {
        lookup("fluent", g, f"commit_map.{g}", base.fluent_id): lookup("fluent", c, f"commit_map.{g}", task.fluent_id)
        for g, c in doc["commit_map"].items()
    }
    if len(doc["provenance"]) != len(task.actions):
        raise TaskFormatError("provenance", "must have one record per compiled action")
    prov = []
    for i, rec in enumerate(doc["provenance"]):
        path = f"provenance[{i}]"
        if rec["action"] != task.actions[i].name:
            raise TaskFormatError(path + ".action", f"expected {task.actions[i].name!r}")
        bid = lookup("action", rec["base"], path + ".base", base.action_id)
        committed = frozenset(
            lookup("fluent", g, f"{path}.committed[{k}]", base.fluent_id) for k, g in enumerate(rec["committed"])
        )
        prov.append(CompiledAction(task.actions[i], bid, committed, Variant(rec["variant"])))
    return CompiledTask(task, base, commit_map, tuple(prov), pending)


def write_json_compiled(compiled: CompiledTask) -> str:
    return json.dumps(compiled_to_dict(compiled), indent=2) + "\n"


def read_json_compiled(text: str) -> CompiledTask:
    return compiled_from_dict(_loads(text))


def read_any(text: str) -> Task | CompiledTask:
    doc = _loads(text)
    if isinstance(doc, dict) and doc.get("format") == COMPILED_FORMAT:
        return compiled_from_dict(doc)
    return task_from_dict(doc)
