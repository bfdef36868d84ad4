"""Instantiate lifted schemas into a grounded STRIPS task."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import prod

from ..strips import Action, Task
from .lifted import EQUALITY, Atom, LiftedModel, Schema

DEFAULT_MAX_ACTIONS = 10**6


class GroundingError(RuntimeError):
    pass


@dataclass(frozen=True)
class GroundingOptions:
    """``simplify`` evaluates static predicates against the initial state and drops
    atoms that are neither initially true, added by some action, nor a goal (together
    with actions requiring them).  ``relaxed_reachability`` additionally keeps only
    actions and atoms reachable in the delete relaxation.
    """

    simplify: bool = True
    relaxed_reachability: bool = False
    max_actions: int = DEFAULT_MAX_ACTIONS


def atom_name(atom: Atom) -> str:
    if len(atom) == 1:
        return atom[0]
    return f"{atom[0]}({','.join(atom[1:])})"


def _substitute(atom: Atom, binding: dict[str, str]) -> Atom:
    return (atom[0], *(binding.get(a, a) for a in atom[1:]))


def _bindings(model: LiftedModel, schema: Schema, static: frozenset[str], simplify: bool):
    """Yield parameter bindings in lexicographic order, pruning as soon as a
    constraint's variables are all bound."""
    params = [p for p, _ in schema.parameters]
    domains = [model.objects_of_type(t) for _, t in schema.parameters]
    checks: list[list[tuple[Atom, bool]]] = [[] for _ in range(len(params) + 1)]
    position = {p: i for i, p in enumerate(params)}

    def depth(atom: Atom) -> int:
        return max((position[a] + 1 for a in atom[1:] if a in position), default=0)

    for atom in schema.pre_pos:
        if atom[0] == EQUALITY or (simplify and atom[0] in static):
            checks[depth(atom)].append((atom, True))
    for atom in schema.pre_neg:
        if atom[0] == EQUALITY or (simplify and atom[0] in static):
            checks[depth(atom)].append((atom, False))

    def holds(atom: Atom, binding: dict[str, str]) -> bool:
        g = _substitute(atom, binding)
        if g[0] == EQUALITY:
            return g[1] == g[2]
        return g in model.init

    binding: dict[str, str] = {}

    def ok(level: int) -> bool:
        return all(holds(a, binding) == want for a, want in checks[level])

    def rec(i: int):
        if not ok(i):
            return
        if i == len(params):
            yield dict(binding)
            return
        for obj in domains[i]:
            binding[params[i]] = obj
            yield from rec(i + 1)
        binding.pop(params[i], None)

    yield from rec(0)


def _herbrand(model: LiftedModel) -> list[Atom]:
    atoms = []
    for pred, types in model.predicates.items():
        for args in product(*(model.objects_of_type(t) for t in types)):
            atoms.append((pred, *args))
    return atoms


def ground(model: LiftedModel, options: GroundingOptions | None = None) -> Task:
    options = options or GroundingOptions()
    static = model.static_predicates() if options.simplify else frozenset()
    default_cost = 0 if model.action_costs else 1

    ground_actions: list[tuple[str, set, set, set, set, int]] = []
    for schema in model.schemas:
        bound = prod(len(model.objects_of_type(t)) for _, t in schema.parameters)
        for binding in _bindings(model, schema, static, options.simplify):
            keep = lambda atoms: {  # noqa: E731
                _substitute(a, binding) for a in atoms if a[0] != EQUALITY and a[0] not in static
            }
            pre_pos, pre_neg = keep(schema.pre_pos), keep(schema.pre_neg)
            add = {_substitute(a, binding) for a in schema.add}
            delete = {_substitute(a, binding) for a in schema.delete} - add
            if pre_pos & pre_neg:
                continue
            args = [binding[p] for p, _ in schema.parameters]
            name = atom_name((schema.name, *args))
            cost = schema.cost if schema.cost is not None else default_cost
            ground_actions.append((name, pre_pos, pre_neg, add, delete, cost))
            if len(ground_actions) > options.max_actions:
                raise GroundingError(
                    f"grounding produced more than {options.max_actions} actions "
                    f"(schema {schema.name} alone admits up to {bound} substitutions)"
                )

    init = set(model.init)
    goal = set(model.goal)
    if options.simplify:
        added = set().union(*(a[3] for a in ground_actions)) if ground_actions else set()
        if options.relaxed_reachability:
            reached = set(init)
            changed = True
            while changed:
                changed = False
                for a in ground_actions:
                    if a[1] <= reached and not a[3] <= reached:
                        reached |= a[3]
                        changed = True
            live = reached
        else:
            live = init | added
        ground_actions = [a for a in ground_actions if a[1] <= live]
        # static atoms survive only as goals
        universe = {a for a in live if a[0] not in static} | goal
        candidates = _herbrand_order(model, universe)
    else:
        candidates = _herbrand(model)

    index = {atom: i for i, atom in enumerate(candidates)}
    actions = []
    for name, pre_pos, pre_neg, add, delete, cost in ground_actions:
        actions.append(Action(
            name,
            frozenset(index[a] for a in pre_pos),
            frozenset(index[a] for a in pre_neg if a in index),
            frozenset(index[a] for a in add if a in index),
            frozenset(index[a] for a in delete if a in index),
            cost,
        ))
    return Task(
        tuple(atom_name(a) for a in candidates),
        tuple(actions),
        frozenset(index[a] for a in init if a in index),
        frozenset(index[a] for a in goal),
        name=model.problem_name,
    )


def _herbrand_order(model: LiftedModel, atoms: set[Atom]) -> list[Atom]:
    """Sort atoms by predicate declaration order, then argument tuple."""
    rank = {p: i for i, p in enumerate(model.predicates)}
    return sorted(atoms, key=lambda a: (rank[a[0]], a[1:]))
