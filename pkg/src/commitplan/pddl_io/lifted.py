"""Parser for the typed STRIPS subset of PDDL."""

from __future__ import annotations

from dataclasses import dataclass, field

from .sexpr import PDDLSyntaxError, SList, parse_sexpr, where

SUPPORTED_REQUIREMENTS = frozenset(
    {":strips", ":typing", ":negative-preconditions", ":action-costs", ":equality"}
)
ROOT_TYPE = "object"
EQUALITY = "="


class PDDLError(ValueError):
    """Semantic error in a PDDL document (unknown symbol, arity or type mismatch)."""


class UnsupportedRequirementError(PDDLError):
    def __init__(self, requirement: str):
        self.requirement = requirement
        super().__init__(f"unsupported requirement {requirement}")


Atom = tuple  # (predicate, arg, ...) where args are variables (``?x``) or object names


@dataclass(frozen=True)
class Schema:
    name: str
    parameters: tuple[tuple[str, str], ...]
    pre_pos: tuple[Atom, ...]
    pre_neg: tuple[Atom, ...]
    add: tuple[Atom, ...]
    delete: tuple[Atom, ...]
    cost: int | None  # None when the schema has no total-cost increase


@dataclass
class LiftedModel:
    domain_name: str
    problem_name: str
    requirements: frozenset[str]
    supertypes: dict[str, str]  # type -> parent; the root has no entry
    objects: dict[str, str]  # object -> type, constants included, declaration order
    predicates: dict[str, tuple[str, ...]]  # predicate -> parameter types, declaration order
    schemas: list[Schema]
    init: set[Atom] = field(default_factory=set)
    goal: list[Atom] = field(default_factory=list)

    @property
    def action_costs(self) -> bool:
        return ":action-costs" in self.requirements

    def is_subtype(self, t: str, ancestor: str) -> bool:
        seen = set()
        while t not in seen:
            if t == ancestor:
                return True
            seen.add(t)
            if t not in self.supertypes:
                return ancestor == ROOT_TYPE
            t = self.supertypes[t]
        return False

    def objects_of_type(self, t: str) -> list[str]:
        return sorted(o for o, ot in self.objects.items() if self.is_subtype(ot, t))

    def static_predicates(self) -> frozenset[str]:
        fluent = {a[0] for s in self.schemas for a in (*s.add, *s.delete)}
        return frozenset(p for p in self.predicates if p not in fluent)


def _err(msg: str, node) -> PDDLSyntaxError:
    line, col = where(node)
    return PDDLSyntaxError(msg, line, col)


def _expect_list(node, what: str) -> SList:
    if not isinstance(node, list):
        raise _err(f"expected {what}, got {node!r}", node)
    return node


def parse_typed_list(items: list, node) -> list[tuple[str, str]]:
    out: list[tuple[str, str]] = []
    pending: list[str] = []
    i = 0
    while i < len(items):
        tok = items[i]
        if isinstance(tok, list):
            raise _err("unexpected list in typed list", tok)
        if tok == "-":
            if i + 1 >= len(items):
                raise _err("missing type after '-'", node)
            t = items[i + 1]
            if isinstance(t, list):
                raise PDDLError(f"'either' types are not supported (near {where(t)})")
            out.extend((name, t) for name in pending)
            pending = []
            i += 2
        else:
            pending.append(tok)
            i += 1
    out.extend((name, ROOT_TYPE) for name in pending)
    return out


def _parse_atom(node, what: str) -> Atom:
    node = _expect_list(node, what)
    if not node or isinstance(node[0], list):
        raise _err(f"malformed {what}", node)
    for arg in node[1:]:
        if isinstance(arg, list):
            raise _err(f"nested term in {what}", node)
    return tuple(node)


def _conjuncts(node) -> list:
    node = _expect_list(node, "formula")
    if not node:
        return []
    if node[0] == "and":
        return list(node[1:])
    return [node]


def _parse_precondition(node, schema: str) -> tuple[list[Atom], list[Atom]]:
    pos, neg = [], []
    for lit in _conjuncts(node):
        lit = _expect_list(lit, "literal")
        head = lit[0] if lit else None
        if head == "not":
            if len(lit) != 2:
                raise _err("'not' takes one argument", lit)
            neg.append(_parse_atom(lit[1], "atom"))
        elif head in ("or", "imply", "forall", "exists", "when", "and"):
            raise PDDLError(f"action {schema}: '{head}' in preconditions is outside the STRIPS subset")
        else:
            pos.append(_parse_atom(lit, "atom"))
    return pos, neg


def _parse_effect(node, schema: str) -> tuple[list[Atom], list[Atom], int | None]:
    add, delete, cost = [], [], None
    for eff in _conjuncts(node):
        eff = _expect_list(eff, "effect")
        head = eff[0] if eff else None
        if head == "not":
            if len(eff) != 2:
                raise _err("'not' takes one argument", eff)
            delete.append(_parse_atom(eff[1], "atom"))
        elif head == "increase":
            if len(eff) != 3 or eff[1] != ["total-cost"]:
                raise PDDLError(f"action {schema}: only (increase (total-cost) N) is supported")
            try:
                value = int(eff[2])
            except (TypeError, ValueError):
                raise PDDLError(f"action {schema}: cost must be a non-negative integer constant") from None
            if value < 0:
                raise PDDLError(f"action {schema}: negative cost {value}")
            cost = (cost or 0) + value
        elif head in ("forall", "when", "and", "decrease", "assign"):
            raise PDDLError(f"action {schema}: '{head}' in effects is outside the STRIPS subset")
        else:
            add.append(_parse_atom(eff, "atom"))
    return add, delete, cost


def _sections(root: SList, kind: str) -> tuple[str, list]:
    if len(root) < 2 or root[0] != "define":
        raise _err("expected (define ...)", root)
    header = _expect_list(root[1], f"({kind} name)")
    if len(header) != 2 or header[0] != kind:
        raise _err(f"expected ({kind} <name>)", header)
    return header[1], list(root[2:])


def _parse_domain(text: str):
    root = parse_sexpr(text)
    name, sections = _sections(root, "domain")
    requirements: set[str] = set()
    supertypes: dict[str, str] = {}
    constants: dict[str, str] = {}
    predicates: dict[str, tuple[str, ...]] = {}
    schemas: list[Schema] = []
    for sec in sections:
        sec = _expect_list(sec, "domain section")
        key = sec[0] if sec else None
        if key == ":requirements":
            for r in sec[1:]:
                if r not in SUPPORTED_REQUIREMENTS:
                    raise UnsupportedRequirementError(r)
                requirements.add(r)
        elif key == ":types":
            for t, parent in parse_typed_list(sec[1:], sec):
                if t != ROOT_TYPE:
                    supertypes[t] = parent
        elif key == ":constants":
            constants.update(parse_typed_list(sec[1:], sec))
        elif key == ":predicates":
            for p in sec[1:]:
                p = _expect_list(p, "predicate declaration")
                predicates[p[0]] = tuple(t for _, t in parse_typed_list(p[1:], p))
        elif key == ":functions":
            pass  # only total-cost is meaningful; checked where used
        elif key == ":action":
            schemas.append(_parse_action(sec))
        else:
            raise _err(f"unsupported domain section {key!r}", sec)
    return name, frozenset(requirements or {":strips"}), supertypes, constants, predicates, schemas


def _parse_action(sec: list) -> Schema:
    if len(sec) < 2 or isinstance(sec[1], list):
        raise _err("action needs a name", sec)
    name = sec[1]
    fields: dict[str, object] = {}
    i = 2
    while i < len(sec):
        key = sec[i]
        if key not in (":parameters", ":precondition", ":effect") or i + 1 >= len(sec):
            raise _err(f"action {name}: unexpected {key!r}", sec)
        fields[key] = sec[i + 1]
        i += 2
    params = parse_typed_list(_expect_list(fields.get(":parameters", []), "parameter list"), sec)
    pos, neg = _parse_precondition(fields.get(":precondition", []), name)
    add, delete, cost = _parse_effect(fields.get(":effect", []), name)
    return Schema(name, tuple(params), tuple(pos), tuple(neg), tuple(add), tuple(delete), cost)


def parse_pddl(domain_text: str, problem_text: str) -> LiftedModel:
    dname, reqs, supertypes, constants, predicates, schemas = _parse_domain(domain_text)
    root = parse_sexpr(problem_text)
    pname, sections = _sections(root, "problem")
    objects = dict(constants)
    init: set[Atom] = set()
    goal: list[Atom] = []
    for sec in sections:
        sec = _expect_list(sec, "problem section")
        key = sec[0] if sec else None
        if key == ":domain":
            if len(sec) != 2 or sec[1] != dname:
                raise PDDLError(f"problem refers to domain {sec[1:]!r}, expected {dname!r}")
        elif key == ":requirements":
            for r in sec[1:]:
                if r not in SUPPORTED_REQUIREMENTS:
                    raise UnsupportedRequirementError(r)
        elif key == ":objects":
            objects.update(parse_typed_list(sec[1:], sec))
        elif key == ":init":
            for fact in sec[1:]:
                fact = _expect_list(fact, "initial fact")
                if fact and fact[0] == "=":
                    if len(fact) == 3 and fact[1] == ["total-cost"]:
                        continue
                    raise PDDLError("numeric fluents other than total-cost are not supported")
                if fact and fact[0] == "not":
                    continue  # closed-world: negative facts are implicit
                init.add(_parse_atom(fact, "initial fact"))
        elif key == ":goal":
            if len(sec) != 2:
                raise _err("goal takes one formula", sec)
            pos, neg = _parse_precondition(sec[1], "goal")
            if neg:
                raise PDDLError("negative goals are not supported")
            goal.extend(pos)
        elif key == ":metric":
            if sec[1:] != ["minimize", ["total-cost"]]:
                raise PDDLError("only (:metric minimize (total-cost)) is supported")
        else:
            raise _err(f"unsupported problem section {key!r}", sec)

    model = LiftedModel(dname, pname, reqs, supertypes, objects, predicates, schemas, init, goal)
    _check_model(model)
    return model


def _check_model(model: LiftedModel) -> None:
    known_types = {ROOT_TYPE, *model.supertypes, *model.supertypes.values()}
    for o, t in model.objects.items():
        if t not in known_types:
            raise PDDLError(f"object {o} has undeclared type {t}")

    def check_atom(atom: Atom, scope: dict[str, str], where_: str):
        pred, args = atom[0], atom[1:]
        if pred == EQUALITY:
            if len(args) != 2:
                raise PDDLError(f"{where_}: '=' takes two arguments")
            for a in args:
                if a not in scope and a not in model.objects:
                    raise PDDLError(f"{where_}: unknown term {a}")
            return
        if pred not in model.predicates:
            raise PDDLError(f"{where_}: undeclared predicate {pred}")
        types = model.predicates[pred]
        if len(types) != len(args):
            raise PDDLError(f"{where_}: {pred} expects {len(types)} arguments, got {len(args)}")
        for a, want in zip(args, types):
            if a in scope:
                have = scope[a]
                # parameters may be declared more or less specifically than the predicate
                if not (model.is_subtype(have, want) or model.is_subtype(want, have)):
                    raise PDDLError(f"{where_}: {a} of type {have} cannot fill a {want} slot of {pred}")
            elif a in model.objects:
                if not model.is_subtype(model.objects[a], want):
                    raise PDDLError(f"{where_}: {a} of type {model.objects[a]} cannot fill a {want} slot of {pred}")
            else:
                raise PDDLError(f"{where_}: unknown term {a}")

    for s in model.schemas:
        scope = dict(s.parameters)
        for t in scope.values():
            if t not in known_types:
                raise PDDLError(f"action {s.name}: undeclared type {t}")
        for atom in (*s.pre_pos, *s.pre_neg, *s.add, *s.delete):
            check_atom(atom, scope, f"action {s.name}")
        for atom in (*s.add, *s.delete):
            if atom[0] == EQUALITY:
                raise PDDLError(f"action {s.name}: '=' cannot appear in effects")
    for atom in model.init:
        check_atom(atom, {}, "init")
    for atom in model.goal:
        if atom[0] == EQUALITY:
            raise PDDLError("goal: '=' is not supported")
        check_atom(atom, {}, "goal")
