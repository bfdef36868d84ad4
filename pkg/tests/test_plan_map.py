import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commitplan.compiler import compile_task, pending_goals
from commitplan.pddl_io import load_pddl, parse_plan_file
from commitplan.plan_map import (
    INIT,
    CorruptProvenanceError,
    InvalidPlanError,
    backward_map,
    commit_achievers,
    forward_map,
    permanent_achievers,
)
from commitplan.search import solve_greedy, solve_optimal
from commitplan.strips import make_task, validate_plan
from commitplan.taskgen import GenParams, generate

COMMITTED_PLAN = ("a1", "a2--sim--y", "a1--commit--x")


def test_achievers_worked(worked):
    rep = permanent_achievers(worked, worked.plan_from_names(["a1", "a2", "a1"]))
    assert rep.achiever_of("x") == 2
    assert rep.achiever_of("y") == 1
    assert rep.transient[worked.fluent_id("x")] == [(0, 1)]
    assert rep.transient[worked.fluent_id("y")] == []


def test_monotone_plan_first_adder():
    t = make_task(["p", "q"], [{"name": "a", "add": ["p"]}, {"name": "b", "add": ["q"]}], [], ["p", "q"])
    rep = permanent_achievers(t, (0, 1, 0))
    assert rep.achiever_of("p") == 0 and rep.achiever_of("q") == 1
    assert all(v == [] for v in rep.transient.values())


def test_initial_goal_sentinel_and_restore():
    t = make_task(
        ["p", "q"],
        [{"name": "off", "del": ["p"]}, {"name": "on", "add": ["p"]}, {"name": "mk", "add": ["q"]}],
        init=["p"],
        goal=["p", "q"],
    )
    assert permanent_achievers(t, t.plan_from_names(["mk"])).achiever_of("p") is INIT
    rep = permanent_achievers(t, t.plan_from_names(["off", "mk", "on"]))
    assert rep.achiever_of("p") == 2


def test_achievers_reject_invalid_plan(worked):
    with pytest.raises(InvalidPlanError):
        permanent_achievers(worked, worked.plan_from_names(["a1", "a2"]))


def test_forward_worked(worked):
    c = compile_task(worked)
    m = forward_map(worked, worked.plan_from_names(["a1", "a2", "a1"]), c)
    assert tuple(c.task.plan_names(m.plan)) == COMMITTED_PLAN
    assert validate_plan(c.task, m.plan).cost == 3


def test_backward_worked(worked):
    c = compile_task(worked)
    m = backward_map(c, c.task.plan_from_names(COMMITTED_PLAN))
    assert worked.plan_names(m.plan) == ["a1", "a2", "a1"]


def test_commit_achievers_worked(worked):
    c = compile_task(worked)
    got = commit_achievers(c, c.task.plan_from_names(COMMITTED_PLAN))
    assert got == {worked.fluent_id("x"): 2, worked.fluent_id("y"): 1}


def test_no_pending_goals_maps_identically():
    t = make_task(["p", "q"], [{"name": "a", "pre_pos": ["p"], "add": ["q"]}], ["p", "q"], ["q"])
    c = compile_task(t)
    assert forward_map(t, (0, 0), c).plan == (0, 0)
    assert backward_map(c, (0,)).plan == (0,)
    assert commit_achievers(c, (0,)) == {}


def test_backward_rejects_unknown_action(worked):
    c = compile_task(worked)
    with pytest.raises(CorruptProvenanceError):
        backward_map(c, (99,))


def test_mapping_json_shape(worked):
    c = compile_task(worked)
    m = forward_map(worked, worked.plan_from_names(["a1", "a2", "a1"]), c)
    doc = json.loads(json.dumps(m.to_json(worked, c.task, "forward")))
    assert doc["format"] == "plan-mapping/1"
    assert doc["plan"] == list(COMMITTED_PLAN)


def _sokoban(fixtures):
    task = load_pddl((fixtures / "sokoban-domain.pddl").read_text(), (fixtures / "sokoban.pddl").read_text())
    plan = task.plan_from_names(parse_plan_file((fixtures / "sokoban.plan").read_text()).actions)
    return task, plan


def test_sokoban_transient_then_final_push(fixtures):
    task, plan = _sokoban(fixtures)
    assert validate_plan(task, plan).valid
    rep = permanent_achievers(task, plan)
    assert rep.achiever_of("filled(c2)") == 3
    assert task.plan_names(plan)[3].startswith("push-onto-goal(blue,")
    assert rep.transient[task.fluent_id("filled(c2)")] == [(0, 1)]
    assert rep.achiever_of("filled(c4)") == 2

    c = compile_task(task)
    m = forward_map(task, plan, c)
    ca = commit_achievers(c, m.plan)
    assert ca[task.fluent_id("filled(c2)")] == 3
    assert ca[task.fluent_id("filled(c4)")] == 2


# -- properties --------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**40))
def test_roundtrip_and_attribution(seed):
    task = generate(GenParams(seed=seed))
    r = solve_optimal(task)
    if not r.solved:
        return
    c = compile_task(task)
    fwd = forward_map(task, r.plan, c)
    check = validate_plan(c.task, fwd.plan)
    assert check.valid and check.cost == r.cost and len(fwd.plan) == len(r.plan)
    assert backward_map(c, fwd.plan).plan == r.plan
    perm = permanent_achievers(task, r.plan).achievers
    assert commit_achievers(c, fwd.plan) == {g: perm[g] for g in pending_goals(task)}


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**40))
def test_commit_never_precedes_permanence(seed):
    task = generate(GenParams(seed=seed))
    c = compile_task(task)
    r = solve_greedy(c.task)
    if not r.solved:
        return
    back = backward_map(c, r.plan).plan
    check = validate_plan(task, back)
    assert check.valid and check.cost == r.cost
    perm = permanent_achievers(task, back).achievers
    trace = validate_plan(c.task, r.plan).trace
    for g, k in commit_achievers(c, r.plan).items():
        assert k >= perm[g]
        assert all(s >> g & 1 for s in trace.states[k + 1:])
