import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commitplan.strips import (
    Action,
    InapplicableActionError,
    Task,
    apply_sequence,
    is_applicable,
    make_task,
    mask_of,
    progress,
    validate_plan,
    validate_task,
)
from commitplan.taskgen import GenParams, generate

import oracles


def plan(task, *names):
    return task.plan_from_names(names)


def test_optimal_worked_plan_is_valid_cost_3(worked):
    check = validate_plan(worked, plan(worked, "a1", "a2", "a1"))
    assert check.valid and check.cost == 3
    assert worked.state_names(check.trace.final) == {"x", "y"}


def test_missing_goal_reported(worked):
    check = validate_plan(worked, plan(worked, "a1", "a2"))
    assert not check.valid
    assert check.failure.kind == "goal"
    assert worked.state_names(check.trace.final) == {"y"}
    assert "x" in check.failure.fluents


def test_empty_plan_when_goal_already_true():
    t = make_task(["p"], [], init=["p"], goal=["p"])
    check = validate_plan(t, ())
    assert check.valid and check.cost == 0


def test_inapplicable_step_reports_position(worked):
    check = validate_plan(worked, plan(worked, "a2"))
    assert not check.valid and check.failure.kind == "inapplicable"
    assert check.failure.step == 0


def test_progress_raises_on_negative_precondition():
    t = make_task(["p", "q"], [{"name": "a", "pre_neg": ["p"], "add": ["q"]}], init=["p"], goal=["q"])
    with pytest.raises(InapplicableActionError):
        progress(t.init_state, t.actions[0], t)


def test_validate_task_flags_overlap_and_range():
    bad = Task(("x",), (Action("a", add={0}, delete={0}),), frozenset(), frozenset({3}))
    problems = validate_task(bad)
    assert any("overlap" in p for p in problems)
    assert any("goal" in p for p in problems)


def test_negative_cost_rejected():
    t = Task(("x",), (Action("a", add={0}, cost=-1),), frozenset(), frozenset({0}))
    assert validate_task(t)


def test_duplicate_action_names_rejected():
    t = Task(("x",), (Action("a", add={0}), Action("a")), frozenset(), frozenset({0}))
    assert validate_task(t)


def test_zero_cost_actions_allowed():
    t = make_task(["x"], [{"name": "a", "add": ["x"], "cost": 0}], init=[], goal=["x"])
    assert validate_task(t) == []
    assert validate_plan(t, (0,)).cost == 0


# -- properties --------------------------------------------------------------

seeds = st.integers(min_value=0, max_value=2**32)


@settings(max_examples=150, deadline=None)
@given(seed=seeds, state_bits=st.integers(min_value=0, max_value=255))
def test_frame_property(seed, state_bits):
    task = generate(GenParams(seed=seed))
    state = state_bits & ((1 << len(task.fluents)) - 1)
    for a in task.actions:
        if not is_applicable(state, a):
            continue
        nxt = progress(state, a)
        assert (nxt & ~a.add_mask) & ~state == 0
        assert nxt & a.add_mask == a.add_mask
        assert nxt & a.del_mask == 0


@settings(max_examples=150, deadline=None)
@given(seed=seeds, data=st.data())
def test_traces_compose(seed, data):
    task = generate(GenParams(seed=seed))
    ids = st.integers(min_value=0, max_value=len(task.actions) - 1)
    # build an applicable sequence by walking forward
    state, seq = task.init_state, []
    for choice in data.draw(st.lists(ids, max_size=6)):
        a = task.actions[choice]
        if is_applicable(state, a):
            seq.append(choice)
            state = progress(state, a)
    cut = data.draw(st.integers(min_value=0, max_value=len(seq)))
    whole = apply_sequence(task.init_state, seq, task)
    first = apply_sequence(task.init_state, seq[:cut], task)
    second = apply_sequence(first.final, seq[cut:], task)
    assert list(whole.states) == list(first.states) + list(second.states)[1:]


@settings(max_examples=150, deadline=None)
@given(seed=seeds, data=st.data())
def test_cost_is_sum_of_action_costs(seed, data):
    task = generate(GenParams(seed=seed))
    seq = data.draw(st.lists(st.integers(min_value=0, max_value=len(task.actions) - 1), max_size=6))
    check = validate_plan(task, seq)
    if check.failure is None or check.failure.kind == "goal":
        assert check.cost == sum(task.actions[i].cost for i in seq)


@settings(max_examples=100, deadline=None)
@given(seed=seeds, data=st.data())
def test_validation_agrees_with_set_oracle(seed, data):
    task = generate(GenParams(seed=seed))
    seq = data.draw(st.lists(st.integers(min_value=0, max_value=len(task.actions) - 1), max_size=5))
    valid, cost, states = oracles.simulate(oracles.by_name(task), task.plan_names(seq))
    check = validate_plan(task, seq)
    assert check.valid == valid
    if valid:
        assert check.cost == cost
        assert [task.state_names(s) for s in check.trace.states] == states


def test_mask_roundtrip():
    assert mask_of([0, 3]) == 0b1001
