import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commitplan.compiler import (
    CompilationError,
    CompilationOptions,
    GoalClass,
    Variant,
    classify_action,
    commit_subsets,
    compile_task,
    forecast_size,
    pending_goals,
)
from commitplan.strips import Action, make_task, validate_task
from commitplan.taskgen import GenParams, generate

import oracles


def names(task, ids):
    return {task.fluents[i] for i in ids}


def test_pending_goals_worked(worked):
    assert names(worked, pending_goals(worked)) == {"x", "y"}


def test_pending_goals_empty_when_goals_initial():
    t = make_task(["p"], [{"name": "a", "add": ["p"]}], init=["p"], goal=["p"])
    assert pending_goals(t) == frozenset()


def test_goal_without_adder_not_pending():
    t = make_task(["p", "q"], [{"name": "a", "add": ["p"]}], init=[], goal=["p", "q"])
    assert names(t, pending_goals(t)) == {"p"}


def test_classification_worked(worked):
    pg = pending_goals(worked)
    assert classify_action(worked.actions[0], pg) is GoalClass.ADD_ONLY
    assert classify_action(worked.actions[1], pg) is GoalClass.ADD_AND_DEL
    assert classify_action(Action("n", add={5}), pg) is GoalClass.NEUTRAL
    assert classify_action(Action("d", delete={0}), pg) is GoalClass.DEL_ONLY


def test_commit_subsets_order():
    assert commit_subsets(["x", "y"]) == [frozenset(), {"x"}, {"y"}, {"x", "y"}]
    assert commit_subsets([]) == [frozenset()]
    assert commit_subsets(["x"]) == [frozenset(), {"x"}]


def test_commit_subsets_cap_names_action():
    with pytest.raises(CompilationError, match="act.*13|13.*act"):
        commit_subsets(range(13), action_name="act")


def test_worked_compilation(worked):
    c = compile_task(worked)
    t = c.task
    got = {
        a.name: (names(t, a.pre_pos), names(t, a.pre_neg), names(t, a.add), names(t, a.delete), a.cost)
        for a in t.actions
    }
    assert got == {
        "a1": (set(), set(), {"x"}, set(), 1),
        "a1--commit--x": (set(), {"x--commit"}, {"x", "x--commit"}, set(), 1),
        "a2--sim": ({"x"}, {"x--commit"}, {"y"}, {"x"}, 1),
        "a2--sim--y": ({"x"}, {"x--commit", "y--commit"}, {"y", "y--commit"}, {"x"}, 1),
    }
    assert names(t, t.goal) == {"x--commit", "y--commit"}
    assert t.init == worked.init
    assert [p.variant for p in c.provenance] == [Variant.COMMIT, Variant.COMMIT, Variant.SIMULTANEOUS, Variant.SIMULTANEOUS]


def test_no_pending_goals_is_identity():
    t = make_task(
        ["p", "q"],
        [{"name": f"a{i}", "pre_pos": ["p"], "add": ["q"]} for i in range(7)],
        init=["p", "q"],
        goal=["q"],
    )
    c = compile_task(t)
    assert c.task.actions == t.actions
    assert c.task.goal == t.goal
    assert all(p.variant is Variant.UNCHANGED for p in c.provenance)
    assert forecast_size(t).compiled_action_count == 7


def test_three_pending_goals_give_eight_variants():
    t = make_task(["a", "b", "c"], [{"name": "all", "add": ["a", "b", "c"]}], init=[], goal=["a", "b", "c"])
    c = compile_task(t)
    assert len(c.task.actions) == 8
    assert {len(p.committed_subset) for p in c.provenance} == {0, 1, 2, 3}


def test_forecast_worked(worked):
    f = forecast_size(worked)
    assert (f.compiled_action_count, f.max_subset_exponent) == (4, 1)


def test_forcecommit_variant():
    t = make_task(["g", "h"], [{"name": "mk", "add": ["g"]}, {"name": "rm", "del": ["g"]}], init=[], goal=["g"])
    c = compile_task(t)
    rm = c.task.actions[c.task.action_id("rm--forcecommit")]
    assert names(c.task, rm.pre_neg) == {"g--commit"}
    assert c.provenance[c.task.action_id("rm--forcecommit")].committed_subset == frozenset()


def test_initial_goal_stays_plain():
    t = make_task(["g", "h"], [{"name": "mk", "add": ["g", "h"]}], init=["g"], goal=["g", "h"])
    c = compile_task(t)
    assert names(c.task, c.task.goal) == {"g", "h--commit"}


def test_name_collision_is_error():
    t = make_task(["g", "g--commit"], [{"name": "a", "add": ["g"]}], init=[], goal=["g"])
    with pytest.raises(CompilationError):
        compile_task(t)


def test_cap_propagates():
    fl = [f"g{i}" for i in range(4)]
    t = make_task(fl, [{"name": "a", "add": fl}], init=[], goal=fl)
    with pytest.raises(CompilationError):
        compile_task(t, CompilationOptions(max_subset_exponent=3))


def test_invalid_task_rejected():
    t = make_task(["g"], [{"name": "a", "add": ["g"], "del": ["g"]}], init=[], goal=["g"])
    with pytest.raises(CompilationError):
        compile_task(t)


# -- properties --------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**40))
def test_structural_invariants(seed):
    task = generate(GenParams(seed=seed))
    c = compile_task(task)
    t = c.task
    n = len(task.fluents)
    pg = pending_goals(task)

    assert validate_task(t) == []
    assert t.fluents[:n] == task.fluents
    assert set(c.commit_map) == set(pg)
    assert set(c.commit_map.values()) == set(range(n, len(t.fluents)))
    assert t.goal == (task.goal - pg) | {c.commit_map[g] for g in pg}
    assert t.init == task.init

    assert len(t.actions) == oracles.expected_size(oracles.by_name(task))
    assert forecast_size(task).compiled_action_count == len(t.actions)

    commits = set(c.commit_map.values())
    seen_bases = set()
    for a, prov in zip(t.actions, c.provenance):
        base = task.actions[prov.base_action_id]
        seen_bases.add(prov.base_action_id)
        assert a.cost == base.cost
        assert a.pre_pos == base.pre_pos and a.delete == base.delete
        assert not (a.delete & commits)
        assert prov.committed_subset <= base.add & pg
        assert a.add == base.add | {c.commit_map[g] for g in prov.committed_subset}
        cls = classify_action(base, pg)
        extra_neg = a.pre_neg - base.pre_neg
        if cls is GoalClass.NEUTRAL:
            assert prov.variant is Variant.UNCHANGED and a == base
        elif cls is GoalClass.DEL_ONLY:
            assert prov.variant is Variant.FORCECOMMIT
            assert extra_neg == {c.commit_map[g] for g in base.delete & pg}
        elif cls is GoalClass.ADD_ONLY:
            assert prov.variant is Variant.COMMIT
            assert extra_neg == {c.commit_map[g] for g in prov.committed_subset}
            if not prov.committed_subset:
                assert a == base
        else:
            assert prov.variant is Variant.SIMULTANEOUS
            assert extra_neg == {c.commit_map[g] for g in prov.committed_subset | (base.delete & pg)}
    assert seen_bases == set(range(len(task.actions)))


def test_compilation_is_deterministic():
    task = generate(GenParams(seed=7))
    assert compile_task(task) == compile_task(task)
