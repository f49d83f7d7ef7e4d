import json

import pytest
from hypothesis import given, settings, strategies as st

from dimres import witnesses
from dimres.model import (GameModel, JointAction, ModelError, ModelFormatError, affordable,
                          decompose_cost, joint_actions, load_model, outcomes, pre,
                          validate_model, vec_le, vec_lt)
from dimres.oracle.generate import GenParams, random_model


def test_vector_order_is_pointwise():
    assert vec_le((1, 2), (1, 3))
    assert not vec_le((2, 0), (1, 3))
    assert vec_lt((1, 2), (1, 3))
    assert not vec_lt((1, 3), (1, 3))


def test_cost_splits_into_consumption_and_production(m1):
    doc = witnesses.m1_doc()
    doc["resources"] = ["r0", "r1", "r2"]
    for per in doc["costs"].values():
        for act in per:
            per[act] = [-1, 2, -3]
    model = GameModel.from_dict(doc)
    assert decompose_cost(model, "s0", "go") == ((1, 0, 3), (0, 2, 0))


def test_round_trip_through_json(m3):
    again = GameModel.from_dict(json.loads(m3.dumps()))
    assert again.dumps() == m3.dumps()
    assert again.indistinguishable("1", "s0", "s0'")
    assert not again.indistinguishable("1", "s0", "good")


def test_load_model_rejects_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ModelFormatError):
        load_model(path)


def test_unknown_top_level_key_rejected():
    doc = witnesses.m1_doc()
    doc["extra"] = 1
    with pytest.raises(ModelFormatError, match="unknown keys"):
        GameModel.from_dict(doc)


def test_valid_witnesses_have_no_diagnostics():
    for make in witnesses.DOCS.values():
        assert validate_model(GameModel.from_dict(make())) == []


def test_zero_diminishing_cost_diagnosed():
    doc = witnesses.m1_doc()
    doc["costs"]["s0"]["go"] = [0]
    diags = validate_model(GameModel.from_dict(doc))
    assert diags == ["diminishing component must be <= -1 at (s0, go)"]


def test_missing_transition_and_empty_actions_diagnosed():
    doc = witnesses.m1_doc()
    del doc["transitions"]["s0"]["stay"]
    doc["actions"]["s1"]["1"] = []
    diags = validate_model(GameModel.from_dict(doc))
    assert "missing transition at (s0, stay)" in diags
    assert "empty action set at (s1, 1)" in diags


def test_partition_must_cover_states_and_keep_actions():
    doc = witnesses.m3_doc()
    doc["indist"]["1"] = [["s0", "s0'"], ["good"]]
    assert ("indistinguishability of 1 does not cover state bad"
            in validate_model(GameModel.from_dict(doc)))
    doc = witnesses.m3_doc()
    doc["indist"]["1"] = [["s0", "good"], ["s0'"], ["bad"]]
    assert any("different actions at indistinguishable" in d
               for d in validate_model(GameModel.from_dict(doc)))


def test_joint_actions_follow_declared_order():
    model = random_model(GenParams(seed=5, max_agents=2))
    s = model.states[0]
    acts = joint_actions(model, s, model.agents)
    assert [j.actions for j in acts] == sorted(j.actions for j in acts)
    assert all(j.coalition == model.agents for j in acts)


def test_empty_coalition_rejected(m1):
    with pytest.raises(ModelError, match="empty coalition"):
        joint_actions(m1, "s0", ())


def test_outcomes_of_unavailable_action(m1):
    with pytest.raises(ModelError, match="unavailable"):
        outcomes(m1, "s1", {"1": "go"})
    assert outcomes(m1, "s0", JointAction(("1",), ("go",))) == ("s1",)


def test_pre_on_m1(m1):
    # go reaches p from s0, stay keeps s1 in p; one unit is enough for either
    assert pre(m1, ["1"], {"s1"}, {"1": (1,)}) == {"s0", "s1"}
    assert pre(m1, ["1"], {"s1"}, {"1": (0,)}) == frozenset()


def test_affordable_is_pointwise():
    assert affordable(((1, 0),), ((1, 0),))
    assert not affordable(((1, 1),), ((2, 0),))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5), st.integers(1, 3), st.integers(1, 3))
def test_generated_models_are_valid(seed, states, agents, resources):
    params = GenParams(seed=seed, max_states=states, max_agents=agents,
                       max_resources=resources)
    model = random_model(params)
    assert validate_model(model) == []
    assert random_model(params).dumps() == model.dumps()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_single_resource_costs(seed):
    model = random_model(GenParams(seed=seed, max_resources=1))
    for per in model.costs.values():
        for vec in per.values():
            assert len(vec) == 1 and vec[0] <= -1


def test_force_production_gives_a_producing_action():
    model = random_model(GenParams(seed=3, force_production=True))
    assert any(x > 0 for per in model.costs.values() for v in per.values() for x in v[1:])


def test_bad_params_rejected():
    with pytest.raises(ValueError):
        GenParams(max_states=0)
