import random

import pytest
from hypothesis import given, settings, strategies as st

from dimres import witnesses
from dimres.formula import Allocation, parse_allocation, parse_formula
from dimres.model import GameModel
from dimres.oracle.generate import (GenParams, random_allocation, random_model,
                                    random_ral_formula, translate_to_ral)
from dimres.oracle.semantics import oracle_states
from dimres.perfect import QueryError, SearchStats, check
from dimres.ral import RalChecker, node0, ral_check
from helpers import corpus_instance

BLOCKER = witnesses.blocker_doc()


def eta(text):
    return parse_allocation(text)


def test_down_chain_needs_two_units():
    model = witnesses.chain()
    phi = parse_formula(witnesses.CHAIN_DOWN)
    assert "s0" in ral_check(model, phi, eta("[1=(2)]"))
    assert "s0" not in ral_check(model, phi, eta("[1=(1)]"))


def test_fresh_endowment_ignores_current_resources():
    model = witnesses.chain()
    phi = parse_formula("<{1}|{} eta=[1=(2)]> X <{1}|{} down> X p")
    assert ral_check(model, phi, eta("[1=(0)]")) == ral_check(model, phi, eta("[1=(5)]"))
    assert "s0" in ral_check(model, phi, eta("[1=(0)]"))


def test_poor_opponent_cannot_block():
    model = GameModel.from_dict(BLOCKER)
    phi = parse_formula("<{1}|{2} down> X p")
    assert ral_check(model, phi, eta("[1=(1),2=(1)]")) == {"goal"} | {"s0"}
    assert "s0" not in ral_check(model, phi, eta("[1=(1),2=(2)]"))


def test_unbounded_outsider_can_always_block():
    model = GameModel.from_dict(BLOCKER)
    phi = parse_formula("<{1}|{} down> X p")
    assert "s0" not in ral_check(model, phi, eta("[1=(1),2=(0)]"))


def test_no_admissible_profile_ends_the_computation():
    model = GameModel.from_dict(BLOCKER)
    broke = eta("[1=(1),2=(0)]")
    # the opponent can afford nothing, so the run stops at s0
    assert "s0" not in ral_check(model, parse_formula("<{1}|{2} down> X true"), broke)
    assert "s0" not in ral_check(model, parse_formula("<{1}|{2} down> (true U p)"), broke)
    assert "s0" in ral_check(model, parse_formula("<{1}|{2} down> (false R !p)"), broke)
    for text in ("<{1}|{2} down> X true", "<{1}|{2} down> (false R !p)"):
        assert (oracle_states(model, parse_formula(text), "ral", broke)
                == ral_check(model, parse_formula(text), broke))


def test_endowment_required_for_every_agent():
    model = GameModel.from_dict(BLOCKER)
    with pytest.raises(QueryError, match="does not cover"):
        ral_check(model, parse_formula("<{1}|{2} down> X p"), eta("[1=(1)]"))


def test_outsider_resources_stay_frozen():
    model = GameModel.from_dict(BLOCKER)
    checker = RalChecker(model)
    n = node0("s0", ((1,), (3,)), ("1",), ())
    after = checker.successor(n, ("go", "block"))
    assert after.avail == ((0,), (3,))
    n = node0("s0", ((1,), (3,)), ("1",), ("2",))
    assert checker.successor(n, ("go", "block")).avail == ((0,), (1,))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_agrees_with_oracle(seed):
    model = random_model(GenParams(seed=seed))
    rng = random.Random(seed)
    phi = random_ral_formula(rng, model, 3)
    endow = random_allocation(rng, model.agents, model.n_resources, 3)
    assert ral_check(model, phi, endow) == oracle_states(model, phi, "ral", endow)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_fresh_fragment_matches_bounds(seed):
    model, phi, rng = corpus_instance(seed)
    endow = random_allocation(rng, model.agents, model.n_resources, 3)
    assert ral_check(model, translate_to_ral(phi, model.agents), endow) == check(model, phi)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 5))
def test_propositional_formulas_ignore_endowment(seed, k):
    model = random_model(GenParams(seed=seed))
    phi = parse_formula("((p & !q) | q)")
    endow = Allocation.of({a: (k,) * model.n_resources for a in model.agents})
    assert ral_check(model, phi, endow) == check(model, phi)


def test_depth_statistics_stay_within_budget():
    stats = SearchStats()
    ral_check(witnesses.chain(), parse_formula("<{1}|{} down> (true U p)"),
              eta("[1=(2)]"), stats)
    assert stats.max_depth <= 3 and stats.depth_violations == 0
