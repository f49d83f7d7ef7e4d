import dataclasses

from hypothesis import given, settings, strategies as st

from dimres import witnesses
from dimres.formula import Allocation, Next, Prop, Release, Until, parse_formula, subformulas
from dimres.imperfect import (EMPTY, audit_uniformity, check_i, initial_states, label_i,
                              search_modality)
from dimres.oracle.semantics import oracle_states
from dimres.perfect import SearchStats, check, label
from helpers import corpus_instance


def test_m3_needs_different_actions(m3):
    phi = parse_formula(witnesses.M3_NEXT)
    assert {"s0", "s0'"} <= check(m3, phi)
    assert check_i(m3, phi) == {"good"}


def test_m3_shared_action_is_uniform():
    model = witnesses.m3(shared=True)
    phi = parse_formula(witnesses.M3_NEXT)
    assert check_i(model, phi) == check(model, phi) == {"s0", "s0'", "good"}


def test_late_confusion_blocks_two_step_until():
    model = witnesses.m3_two_step()
    phi = parse_formula(witnesses.M3_TWO_STEP_UNTIL)
    assert check(model, phi) == {"s0", "s0'", "t", "t'", "goal"}
    # the agent still cannot tell t from t' after confusing s0 with s0'
    assert check_i(model, phi) == {"goal"}
    assert oracle_states(model, phi, "imperfect") == {"goal"}


def test_initial_states_union_over_coalition(m3):
    assert initial_states(m3, ("1",), "s0") == ("s0", "s0'")
    assert initial_states(m3, ("1",), "good") == ("good",)


def test_closed_set_is_persistent():
    a = EMPTY.add("x")
    b = a.add("y")
    assert list(a) == ["x"] and list(b) == ["y", "x"]
    assert len(EMPTY) == 0 and len(b) == 2


def test_release_run_out_under_uniformity(m2):
    assert check_i(m2, parse_formula(witnesses.m2_release(1))) == {"s0"}
    assert check_i(m2, parse_formula(witnesses.m2_release(2))) == frozenset()


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_agrees_with_oracle(seed):
    model, phi, _ = corpus_instance(seed)
    assert check_i(model, phi) == oracle_states(model, phi, "imperfect")


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_identity_relations_reduce_to_perfect(seed):
    model, phi, _ = corpus_instance(seed)
    ident = dataclasses.replace(model, indist={})
    assert label_i(ident, phi) == label(ident, phi)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_successful_searches_are_uniform(seed):
    model, phi, _ = corpus_instance(seed)
    stats = SearchStats()
    labels = label_i(model, phi, stats)
    assert stats.depth_violations == 0 and stats.closed_violations == 0
    for f in subformulas(phi):
        if not isinstance(f, (Next, Until, Release)):
            continue
        for s in model.states:
            closed = search_modality(model, f, s, labels)
            assert (closed is not None) == (s in labels[f])
            if closed is not None:
                assert audit_uniformity(model, model.order(f.coalition), closed) == []


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_zero_budget_laws(seed):
    model, phi, rng = corpus_instance(seed)
    coal = tuple(a for a in model.agents if rng.random() < 0.5) or model.agents[:1]
    zero = Allocation.of({a: (0,) * model.n_resources for a in coal})
    assert check_i(model, Next(coal, zero, phi)) == frozenset()
    inner = check_i(model, phi)
    expected = {s for s in model.states if inner.issuperset(initial_states(model, coal, s))}
    assert check_i(model, Release(coal, zero, Prop("q"), phi)) == expected


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 2))
def test_uniform_until_monotone_in_bound(seed, extra):
    model, _, rng = corpus_instance(seed, nesting=1)
    a = model.agents[0]
    small = Allocation.of({a: (rng.randint(0, 3),) + (0,) * (model.n_resources - 1)})
    big = Allocation.of({a: tuple(x + extra for x in small[a])})
    phi = Until((a,), small, Prop("q"), Prop("p"))
    assert check_i(model, phi) <= check_i(model, dataclasses.replace(phi, bound=big))
