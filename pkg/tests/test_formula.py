import random

import pytest
from hypothesis import given, settings, strategies as st

from dimres import witnesses
from dimres.formula import (Allocation, FormulaSyntaxError, Next, Prop, RalNext, Until,
                            family, modal_depth, parse_allocation, parse_formula, size,
                            subformulas, to_text, validate_formula)
from dimres.oracle.generate import GenParams, random_model, random_ral_formula, random_rb_formula


def test_parse_bounded_until():
    phi = parse_formula("<{1}:[1=(2)]> (q U p)")
    assert phi == Until(("1",), Allocation.of({"1": (2,)}), Prop("q"), Prop("p"))


def test_parse_ral_forms():
    down = parse_formula("<{1}|{2} down> X p")
    assert down == RalNext(("1",), ("2",), None, Prop("p"))
    fresh = parse_formula("<{1,2}|{} eta=[1=(1,0),2=(0,0)]> X p")
    assert fresh.endowment["2"] == (0, 0)
    assert fresh.opponents == ()


def test_printing_is_canonical():
    phi = parse_formula("<{2,1}:[2=(1),1=(0)]>X(!p&q)")
    assert to_text(phi) == "<{1,2}:[1=(0),2=(1)]> X (!p & q)"


@pytest.mark.parametrize("text, fragment", [
    ("<{1}:[1=(2)]> (q U p", "expected ')'"),
    ("p ~ q", "unknown operator"),
    ("<{}:[]> X p", "empty"),
    ("<{1}:[1=(x)]> X p", "malformed bound"),
])
def test_syntax_errors_carry_positions(text, fragment):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text)
    assert fragment in str(info.value)
    assert info.value.line == 1 and info.value.column >= 1


def test_validate_against_model(m1):
    assert validate_formula(parse_formula("<{1}:[1=(2)]> (q U p)"), m1) == []
    diags = validate_formula(parse_formula("<{1,2}:[1=(2),2=(1)]> X r"), m1)
    assert "undeclared proposition 'r'" in diags
    assert any("unknown agents ['2']" in d for d in diags)
    assert any("length" in d for d in
               validate_formula(parse_formula("<{1}:[1=(2,1)]> X p"), m1))


def test_mixed_families_rejected(m1):
    phi = parse_formula("<{1}:[1=(1)]> X <{1}|{} down> X p")
    assert family(phi) == "mixed"
    assert any("mixed" in d for d in validate_formula(phi, m1))


def test_allocation_text():
    alloc = parse_allocation("[2=(0,1),1=(3,0)]")
    assert str(alloc) == "[1=(3,0),2=(0,1)]"
    assert alloc.agents == ("1", "2")


def _random_formula(seed, ral):
    model = random_model(GenParams(seed=seed))
    rng = random.Random(seed)
    make = random_ral_formula if ral else random_rb_formula
    return make(rng, model, 3, nesting=2)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_print_parse_round_trip(seed, ral):
    phi = _random_formula(seed, ral)
    assert parse_formula(to_text(phi)) == phi
    assert to_text(parse_formula(to_text(phi))) == to_text(phi)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_subformulas_ordered_by_complexity(seed, ral):
    phi = _random_formula(seed, ral)
    order = subformulas(phi)
    assert order[-1] == phi
    assert len(set(order)) == len(order)
    position = {f: i for i, f in enumerate(order)}
    for f in order:
        for c in f.children():
            assert position[c] < position[f]
    assert modal_depth(phi) <= 2
    assert size(phi) >= len(order)


def test_witness_formulas_parse():
    for text in (witnesses.m2_release(1), witnesses.M3_NEXT, witnesses.M3_TWO_STEP_UNTIL,
                 witnesses.CHAIN_DOWN):
        assert to_text(parse_formula(text)) == text
    assert isinstance(parse_formula(witnesses.M3_NEXT), Next)
