"""Small hand-built models with known answers.

* ``m1`` - two states; from s0 the agent can ``go`` to the p-state s1 or
  ``stay``.  ``<{1}:[1=(2)]> (q U p)`` holds at both states.
* ``m2`` - one expensive action leading away from p.  ``<{1}:[1=(b)]> (false R p)``
  holds at s0 for b=(1) (the agent runs out while p holds) but not for
  b=(2): Release is not monotone in the bound.
* ``m3`` - s0 and s0' look alike to agent 1 and need opposite actions to
  reach p.  ``<{1}:[1=(1)]> X p`` holds at both under perfect information
  and at neither under uniform strategies.
* ``m3_shared`` - as ``m3`` but action ``alpha`` reaches p from both states.
* ``m3_two_step`` - the confusion is resolved one step late, so a
  two-step Until is won with perfect information only.
* ``chain`` - s0 -> s1 -> s2 with p at s2, one unit per step.
* ``blocker`` - agent 1 heads for p; agent 2 can divert it with an action
  costing two units, so a resource-bounded opponent with one unit cannot.
"""
from __future__ import annotations

from .model import GameModel, ensure_valid


def _model(doc) -> GameModel:
    return ensure_valid(GameModel.from_dict(doc))


def m1_doc() -> dict:
    return {
        "agents": ["1"],
        "resources": ["r0"],
        "states": ["s0", "s1"],
        "propositions": {"p": ["s1"], "q": ["s0", "s1"]},
        "actions": {"s0": {"1": ["go", "stay"]}, "s1": {"1": ["stay"]}},
        "costs": {"s0": {"go": [-1], "stay": [-1]}, "s1": {"stay": [-1]}},
        "transitions": {"s0": {"go": "s1", "stay": "s0"}, "s1": {"stay": "s1"}},
    }


def m2_doc() -> dict:
    return {
        "agents": ["1"],
        "resources": ["r0"],
        "states": ["s0", "s1"],
        "propositions": {"p": ["s0"]},
        "actions": {"s0": {"1": ["go"]}, "s1": {"1": ["go"]}},
        "costs": {"s0": {"go": [-2]}, "s1": {"go": [-2]}},
        "transitions": {"s0": {"go": "s1"}, "s1": {"go": "s1"}},
    }


def m3_doc(shared: bool = False) -> dict:
    return {
        "agents": ["1"],
        "resources": ["r0"],
        "states": ["s0", "s0'", "good", "bad"],
        "propositions": {"p": ["good"]},
        "actions": {
            "s0": {"1": ["alpha", "beta"]},
            "s0'": {"1": ["alpha", "beta"]},
            "good": {"1": ["stay"]},
            "bad": {"1": ["stay"]},
        },
        "costs": {
            "s0": {"alpha": [-1], "beta": [-1]},
            "s0'": {"alpha": [-1], "beta": [-1]},
            "good": {"stay": [-1]},
            "bad": {"stay": [-1]},
        },
        "transitions": {
            "s0": {"alpha": "good", "beta": "bad"},
            "s0'": {"alpha": "good" if shared else "bad", "beta": "good"},
            "good": {"stay": "good"},
            "bad": {"stay": "bad"},
        },
        "indist": {"1": [["s0", "s0'"], ["good"], ["bad"]]},
    }


def m3_two_step_doc() -> dict:
    return {
        "agents": ["1"],
        "resources": ["r0"],
        "states": ["s0", "s0'", "t", "t'", "goal", "bad"],
        "propositions": {"p": ["goal"], "q": ["s0", "s0'", "t", "t'"]},
        "actions": {
            "s0": {"1": ["go"]},
            "s0'": {"1": ["go"]},
            "t": {"1": ["alpha", "beta"]},
            "t'": {"1": ["alpha", "beta"]},
            "goal": {"1": ["stay"]},
            "bad": {"1": ["stay"]},
        },
        "costs": {
            "s0": {"go": [-1]},
            "s0'": {"go": [-1]},
            "t": {"alpha": [-1], "beta": [-1]},
            "t'": {"alpha": [-1], "beta": [-1]},
            "goal": {"stay": [-1]},
            "bad": {"stay": [-1]},
        },
        "transitions": {
            "s0": {"go": "t"},
            "s0'": {"go": "t'"},
            "t": {"alpha": "goal", "beta": "bad"},
            "t'": {"alpha": "bad", "beta": "goal"},
            "goal": {"stay": "goal"},
            "bad": {"stay": "bad"},
        },
        "indist": {"1": [["s0", "s0'"], ["t", "t'"], ["goal"], ["bad"]]},
    }


def chain_doc() -> dict:
    return {
        "agents": ["1"],
        "resources": ["r0"],
        "states": ["s0", "s1", "s2"],
        "propositions": {"p": ["s2"]},
        "actions": {s: {"1": ["step"]} for s in ("s0", "s1", "s2")},
        "costs": {s: {"step": [-1]} for s in ("s0", "s1", "s2")},
        "transitions": {"s0": {"step": "s1"}, "s1": {"step": "s2"}, "s2": {"step": "s2"}},
    }


def blocker_doc() -> dict:
    return {
        "agents": ["1", "2"],
        "resources": ["r0"],
        "states": ["s0", "goal", "bad"],
        "propositions": {"p": ["goal"]},
        "actions": {"s0": {"1": ["go"], "2": ["block", "idle"]},
                    "goal": {"1": ["stay"], "2": ["idle"]},
                    "bad": {"1": ["stay"], "2": ["idle"]}},
        "costs": {"s0": {"go": [-1], "block": [-2], "idle": [-1]},
                  "goal": {"stay": [-1], "idle": [-1]},
                  "bad": {"stay": [-1], "idle": [-1]}},
        "transitions": {"s0": {"go,block": "bad", "go,idle": "goal"},
                        "goal": {"stay,idle": "goal"}, "bad": {"stay,idle": "bad"}},
    }


def m1() -> GameModel:
    return _model(m1_doc())


def m2() -> GameModel:
    return _model(m2_doc())


def m3(shared: bool = False) -> GameModel:
    return _model(m3_doc(shared))


def m3_two_step() -> GameModel:
    return _model(m3_two_step_doc())


def chain() -> GameModel:
    return _model(chain_doc())


def blocker() -> GameModel:
    return _model(blocker_doc())


def m2_release(b: int) -> str:
    return f"<{{1}}:[1=({b})]> (false R p)"


M3_NEXT = "<{1}:[1=(1)]> X p"
M3_TWO_STEP_UNTIL = "<{1}:[1=(2)]> (q U p)"
CHAIN_DOWN = "<{1}|{} down> X <{1}|{} down> X p"

DOCS = {
    "m1": m1_doc,
    "m2": m2_doc,
    "m3": m3_doc,
    "m3_shared": lambda: m3_doc(shared=True),
    "m3_two_step": m3_two_step_doc,
    "chain": chain_doc,
    "blocker": blocker_doc,
}
