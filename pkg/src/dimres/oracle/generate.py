"""Seeded random models, formulas and endowments for differential testing."""
from __future__ import annotations

import itertools
import random
import string
from dataclasses import dataclass, fields

from ..formula import (FALSE, TRUE, Allocation, And, Formula, Next, Not, Or, Prop,
                       RalNext, RalRelease, RalUntil, Release, Until, coalition)
from ..model import GameModel, ensure_valid

PROPOSITIONS = ("p", "q")


@dataclass(frozen=True)
class GenParams:
    seed: int = 0
    max_states: int = 4
    max_agents: int = 2
    max_actions_per_agent: int = 2
    max_resources: int = 2
    max_cost_magnitude: int = 2
    max_bound: int = 3
    indist_probability: float = 0.5
    force_production: bool = False

    def __post_init__(self):
        for f in fields(self):
            if f.name.startswith("max_") and getattr(self, f.name) < 1:
                raise ValueError(f"{f.name} must be at least 1")
        if not 0.0 <= self.indist_probability <= 1.0:
            raise ValueError("indist_probability must lie in [0, 1]")

    def describe(self) -> str:
        return ",".join(f"{f.name}={getattr(self, f.name)}" for f in fields(self)
                        if f.name != "seed")


def _partition(rng, states):
    labels = [rng.randrange(len(states)) for _ in states]
    blocks = {}
    for s, k in zip(states, labels):
        blocks.setdefault(k, []).append(s)
    return [frozenset(b) for _, b in sorted(blocks.items())]


def random_model(params: GenParams) -> GameModel:
    """A valid model drawn deterministically from ``params.seed``."""
    rng = random.Random(params.seed)
    n_states = rng.randint(1, params.max_states)
    n_agents = rng.randint(1, params.max_agents)
    n_res = rng.randint(1, params.max_resources)
    if params.force_production and params.max_resources >= 2:
        n_res = max(n_res, 2)
    agents = tuple(str(i + 1) for i in range(n_agents))
    resources = tuple(f"r{i}" for i in range(n_res))
    states = tuple(f"s{i}" for i in range(n_states))
    alphabet = string.ascii_lowercase[:params.max_actions_per_agent + 1]

    indist = {}
    if rng.random() < params.indist_probability:
        for a in agents:
            indist[a] = tuple(_partition(rng, states))

    actions = {s: {} for s in states}
    for a in agents:
        blocks = indist.get(a) or [frozenset([s]) for s in states]
        for block in blocks:
            k = rng.randint(1, params.max_actions_per_agent)
            acts = tuple(sorted(rng.sample(alphabet, k)))
            for s in sorted(block):
                actions[s][a] = acts

    m = params.max_cost_magnitude
    costs = {}
    for s in states:
        used = sorted({act for acts in actions[s].values() for act in acts})
        costs[s] = {act: (-rng.randint(1, m),) + tuple(rng.randint(-m, m)
                                                        for _ in range(n_res - 1))
                    for act in used}
    if params.force_production and n_res >= 2:
        s = states[0]
        act = next(iter(costs[s]))
        vec = list(costs[s][act])
        vec[1] = rng.randint(1, m)
        costs[s][act] = tuple(vec)

    transitions = {}
    for s in states:
        profiles = itertools.product(*(actions[s][a] for a in agents))
        transitions[s] = {prof: rng.choice(states) for prof in profiles}

    props = {p: frozenset(s for s in states if rng.random() < 0.5) for p in PROPOSITIONS}
    model = GameModel(agents, resources, states, props, actions, costs, transitions, indist)
    return ensure_valid(model)


def random_allocation(rng: random.Random, agents, n_res: int, max_bound: int) -> Allocation:
    return Allocation.of({a: tuple(rng.randint(0, max_bound) for _ in range(n_res))
                          for a in agents})


def _atom(rng) -> Formula:
    roll = rng.random()
    if roll < 0.05:
        return TRUE
    if roll < 0.1:
        return FALSE
    return Prop(rng.choice(PROPOSITIONS))


def _subset(rng, agents, allow_empty=False):
    while True:
        chosen = [a for a in agents if rng.random() < 0.5]
        if chosen or allow_empty:
            return coalition(chosen)


def _random(rng, model, nesting, max_bound, fam, top, bools=2) -> Formula:
    roll = rng.random()
    if nesting > 0 and (top or roll < 0.45):
        kind = rng.choice("XUR")
        coal = _subset(rng, model.agents)

        def inner():
            return _random(rng, model, nesting - 1, max_bound, fam, False, 1)

        if fam == "rb":
            bound = random_allocation(rng, coal, model.n_resources, max_bound)
            if kind == "X":
                return Next(coal, bound, inner())
            return (Until if kind == "U" else Release)(coal, bound, inner(), inner())
        opps = _subset(rng, model.agents, allow_empty=True)
        if rng.random() < 0.7:
            opps = tuple(a for a in opps if a not in coal)
        endow = (None if rng.random() < 0.5
                 else random_allocation(rng, model.agents, model.n_resources, max_bound))
        if kind == "X":
            return RalNext(coal, opps, endow, inner())
        return (RalUntil if kind == "U" else RalRelease)(coal, opps, endow, inner(), inner())
    if bools > 0 and roll < 0.75:
        op = rng.choice((Not, And, Or))
        if op is Not:
            return Not(_random(rng, model, nesting, max_bound, fam, top, bools - 1))
        return op(_random(rng, model, nesting, max_bound, fam, top, bools - 1),
                  _random(rng, model, nesting, max_bound, fam, False, bools - 1))
    return _atom(rng)


def random_rb_formula(rng: random.Random, model: GameModel, max_bound: int = 3,
                      nesting: int = 2) -> Formula:
    """An RB+-ATL# formula with at most ``nesting`` nested modalities."""
    return _random(rng, model, nesting, max_bound, "rb", True)


def random_ral_formula(rng: random.Random, model: GameModel, max_bound: int = 3,
                       nesting: int = 2) -> Formula:
    return _random(rng, model, nesting, max_bound, "ral", True)


def translate_to_ral(phi: Formula, agents) -> Formula:
    """RB+-ATL# formula as a RAL# formula with fresh endowments and no opponents.

    Agents outside the coalition get zero endowment; their resources never
    change, so the choice does not matter.
    """
    if isinstance(phi, (Next, Until, Release)):
        vecs = phi.bound.as_dict()
        width = len(next(iter(vecs.values())))
        endow = Allocation.of({a: vecs.get(a, (0,) * width) for a in agents})
        if isinstance(phi, Next):
            return RalNext(phi.coalition, (), endow, translate_to_ral(phi.sub, agents))
        cls = RalUntil if isinstance(phi, Until) else RalRelease
        return cls(phi.coalition, (), endow, translate_to_ral(phi.left, agents),
                   translate_to_ral(phi.right, agents))
    if isinstance(phi, Not):
        return Not(translate_to_ral(phi.sub, agents))
    if isinstance(phi, (And, Or)):
        return type(phi)(translate_to_ral(phi.left, agents), translate_to_ral(phi.right, agents))
    return phi
