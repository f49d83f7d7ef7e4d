"""Game structures with a diminishing resource.

A model is a concurrent game structure in which every action carries an
integer cost vector whose first entry (the diminishing resource) is at
most -1.  This module holds the model container, the JSON reader/writer,
structural validation and the one-step operators shared by all engines
(joint actions, outcomes, cost decomposition and ``pre``).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

Vector = tuple[int, ...]

MODEL_KEYS = (
    "agents", "resources", "states", "propositions",
    "actions", "costs", "transitions", "indist",
)


class ModelError(ValueError):
    """Raised for invalid models or invalid queries against a model."""


class ModelFormatError(ModelError):
    """The model file is not a well-formed model document."""


# -- vectors ---------------------------------------------------------------

def vec_le(u: Vector, v: Vector) -> bool:
    return all(x <= y for x, y in zip(u, v))


def vec_lt(u: Vector, v: Vector) -> bool:
    return vec_le(u, v) and tuple(u) != tuple(v)


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


# -- joint actions ---------------------------------------------------------

class JointAction(NamedTuple):
    """Actions chosen by the agents of ``coalition``, in coalition order."""

    coalition: tuple[str, ...]
    actions: tuple[str, ...]

    def action_of(self, agent: str) -> str:
        return self.actions[self.coalition.index(agent)]

    def as_dict(self) -> dict[str, str]:
        return dict(zip(self.coalition, self.actions))


class Move(NamedTuple):
    """A coalition joint action at a state with its precomputed effects.

    ``cons`` and ``prod`` hold one vector per coalition member.
    """

    joint: JointAction
    cons: tuple[Vector, ...]
    prod: tuple[Vector, ...]
    outcomes: tuple[str, ...]


@dataclass(frozen=True, eq=False)
class GameModel:
    agents: tuple[str, ...]
    resources: tuple[str, ...]
    states: tuple[str, ...]
    propositions: Mapping[str, frozenset[str]]
    actions: Mapping[str, Mapping[str, tuple[str, ...]]]
    costs: Mapping[str, Mapping[str, Vector]]
    transitions: Mapping[str, Mapping[tuple[str, ...], str]]
    indist: Mapping[str, tuple[frozenset[str], ...]] = field(default_factory=dict)

    def __post_init__(self):
        classes = {}
        for agent in self.agents:
            ids = {}
            for k, block in enumerate(self.indist.get(agent, ())):
                for s in block:
                    ids.setdefault(s, k)
            # states missing from a partition form their own class
            nxt = len(self.indist.get(agent, ()))
            for s in self.states:
                if s not in ids:
                    ids[s] = nxt
                    nxt += 1
            classes[agent] = ids
        object.__setattr__(self, "_class_ids", classes)
        object.__setattr__(self, "_state_index", {s: i for i, s in enumerate(self.states)})
        object.__setattr__(self, "_moves", {})

    @property
    def n_resources(self) -> int:
        return len(self.resources)

    def available(self, state: str, agent: str) -> tuple[str, ...]:
        return tuple(self.actions.get(state, {}).get(agent, ()))

    def cost(self, state: str, action: str) -> Vector:
        try:
            return tuple(self.costs[state][action])
        except KeyError:
            raise ModelError(f"unknown action cost at ({state}, {action})") from None

    def holds(self, prop: str) -> frozenset[str]:
        return self.propositions.get(prop, frozenset())

    def order(self, agents: Iterable[str]) -> tuple[str, ...]:
        """Sort ``agents`` by declaration order."""
        wanted = set(agents)
        unknown = wanted.difference(self.agents)
        if unknown:
            raise ModelError(f"unknown agents: {sorted(unknown)}")
        return tuple(a for a in self.agents if a in wanted)

    def sort_states(self, states: Iterable[str]) -> tuple[str, ...]:
        idx = self._state_index
        return tuple(sorted(set(states), key=idx.__getitem__))

    def class_id(self, agent: str, state: str) -> int:
        return self._class_ids[agent][state]

    def indistinguishable(self, agent: str, s: str, t: str) -> bool:
        ids = self._class_ids[agent]
        return ids[s] == ids[t]

    def indist_class(self, agent: str, state: str) -> tuple[str, ...]:
        k = self._class_ids[agent][state]
        return tuple(s for s in self.states if self._class_ids[agent][s] == k)

    def has_identity_indist(self) -> bool:
        return all(len(set(ids.values())) == len(self.states)
                   for ids in self._class_ids.values())

    def moves(self, state: str, coalition: tuple[str, ...]) -> tuple[Move, ...]:
        """All joint actions of ``coalition`` at ``state`` with costs and outcomes.

        ``coalition`` must already be in declaration order.  Results are cached;
        the model is treated as immutable.
        """
        key = (state, coalition)
        hit = self._moves.get(key)
        if hit is not None:
            return hit
        if not coalition:
            raise ModelError("empty coalition rejected")
        positions = [self.agents.index(a) for a in coalition]
        table = self.transitions.get(state, {})
        moves = []
        for joint in itertools.product(*(self.available(state, a) for a in coalition)):
            cons, prod = [], []
            for act in joint:
                c, p = _split(self.cost(state, act))
                cons.append(c)
                prod.append(p)
            reached = set()
            for full, target in table.items():
                if all(full[i] == act for i, act in zip(positions, joint)):
                    reached.add(target)
            moves.append(Move(JointAction(coalition, joint), tuple(cons),
                              tuple(prod), self.sort_states(reached)))
        result = tuple(moves)
        self._moves[key] = result
        return result

    # -- (de)serialisation ---------------------------------------------------

    @classmethod
    def from_dict(cls, data: Mapping) -> "GameModel":
        if not isinstance(data, Mapping):
            raise ModelFormatError("model document must be a JSON object")
        unknown = sorted(set(data) - set(MODEL_KEYS))
        if unknown:
            raise ModelFormatError(f"unknown keys: {', '.join(unknown)}")
        missing = [k for k in MODEL_KEYS[:-1] if k not in data]
        if missing:
            raise ModelFormatError(f"missing keys: {', '.join(missing)}")
        try:
            agents = tuple(_str_list(data["agents"], "agents"))
            resources = tuple(_str_list(data["resources"], "resources"))
            states = tuple(_str_list(data["states"], "states"))
            props = {str(p): frozenset(_str_list(ss, f"propositions.{p}"))
                     for p, ss in _obj(data["propositions"], "propositions").items()}
            actions = {
                s: {a: tuple(_str_list(acts, f"actions.{s}.{a}"))
                    for a, acts in _obj(per, f"actions.{s}").items()}
                for s, per in _obj(data["actions"], "actions").items()
            }
            costs = {
                s: {act: tuple(_int_list(vec, f"costs.{s}.{act}"))
                    for act, vec in _obj(per, f"costs.{s}").items()}
                for s, per in _obj(data["costs"], "costs").items()
            }
            transitions = {
                s: {tuple(k.split(",")): str(t)
                    for k, t in _obj(per, f"transitions.{s}").items()}
                for s, per in _obj(data["transitions"], "transitions").items()
            }
            indist = {
                a: tuple(frozenset(_str_list(block, f"indist.{a}"))
                         for block in _list(blocks, f"indist.{a}"))
                for a, blocks in _obj(data.get("indist", {}), "indist").items()
            }
        except (TypeError, AttributeError) as exc:
            raise ModelFormatError(str(exc)) from None
        return cls(agents, resources, states, props, actions, costs, transitions, indist)

    def to_dict(self) -> dict:
        out = {
            "agents": list(self.agents),
            "resources": list(self.resources),
            "states": list(self.states),
            "propositions": {p: list(self.sort_states(ss))
                             for p, ss in sorted(self.propositions.items())},
            "actions": {s: {a: list(acts) for a, acts in per.items()}
                        for s, per in self.actions.items()},
            "costs": {s: {act: list(v) for act, v in per.items()}
                      for s, per in self.costs.items()},
            "transitions": {s: {",".join(k): t for k, t in per.items()}
                            for s, per in self.transitions.items()},
        }
        if self.indist:
            out["indist"] = {a: [list(self.sort_states(b)) for b in blocks]
                             for a, blocks in self.indist.items()}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _obj(value, where):
    if not isinstance(value, Mapping):
        raise ModelFormatError(f"{where}: expected an object")
    return value


def _list(value, where):
    if not isinstance(value, list):
        raise ModelFormatError(f"{where}: expected an array")
    return value


def _str_list(value, where):
    items = _list(value, where)
    if not all(isinstance(x, str) for x in items):
        raise ModelFormatError(f"{where}: expected strings")
    return items


def _int_list(value, where):
    items = _list(value, where)
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in items):
        raise ModelFormatError(f"{where}: expected integers")
    return items


def load_model(path) -> GameModel:
    """Read a model file.  Raises ``OSError`` or ``ModelFormatError``."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"invalid JSON: {exc}") from None
    return GameModel.from_dict(data)


# -- validation ------------------------------------------------------------

def validate_model(model: GameModel) -> list[str]:
    """Return one diagnostic per violated model invariant (empty if valid)."""
    diags = []
    if not model.agents:
        diags.append("no agents declared")
    if not model.resources:
        diags.append("no resources declared (the first one is the diminishing resource)")
    if not model.states:
        diags.append("no states declared")
    for what, names in (("agent", model.agents), ("resource", model.resources),
                        ("state", model.states)):
        if len(set(names)) != len(names):
            diags.append(f"duplicate {what} names")
    states = set(model.states)
    r = len(model.resources)

    for p, ss in model.propositions.items():
        for s in sorted(ss - states):
            diags.append(f"proposition {p} refers to unknown state {s}")
    for s in sorted(set(model.actions) - states):
        diags.append(f"actions declared for unknown state {s}")

    for s in model.states:
        per = model.actions.get(s, {})
        for a in sorted(set(per) - set(model.agents)):
            diags.append(f"actions declared for unknown agent {a} at {s}")
        used = set()
        for a in model.agents:
            acts = per.get(a, ())
            if not acts:
                diags.append(f"empty action set at ({s}, {a})")
            if len(set(acts)) != len(acts):
                diags.append(f"duplicate actions at ({s}, {a})")
            used.update(acts)
        costs = model.costs.get(s, {})
        for act in sorted(used):
            vec = costs.get(act)
            if vec is None:
                diags.append(f"missing cost for ({s}, {act})")
                continue
            if len(vec) != r:
                diags.append(f"cost vector length {len(vec)} != {r} at ({s}, {act})")
            if vec and vec[0] > -1:
                diags.append(f"diminishing component must be <= -1 at ({s}, {act})")
        for act in sorted(set(costs) - used):
            diags.append(f"cost given for unavailable action ({s}, {act})")

        profiles = set(itertools.product(*(per.get(a, ()) for a in model.agents)))
        table = model.transitions.get(s, {})
        for prof in sorted(profiles - set(table)):
            diags.append(f"missing transition at ({s}, {','.join(prof)})")
        for prof in sorted(set(table) - profiles):
            diags.append(f"transition for unavailable joint action ({s}, {','.join(prof)})")
        for prof, target in sorted(table.items()):
            if target not in states:
                diags.append(f"transition to unknown state {target} at ({s}, {','.join(prof)})")
    for s in sorted(set(model.transitions) - states):
        diags.append(f"transitions declared for unknown state {s}")

    for a, blocks in model.indist.items():
        if a not in model.agents:
            diags.append(f"indistinguishability given for unknown agent {a}")
            continue
        seen = set()
        for block in blocks:
            if not block:
                diags.append(f"empty indistinguishability class for {a}")
            if block & seen:
                diags.append(f"indistinguishability classes of {a} overlap")
            for s in sorted(block - states):
                diags.append(f"indistinguishability of {a} refers to unknown state {s}")
            seen |= block
        for s in model.states:
            if s not in seen:
                diags.append(f"indistinguishability of {a} does not cover state {s}")
        for s in model.states:
            for t in model.states:
                if (s < t and model.indistinguishable(a, s, t)
                        and set(model.available(s, a)) != set(model.available(t, a))):
                    diags.append(f"agent {a} has different actions at indistinguishable "
                                 f"states {s} and {t}")
    return diags


def ensure_valid(model: GameModel) -> GameModel:
    diags = validate_model(model)
    if diags:
        raise ModelError("; ".join(diags))
    return model


# -- one-step operators ----------------------------------------------------

def _split(vec: Vector) -> tuple[Vector, Vector]:
    return tuple(-min(0, x) for x in vec), tuple(max(0, x) for x in vec)


def decompose_cost(model: GameModel, state: str, action: str) -> tuple[Vector, Vector]:
    """Split a cost vector into (consumed, produced), both non-negative."""
    return _split(model.cost(state, action))


def joint_actions(model: GameModel, state: str, coalition: Iterable[str]) -> list[JointAction]:
    coal = model.order(coalition)
    if not coal:
        raise ModelError("empty coalition rejected")
    return [m.joint for m in model.moves(state, coal)]


def _find_move(model, state, joint) -> Move:
    if isinstance(joint, Mapping):
        coal = model.order(joint)
        joint = JointAction(coal, tuple(joint[a] for a in coal))
    for move in model.moves(state, model.order(joint.coalition)):
        if move.joint.as_dict() == joint.as_dict():
            return move
    raise ModelError(f"action unavailable at {state}: {joint.as_dict()}")


def outcomes(model: GameModel, state: str, joint) -> tuple[str, ...]:
    """States reachable from ``state`` by completions of ``joint``.

    ``joint`` is a :class:`JointAction` or a mapping agent -> action.
    """
    return _find_move(model, state, joint).outcomes


def affordable(cons: tuple[Vector, ...], avail: tuple[Vector, ...]) -> bool:
    return all(vec_le(c, e) for c, e in zip(cons, avail))


def pre(model: GameModel, coalition: Iterable[str], target: Iterable[str],
        bound: Mapping[str, Vector]) -> frozenset[str]:
    """States where the coalition has an action within ``bound`` forcing ``target``."""
    coal = model.order(coalition)
    if not coal:
        raise ModelError("empty coalition rejected")
    budget = tuple(tuple(bound[a]) for a in coal)
    target = frozenset(target)
    return frozenset(
        s for s in model.states
        if any(affordable(m.cons, budget) and target.issuperset(m.outcomes)
               for m in model.moves(s, coal))
    )
