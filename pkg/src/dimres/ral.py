"""RAL# model checking: endowment-threaded recursive strategy search.

Truth is relative to a state and an endowment, so there is no global
labelling.  Every node carries the full endowment; agents outside the
current proponents and opponents keep theirs frozen.  Down-arrow
modalities continue with the resources at hand, endowment-annotated ones
start from the given endowment.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .formula import (Allocation, And, Const, Formula, Not, Or, Prop, RalNext,
                      RalRelease, RalUntil, RAL_MODALITIES)
from .model import GameModel, ModelError, Vector, affordable, vec_add, vec_le, vec_sub
from .perfect import QueryError, SearchStats, check_query


@dataclass(frozen=True, eq=False)
class RalNode:
    state: str
    parent: Optional["RalNode"]
    incoming: Optional[tuple[str, ...]]  # full action profile, model agent order
    avail: tuple[Vector, ...]  # one vector per model agent
    proponents: tuple[str, ...] = ()
    opponents: tuple[str, ...] = ()
    depth: int = 1


def node0(state, avail, proponents=(), opponents=()) -> RalNode:
    return RalNode(state, None, None, tuple(avail), tuple(proponents), tuple(opponents))


class RalChecker:
    """Evaluates RAL# formulas on one model; collects search statistics."""

    def __init__(self, model: GameModel, stats: Optional[SearchStats] = None):
        self.model = model
        self.stats = stats if stats is not None else SearchStats()
        self.index = {a: i for i, a in enumerate(model.agents)}

    def endowment_vectors(self, eta: Allocation | Mapping) -> tuple[Vector, ...]:
        try:
            return tuple(tuple(eta[a]) for a in self.model.agents)
        except KeyError as exc:
            raise QueryError(f"endowment does not cover agent {exc.args[0]}") from None

    # -- formula dispatch ----------------------------------------------------

    def strategy(self, n: RalNode, phi: Formula) -> bool:
        if isinstance(phi, Const):
            return phi.value
        if isinstance(phi, Prop):
            return n.state in self.model.holds(phi.name)
        if isinstance(phi, (Not, Or, And)):
            # connectives re-root at the current state with the current resources
            fresh = node0(n.state, n.avail, n.proponents, n.opponents)
            if isinstance(phi, Not):
                return not self.strategy(fresh, phi.sub)
            if isinstance(phi, Or):
                return self.strategy(fresh, phi.left) or self.strategy(fresh, phi.right)
            return self.strategy(fresh, phi.left) and self.strategy(fresh, phi.right)
        if isinstance(phi, RAL_MODALITIES):
            avail = n.avail if phi.endowment is None else self.endowment_vectors(phi.endowment)
            root = node0(n.state, avail, self.model.order(phi.coalition),
                         self.model.order(phi.opponents))
            if isinstance(phi, RalNext):
                return self.next(root, phi)
            if isinstance(phi, RalUntil):
                return self.until(root, phi)
            return self.release(root, phi)
        raise QueryError(f"formula {phi} is not a RAL# formula")

    # -- one step ------------------------------------------------------------

    def _limit(self, n: RalNode) -> int:
        members = set(n.proponents) | set(n.opponents)
        return min(n.avail[self.index[a]][0] for a in members) + 1

    def proponent_choices(self, n: RalNode):
        """Affordable proponent actions, each with its opponent-affordable completions."""
        model, idx = self.model, self.index
        own_avail = tuple(n.avail[idx[a]] for a in n.proponents)
        opp_pos = [idx[a] for a in n.opponents]
        profiles = [m.joint.actions for m in model.moves(n.state, model.agents)]
        prop_pos = [idx[a] for a in n.proponents]
        choices = []
        for move in model.moves(n.state, n.proponents):
            if not affordable(move.cons, own_avail):
                continue
            own = move.joint.actions
            completions = [
                prof for prof in profiles
                if tuple(prof[i] for i in prop_pos) == own
                and all(vec_le(_cons(model, n.state, prof[i]), n.avail[i]) for i in opp_pos)
            ]
            choices.append((own, completions))
        return choices

    def has_unaffordable(self, n: RalNode) -> bool:
        model = self.model
        return any(not vec_le(_cons(model, n.state, act), n.avail[self.index[a]])
                   for a in n.proponents for act in model.available(n.state, a))

    def successor(self, n: RalNode, profile: tuple[str, ...]) -> RalNode:
        model = self.model
        members = set(n.proponents) | set(n.opponents)
        avail = []
        for a, act, vec in zip(model.agents, profile, n.avail):
            if a in members:
                cost = model.cost(n.state, act)
                cons = tuple(-min(0, x) for x in cost)
                prod = tuple(max(0, x) for x in cost)
                vec = vec_add(vec_sub(vec, cons), prod)
            avail.append(vec)
        target = model.transitions[n.state][profile]
        return RalNode(target, n, profile, tuple(avail), n.proponents, n.opponents,
                       n.depth + 1)

    def _visit(self, n: RalNode, root_limit: int) -> None:
        self.stats.visit(n, root_limit)

    # -- temporal operators --------------------------------------------------

    def next(self, n: RalNode, phi: RalNext) -> bool:
        self._visit(n, self._limit(n))
        for _, completions in self.proponent_choices(n):
            # no affordable completion: the computation ends here, so Next fails
            if completions and all(self.strategy(self.successor(n, prof), phi.sub)
                                   for prof in completions):
                return True
        return False

    def until(self, n: RalNode, phi: RalUntil, limit: Optional[int] = None) -> bool:
        limit = limit if limit is not None else self._limit(n)
        self._visit(n, limit)
        if self.strategy(n, phi.right):
            return True
        if not self.strategy(n, phi.left):
            return False
        for _, completions in self.proponent_choices(n):
            if completions and all(self.until(self.successor(n, prof), phi, limit)
                                   for prof in completions):
                return True
        return False

    def release(self, n: RalNode, phi: RalRelease, limit: Optional[int] = None) -> bool:
        limit = limit if limit is not None else self._limit(n)
        self._visit(n, limit)
        if not self.strategy(n, phi.right):
            return False
        if self.strategy(n, phi.left):
            return True
        if self.has_unaffordable(n):
            return True
        for _, completions in self.proponent_choices(n):
            # an empty completion set ends the computation while the invariant holds
            if all(self.release(self.successor(n, prof), phi, limit)
                   for prof in completions):
                return True
        return False

    def check(self, phi: Formula, eta) -> frozenset[str]:
        check_query(self.model, phi, "ral")
        avail = self.endowment_vectors(eta)
        for a, vec in zip(self.model.agents, avail):
            if len(vec) != self.model.n_resources or any(x < 0 for x in vec):
                raise QueryError(f"endowment of agent {a} must be {self.model.n_resources} "
                                 f"natural numbers")
        pr = op = ()
        if isinstance(phi, RAL_MODALITIES):
            pr, op = self.model.order(phi.coalition), self.model.order(phi.opponents)
        return frozenset(s for s in self.model.states
                         if self.strategy(node0(s, avail, pr, op), phi))


def _cons(model, state, action):
    return tuple(-min(0, x) for x in model.cost(state, action))


def ral_check(model: GameModel, phi: Formula, eta,
              stats: Optional[SearchStats] = None) -> frozenset[str]:
    """States satisfying ``phi`` under the initial endowment ``eta``."""
    return RalChecker(model, stats).check(phi, eta)


def strategy(model: GameModel, n: RalNode, phi: Formula,
             stats: Optional[SearchStats] = None) -> bool:
    return RalChecker(model, stats).strategy(n, phi)


__all__ = ["ModelError", "QueryError", "RalChecker", "RalNode", "node0", "ral_check",
           "strategy"]
