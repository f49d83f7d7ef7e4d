"""RB+-ATL# model checking under perfect information.

Global bottom-up labelling; Next uses the one-step ``pre`` operator, Until
and Release run a depth-first and-or search over search nodes that track
the coalition's remaining resources.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .formula import (And, Const, Formula, Next, Not, Or, Prop, Release, Until,
                      family, subformulas, to_text, validate_formula)
from .model import (GameModel, JointAction, ModelError, Vector, affordable, pre,
                    vec_add, vec_sub)

LabelMap = dict[Formula, frozenset[str]]


class QueryError(ValueError):
    """The formula cannot be checked against the model by this engine."""


@dataclass(frozen=True, eq=False)
class SearchNode:
    """A node of the and-or search tree.

    ``avail`` holds one vector per coalition member (coalition order);
    ``depth`` counts the nodes on the branch including this one.
    """

    state: str
    parent: Optional["SearchNode"]
    incoming: Optional[JointAction]
    avail: tuple[Vector, ...]
    depth: int = 1
    runout: bool = False

    @cached_property
    def path(self) -> tuple["SearchNode", ...]:
        if self.parent is None:
            return ()
        return self.parent.path + (self.parent,)

    @cached_property
    def trace(self) -> tuple[str, ...]:
        """States from the root up to and including this node."""
        if self.parent is None:
            return (self.state,)
        return self.parent.trace + (self.state,)

    @cached_property
    def choices(self) -> tuple[tuple[str, ...], ...]:
        """Coalition actions taken at each position of :attr:`trace` but the last."""
        if self.parent is None:
            return ()
        return self.parent.choices + (self.incoming.actions,)


def node0(state: str, avail: tuple[Vector, ...]) -> SearchNode:
    return SearchNode(state, None, None, tuple(avail))


def child(n: SearchNode, move, target: str) -> SearchNode:
    avail = tuple(vec_add(vec_sub(e, c), p)
                  for e, c, p in zip(n.avail, move.cons, move.prod))
    return SearchNode(target, n, move.joint, avail, n.depth + 1)


@dataclass
class SearchStats:
    """Counters collected while searching; ``*_violations`` must stay zero."""

    max_depth: int = 0
    nodes_expanded: int = 0
    depth_violations: int = 0
    max_closed: int = 0
    closed_violations: int = 0

    def visit(self, node, depth_limit: int) -> None:
        self.nodes_expanded += 1
        if node.depth > self.max_depth:
            self.max_depth = node.depth
        if node.depth > depth_limit:
            self.depth_violations += 1

    def as_dict(self) -> dict:
        return {"max_depth": self.max_depth, "nodes_expanded": self.nodes_expanded}


def budget(model: GameModel, coal: tuple[str, ...], bound) -> tuple[Vector, ...]:
    return tuple(tuple(bound[a]) for a in coal)


def depth_limit(avail: tuple[Vector, ...]) -> int:
    """Largest number of nodes a branch can hold: min first-resource budget + 1."""
    return min(v[0] for v in avail) + 1


def runout_available(moves, avail) -> bool:
    """Whether some joint action is too expensive for the current resources."""
    return any(not affordable(m.cons, avail) for m in moves)


def until_strategy(model: GameModel, n: SearchNode, coal, phi_states, psi_states,
                   stats: Optional[SearchStats] = None, limit: Optional[int] = None) -> bool:
    """Does the coalition have a strategy from ``n`` enforcing phi U psi?"""
    stats = stats if stats is not None else SearchStats()
    limit = limit if limit is not None else depth_limit(n.avail)
    stats.visit(n, limit)
    if n.state in psi_states:
        return True
    if n.state not in phi_states:
        return False
    for move in model.moves(n.state, coal):
        if not affordable(move.cons, n.avail):
            continue
        if all(until_strategy(model, child(n, move, t), coal, phi_states, psi_states,
                              stats, limit)
               for t in move.outcomes):
            return True
    return False


def release_strategy(model: GameModel, n: SearchNode, coal, phi_states, psi_states,
                     stats: Optional[SearchStats] = None, limit: Optional[int] = None) -> bool:
    """Does the coalition have a strategy from ``n`` enforcing phi R psi?"""
    stats = stats if stats is not None else SearchStats()
    limit = limit if limit is not None else depth_limit(n.avail)
    stats.visit(n, limit)
    in_psi = n.state in psi_states
    if in_psi and n.state in phi_states:
        return True
    moves = model.moves(n.state, coal)
    if in_psi and runout_available(moves, n.avail):
        return True
    if not in_psi:
        return False
    for move in moves:
        if not affordable(move.cons, n.avail):
            continue
        if all(release_strategy(model, child(n, move, t), coal, phi_states, psi_states,
                                stats, limit)
               for t in move.outcomes):
            return True
    return False


def check_query(model: GameModel, phi: Formula, expected_family: str) -> None:
    diags = validate_formula(phi, model)
    fam = family(phi)
    if fam not in ("prop", expected_family):
        diags.append(f"formula family {fam!r} cannot be checked by this engine")
    if diags:
        raise QueryError("; ".join(diags))


def label_boolean(model: GameModel, phi: Formula, labels: LabelMap) -> frozenset[str]:
    states = frozenset(model.states)
    if isinstance(phi, Const):
        return states if phi.value else frozenset()
    if isinstance(phi, Prop):
        return model.holds(phi.name)
    if isinstance(phi, Not):
        return states - labels[phi.sub]
    if isinstance(phi, Or):
        return labels[phi.left] | labels[phi.right]
    if isinstance(phi, And):
        return labels[phi.left] & labels[phi.right]
    raise TypeError(f"not a boolean formula: {to_text(phi)}")


def label(model: GameModel, phi0: Formula,
          stats: Optional[SearchStats] = None) -> LabelMap:
    """Label every state with every subformula of ``phi0``."""
    check_query(model, phi0, "rb")
    stats = stats if stats is not None else SearchStats()
    labels: LabelMap = {}
    for phi in subformulas(phi0):
        if isinstance(phi, Next):
            coal = model.order(phi.coalition)
            b = budget(model, coal, phi.bound)
            limit = depth_limit(b)
            for s in model.states:
                stats.visit(node0(s, b), limit)
            labels[phi] = pre(model, coal, labels[phi.sub], phi.bound)
        elif isinstance(phi, (Until, Release)):
            coal = model.order(phi.coalition)
            b = budget(model, coal, phi.bound)
            search = until_strategy if isinstance(phi, Until) else release_strategy
            left, right = labels[phi.left], labels[phi.right]
            labels[phi] = frozenset(
                s for s in model.states
                if search(model, node0(s, b), coal, left, right, stats)
            )
        else:
            labels[phi] = label_boolean(model, phi, labels)
    return labels


def check(model: GameModel, phi0: Formula,
          stats: Optional[SearchStats] = None) -> frozenset[str]:
    """States satisfying ``phi0``."""
    return label(model, phi0, stats)[phi0]


__all__ = [
    "LabelMap", "ModelError", "QueryError", "SearchNode", "SearchStats", "check",
    "child", "label", "node0", "release_strategy", "runout_available", "until_strategy",
]
