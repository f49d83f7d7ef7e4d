"""RB+-ATL# under imperfect information with perfect recall.

Strategies must be strongly uniform: an agent picks the same action after
histories it cannot tell apart, and the strategy has to work from every
initial state some coalition member confuses with the evaluated one.

The search keeps an open list of pending nodes (a stack) and a closed set
of the branches that already succeeded.  An action is admissible at a node
only if, for every coalition member, it agrees with the action recorded on
each closed branch whose prefix the member cannot distinguish from the
node's history.  The closed set is threaded through the recursion by value,
so a failed alternative takes its commitments with it.
"""
from __future__ import annotations

import sys
from typing import Iterator, Optional, Sequence

from .formula import Formula, Next, Release, Until, subformulas
from .model import GameModel, affordable
from .perfect import (LabelMap, SearchNode, SearchStats, budget, check_query, child,
                      depth_limit, label_boolean, node0)

_RECURSION_FLOOR = 20000


class ClosedSet:
    """Persistent set of closed nodes; ``add`` returns a new set."""

    __slots__ = ("node", "rest", "size")

    def __init__(self, node: Optional[SearchNode] = None, rest: Optional["ClosedSet"] = None):
        self.node = node
        self.rest = rest
        self.size = 0 if rest is None else rest.size + 1

    def add(self, node: SearchNode) -> "ClosedSet":
        return ClosedSet(node, self)

    def __iter__(self) -> Iterator[SearchNode]:
        c = self
        while c.rest is not None:
            yield c.node
            c = c.rest

    def __len__(self) -> int:
        return self.size


EMPTY = ClosedSet()


def seq_indist(model: GameModel, path1: Sequence, path2: Sequence, agent: str) -> bool:
    """Statewise indistinguishability of two equally long node/state sequences."""
    if len(path1) != len(path2):
        return False
    states1 = [getattr(n, "state", n) for n in path1]
    states2 = [getattr(n, "state", n) for n in path2]
    return all(model.indistinguishable(agent, s, t) for s, t in zip(states1, states2))


def initial_states(model: GameModel, coal, state: str) -> tuple[str, ...]:
    """States some coalition member cannot distinguish from ``state``."""
    return model.sort_states(t for a in coal for t in model.indist_class(a, state))


def _class_key(model, agent, trace):
    return tuple(model.class_id(agent, s) for s in trace)


def required_actions(model: GameModel, n: SearchNode, coal, closed: ClosedSet):
    """Per coalition position, the action uniformity forces at ``n``.

    Returns ``None`` when closed branches already disagree (no action fits).
    A closed node contributes the action taken right after the prefix of its
    branch that has the same length as ``n``'s history; its own incoming
    action counts as the action taken at its parent.
    """
    length = n.depth
    keys = [_class_key(model, a, n.trace) for a in coal]
    req = {}
    for c in closed:
        choices = c.choices
        if len(choices) < length:
            continue
        prefix = c.trace[:length]
        for i, a in enumerate(coal):
            if _class_key(model, a, prefix) == keys[i]:
                act = choices[length - 1][i]
                if req.setdefault(i, act) != act:
                    return None
    return req


def _compatible(move, req) -> bool:
    acts = move.joint.actions
    return all(acts[i] == act for i, act in req.items())


class _Search:
    def __init__(self, model, coal, phi_states, psi_states, stats, limit):
        self.model = model
        self.coal = coal
        self.phi = phi_states
        self.psi = psi_states
        self.stats = stats
        self.limit = limit
        self.closed_cap = len(model.states) ** limit

    def _done(self, closed):
        stats = self.stats
        stats.max_closed = max(stats.max_closed, len(closed))
        if len(closed) > self.closed_cap:
            stats.closed_violations += 1
        return closed

    def next(self, open_list, closed):
        if not open_list:
            return self._done(closed)
        n, rest = open_list[0], open_list[1:]
        self.stats.visit(n, self.limit)
        req = required_actions(self.model, n, self.coal, closed)
        if req is None:
            return None
        for move in self.model.moves(n.state, self.coal):
            if not (affordable(move.cons, n.avail) and _compatible(move, req)
                    and self.phi.issuperset(move.outcomes)):
                continue
            rep = child(n, move, move.outcomes[0])
            self.stats.visit(rep, self.limit)
            result = self.next(rest, closed.add(rep))
            if result is not None:
                return result
        return None

    def until(self, open_list, closed):
        i = 0
        while i < len(open_list):
            n = open_list[i]
            self.stats.visit(n, self.limit)
            if n.state in self.psi:
                closed = closed.add(n)
                i += 1
                continue
            if n.state not in self.phi:
                return None
            break
        else:
            return self._done(closed)
        rest = open_list[i + 1:]
        req = required_actions(self.model, n, self.coal, closed)
        if req is None:
            return None
        for move in self.model.moves(n.state, self.coal):
            if not (affordable(move.cons, n.avail) and _compatible(move, req)):
                continue
            pending = tuple(child(n, move, t) for t in move.outcomes)
            result = self.until(pending + rest, closed)
            if result is not None:
                return result
        return None

    def release(self, open_list, closed):
        i = 0
        while i < len(open_list):
            n = open_list[i]
            self.stats.visit(n, self.limit)
            if n.state not in self.psi:
                return None
            if n.state in self.phi:
                closed = closed.add(n)
                i += 1
                continue
            break
        else:
            return self._done(closed)
        rest = open_list[i + 1:]
        req = required_actions(self.model, n, self.coal, closed)
        if req is None:
            return None
        for move in self.model.moves(n.state, self.coal):
            if not _compatible(move, req):
                continue
            if affordable(move.cons, n.avail):
                pending = tuple(child(n, move, t) for t in move.outcomes)
                result = self.release(pending + rest, closed)
            else:
                # run out of resources here; record the action for uniformity
                phantom = SearchNode(move.outcomes[0], n, move.joint, n.avail,
                                     n.depth + 1, runout=True)
                result = self.release(rest, closed.add(phantom))
            if result is not None:
                return result
        return None


def _searcher(model, open_list, coal, phi_states, psi_states, stats):
    if sys.getrecursionlimit() < _RECURSION_FLOOR:
        sys.setrecursionlimit(_RECURSION_FLOOR)
    stats = stats if stats is not None else SearchStats()
    limit = max((depth_limit(n.avail) for n in open_list), default=1)
    return _Search(model, tuple(coal), frozenset(phi_states),
                   frozenset(psi_states or ()), stats, limit)


def search_next(model, open_list, closed, coal, phi_states, stats=None):
    """Run the Next search; the final closed set on success, else ``None``."""
    return _searcher(model, open_list, coal, phi_states, None, stats).next(
        tuple(open_list), closed)


def search_until(model, open_list, closed, coal, phi_states, psi_states, stats=None):
    return _searcher(model, open_list, coal, phi_states, psi_states, stats).until(
        tuple(open_list), closed)


def search_release(model, open_list, closed, coal, phi_states, psi_states, stats=None):
    return _searcher(model, open_list, coal, phi_states, psi_states, stats).release(
        tuple(open_list), closed)


def next_i(model, open_list, closed, coal, phi_states, stats=None) -> bool:
    return search_next(model, open_list, closed, coal, phi_states, stats) is not None


def until_i(model, open_list, closed, coal, phi_states, psi_states, stats=None) -> bool:
    return search_until(model, open_list, closed, coal, phi_states, psi_states,
                        stats) is not None


def release_i(model, open_list, closed, coal, phi_states, psi_states, stats=None) -> bool:
    return search_release(model, open_list, closed, coal, phi_states, psi_states,
                          stats) is not None


def search_modality(model: GameModel, phi: Formula, state: str, labels: LabelMap,
                    stats: Optional[SearchStats] = None) -> Optional[ClosedSet]:
    """Closed set of a successful uniform search for ``phi`` at ``state``."""
    coal = model.order(phi.coalition)
    b = budget(model, coal, phi.bound)
    roots = [node0(t, b) for t in initial_states(model, coal, state)]
    if isinstance(phi, Next):
        return search_next(model, roots, EMPTY, coal, labels[phi.sub], stats)
    search = search_until if isinstance(phi, Until) else search_release
    return search(model, roots, EMPTY, coal, labels[phi.left], labels[phi.right], stats)


def label_i(model: GameModel, phi0: Formula,
            stats: Optional[SearchStats] = None) -> LabelMap:
    """Label every state with every subformula under strong uniformity."""
    check_query(model, phi0, "rb")
    stats = stats if stats is not None else SearchStats()
    labels: LabelMap = {}
    for phi in subformulas(phi0):
        if isinstance(phi, (Next, Until, Release)):
            coal = model.order(phi.coalition)
            by_roots = {}  # the search depends only on the initial open list
            holding = set()
            for s in model.states:
                roots = initial_states(model, coal, s)
                if roots not in by_roots:
                    by_roots[roots] = search_modality(model, phi, s, labels, stats) is not None
                if by_roots[roots]:
                    holding.add(s)
            labels[phi] = frozenset(holding)
        else:
            labels[phi] = label_boolean(model, phi, labels)
    return labels


def check_i(model: GameModel, phi0: Formula,
            stats: Optional[SearchStats] = None) -> frozenset[str]:
    return label_i(model, phi0, stats)[phi0]


def audit_uniformity(model: GameModel, coal, closed: ClosedSet) -> list[str]:
    """Pairs of closed branches whose recorded actions break uniformity."""
    problems = []
    nodes = list(closed)
    for x, c1 in enumerate(nodes):
        for c2 in nodes[x + 1:]:
            common = min(len(c1.choices), len(c2.choices))
            for pos in range(common):
                for i, a in enumerate(coal):
                    if (seq_indist(model, c1.trace[:pos + 1], c2.trace[:pos + 1], a)
                            and c1.choices[pos][i] != c2.choices[pos][i]):
                        problems.append(
                            f"agent {a} after {c1.trace[:pos + 1]} / {c2.trace[:pos + 1]}: "
                            f"{c1.choices[pos][i]} vs {c2.choices[pos][i]}")
    return problems
