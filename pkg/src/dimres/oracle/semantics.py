"""Ground-truth evaluators that follow the satisfaction relations literally.

None of these reuse the engines' search: there are no early acceptance
tests, no run-out shortcut and no ``pre``.  Every action choice (including
too-expensive ones, which end a computation) is considered at every
history, maximal computations are materialised as explicit state
sequences, and the Next/Until/Release path conditions are checked on them
verbatim.

* :func:`holds_semantics` - perfect information.  Strategy trees are
  explored through the history tree: the choices at distinct histories
  are independent, so "some tree makes every maximal computation good"
  is decided history by history.
* :func:`holds_semantics_uniform` - strongly uniform strategies.  Choices
  are coupled across indistinguishable histories, so the existence of a
  uniform strategy is encoded as a SAT problem over per-agent,
  per-observation-class action variables.
* :func:`holds_semantics_ral` - RAL#: resource-extended computations with
  resource-bounded opponents and frozen outsiders.
* :func:`enumerate_strategy_trees` / :func:`holds_by_enumeration` -
  literal enumeration of every strategy tree, for micro instances.
"""
from __future__ import annotations

import itertools
from typing import Callable, Iterator, Optional, Sequence

from pysat.solvers import Minisat22

from ..formula import (And, Const, Formula, Next, Not, Or, Prop, RalNext, RalRelease,
                       RalUntil, Release, Until, RB_MODALITIES, RAL_MODALITIES,
                       iter_nodes, subformulas)
from ..model import GameModel, affordable, vec_add, vec_le, vec_sub

LIMIT = 10 ** 7


class OracleRefusal(RuntimeError):
    """The instance is too large to evaluate by enumeration."""

    def __init__(self, estimate: int, limit: int):
        super().__init__(f"instance too large for the oracle: estimated {estimate} "
                         f"candidates exceeds the limit of {limit}")
        self.estimate = estimate
        self.limit = limit


# -- path conditions -------------------------------------------------------

def next_ok(length: int, sat: Callable[[int, Formula], bool], phi) -> bool:
    return length >= 2 and sat(1, phi.sub)


def until_ok(length: int, sat: Callable[[int, Formula], bool], phi) -> bool:
    return any(sat(i, phi.right) and all(sat(j, phi.left) for j in range(i))
               for i in range(length))


def release_ok(length: int, sat: Callable[[int, Formula], bool], phi) -> bool:
    # phi.left releases the invariant phi.right
    if any(sat(i, phi.left) and all(sat(j, phi.right) for j in range(i + 1))
           for i in range(length)):
        return True
    return all(sat(j, phi.right) for j in range(length))


def path_condition(phi) -> Callable:
    if isinstance(phi, (Next, RalNext)):
        return next_ok
    if isinstance(phi, (Until, RalUntil)):
        return until_ok
    return release_ok


# -- size guard ------------------------------------------------------------

def estimate_work(model: GameModel, phi: Formula, eta=None) -> int:
    """Upper bound on the histories the oracle may unfold for ``phi``."""
    branching = max((len(model.moves(s, model.agents)) for s in model.states), default=1)
    n = len(model.states)
    eta_first = max((v[0] for v in eta.as_dict().values()), default=0) if eta is not None else 0
    total = 0
    for f in iter_nodes(phi):
        if isinstance(f, RB_MODALITIES):
            k = min(v[0] for v in f.bound.as_dict().values())
        elif isinstance(f, RAL_MODALITIES):
            source = f.endowment.as_dict() if f.endowment is not None else None
            k = max(v[0] for v in source.values()) if source else eta_first
            k = max(k, eta_first)
        else:
            continue
        total += n * n * sum(branching ** i for i in range(k + 1))
    return total


def _guard(model, phi, eta, limit):
    estimate = estimate_work(model, phi, eta)
    if estimate > limit:
        raise OracleRefusal(estimate, limit)


def _budget(coal, bound):
    return tuple(tuple(bound[a]) for a in coal)


def _update(avail, move):
    return tuple(vec_add(vec_sub(e, c), p) for e, c, p in zip(avail, move.cons, move.prod))


def _boolean(phi, recurse):
    if isinstance(phi, Not):
        return not recurse(phi.sub)
    if isinstance(phi, Or):
        return recurse(phi.left) or recurse(phi.right)
    if isinstance(phi, And):
        return recurse(phi.left) and recurse(phi.right)
    raise TypeError(phi)


class _Counting:
    """Counts the histories an oracle explores and the longest one."""

    def __init__(self, model: GameModel):
        self.model = model
        self.memo: dict = {}
        self.histories = 0
        self.longest = 0

    def _seen(self, trace) -> None:
        self.histories += 1
        self.longest = max(self.longest, len(trace))

    def stats(self) -> dict:
        return {"max_depth": self.longest, "nodes_expanded": self.histories}


# -- perfect information ---------------------------------------------------

class PerfectOracle(_Counting):

    def holds(self, state: str, phi: Formula) -> bool:
        key = (state, phi)
        if key not in self.memo:
            self.memo[key] = self._eval(state, phi)
        return self.memo[key]

    def _eval(self, state, phi):
        if isinstance(phi, Const):
            return phi.value
        if isinstance(phi, Prop):
            return state in self.model.holds(phi.name)
        if isinstance(phi, RB_MODALITIES):
            coal = self.model.order(phi.coalition)
            cond = path_condition(phi)

            def good(trace):
                return cond(len(trace), lambda i, f: self.holds(trace[i], f), phi)

            return self._exists(coal, (state,), _budget(coal, phi.bound), good)
        return _boolean(phi, lambda f: self.holds(state, f))

    def _exists(self, coal, trace, avail, good) -> bool:
        self._seen(trace)
        for move in self.model.moves(trace[-1], coal):
            if affordable(move.cons, avail):
                nxt = _update(avail, move)
                ok = all(self._exists(coal, trace + (t,), nxt, good) for t in move.outcomes)
            else:
                # the prescribed action is unaffordable: trace is maximal
                ok = good(trace)
            if ok:
                return True
        return False


def holds_semantics(model: GameModel, state: str, phi: Formula, limit: int = LIMIT) -> bool:
    _guard(model, phi, None, limit)
    return PerfectOracle(model).holds(state, phi)


# -- strongly uniform strategies -------------------------------------------

class UniformOracle(_Counting):

    def holds(self, state: str, phi: Formula) -> bool:
        key = (state, phi)
        if key not in self.memo:
            self.memo[key] = self._eval(state, phi)
        return self.memo[key]

    def _eval(self, state, phi):
        if isinstance(phi, Const):
            return phi.value
        if isinstance(phi, Prop):
            return state in self.model.holds(phi.name)
        if isinstance(phi, RB_MODALITIES):
            return self._uniform_strategy_exists(state, phi)
        return _boolean(phi, lambda f: self.holds(state, f))

    def roots(self, state, coal) -> tuple[str, ...]:
        model = self.model
        return tuple(t for t in model.states
                     if any(model.indistinguishable(a, state, t) for a in coal))

    def _uniform_strategy_exists(self, state, phi) -> bool:
        model = self.model
        coal = model.order(phi.coalition)
        cond = path_condition(phi)

        def good(trace):
            return cond(len(trace), lambda i, f: self.holds(trace[i], f), phi)

        counter = itertools.count(1)
        choice_vars: dict = {}  # (agent position, observation key) -> {action: var}
        clauses: list[list[int]] = []

        def choice(i, trace, action):
            agent = coal[i]
            key = (i, tuple(model.class_id(agent, s) for s in trace))
            options = choice_vars.get(key)
            if options is None:
                acts = model.available(trace[-1], agent)
                options = {a: next(counter) for a in acts}
                choice_vars[key] = options
                clauses.append(list(options.values()))
                for x, y in itertools.combinations(options.values(), 2):
                    clauses.append([-x, -y])
            return options[action]

        b = _budget(coal, phi.bound)
        frontier = []
        for r in self.roots(state, coal):
            live = next(counter)
            clauses.append([live])
            frontier.append(((r,), b, live))
        while frontier:
            trace, avail, live = frontier.pop()
            self._seen(trace)
            for move in model.moves(trace[-1], coal):
                chosen = [-choice(i, trace, act) for i, act in enumerate(move.joint.actions)]
                if affordable(move.cons, avail):
                    nxt = _update(avail, move)
                    for t in move.outcomes:
                        kid = next(counter)
                        clauses.append([-live] + chosen + [kid])
                        frontier.append((trace + (t,), nxt, kid))
                elif not good(trace):
                    clauses.append([-live] + chosen)
        with Minisat22(bootstrap_with=clauses) as solver:
            return solver.solve()


def holds_semantics_uniform(model: GameModel, state: str, phi: Formula,
                            limit: int = LIMIT) -> bool:
    _guard(model, phi, None, limit)
    return UniformOracle(model).holds(state, phi)


# -- RAL# ------------------------------------------------------------------

class RalOracle(_Counting):

    def vectors(self, eta) -> tuple:
        return tuple(tuple(eta[a]) for a in self.model.agents)

    def holds(self, state: str, eta: tuple, phi: Formula) -> bool:
        key = (state, eta, phi)
        if key not in self.memo:
            self.memo[key] = self._eval(state, eta, phi)
        return self.memo[key]

    def _eval(self, state, eta, phi):
        model = self.model
        if isinstance(phi, Const):
            return phi.value
        if isinstance(phi, Prop):
            return state in model.holds(phi.name)
        if isinstance(phi, RAL_MODALITIES):
            start = eta if phi.endowment is None else self.vectors(phi.endowment)
            props = model.order(phi.coalition)
            opps = model.order(phi.opponents)
            cond = path_condition(phi)

            def good(trace):
                return cond(len(trace), lambda i, f: self.holds(trace[i][0], trace[i][1], f),
                            phi)

            return self._exists(props, opps, ((state, start),), good)
        return _boolean(phi, lambda f: self.holds(state, eta, f))

    def _exists(self, props, opps, trace, good) -> bool:
        model = self.model
        self._seen(trace)
        state, eta = trace[-1]
        agents = model.agents
        members = set(props) | set(opps)
        own = tuple(eta[agents.index(a)] for a in props)
        for move in model.moves(state, props):
            if not affordable(move.cons, own):
                ok = good(trace)
            else:
                steps = []
                for prof in model.moves(state, agents):
                    acts = prof.joint.actions
                    if any(acts[agents.index(a)] != x
                           for a, x in zip(props, move.joint.actions)):
                        continue
                    if not all(vec_le(prof.cons[i], eta[i])
                               for i, a in enumerate(agents) if a in members):
                        continue
                    new = tuple(vec_add(vec_sub(eta[i], prof.cons[i]), prof.prod[i])
                                if a in members else eta[i]
                                for i, a in enumerate(agents))
                    steps.append((prof.outcomes[0], new))
                if not steps:
                    # no admissible profile: the computation cannot be extended
                    ok = good(trace)
                else:
                    ok = all(self._exists(props, opps, trace + (step,), good)
                             for step in steps)
            if ok:
                return True
        return False


def holds_semantics_ral(model: GameModel, state: str, eta, phi: Formula,
                        limit: int = LIMIT) -> bool:
    _guard(model, phi, eta, limit)
    oracle = RalOracle(model)
    return oracle.holds(state, oracle.vectors(eta), phi)


# -- literal strategy-tree enumeration --------------------------------------

def count_strategy_trees(model: GameModel, roots: Sequence[str], coal, bound) -> int:
    """Number of strategy trees over the histories they make reachable."""
    coal = model.order(coal)

    def count(trace, avail):
        total = 0
        for move in model.moves(trace[-1], coal):
            sub = 1
            if affordable(move.cons, avail):
                nxt = _update(avail, move)
                for t in move.outcomes:
                    sub *= count(trace + (t,), nxt)
            total += sub
        return total

    b = _budget(coal, bound)
    result = 1
    for r in roots:
        result *= count((r,), b)
    return result


def enumerate_strategy_trees(model: GameModel, roots: Sequence[str], coal,
                             bound) -> Iterator[dict]:
    """Yield every strategy tree as a map history -> joint action.

    A tree assigns an action to each history it reaches while every
    coalition member can still pay; histories beyond are never reached.
    """
    coal = model.order(coal)
    b = _budget(coal, bound)

    def extend(pending, tree):
        if not pending:
            yield dict(tree)
            return
        (trace, avail), rest = pending[0], pending[1:]
        for move in model.moves(trace[-1], coal):
            tree[trace] = move.joint
            kids = ()
            if affordable(move.cons, avail):
                nxt = _update(avail, move)
                kids = tuple((trace + (t,), nxt) for t in move.outcomes)
            yield from extend(rest + kids, tree)
            del tree[trace]

    yield from extend(tuple(((r,), b) for r in roots), {})


def maximal_computations(model: GameModel, tree: dict, root: str, coal,
                         bound) -> Iterator[tuple[str, ...]]:
    """Maximal bound-consistent computations from ``root`` under ``tree``."""
    coal = model.order(coal)
    moves = {}

    def walk(trace, avail):
        joint = tree[trace]
        key = (trace[-1], joint.actions)
        if key not in moves:
            moves[key] = next(m for m in model.moves(trace[-1], coal)
                              if m.joint.actions == joint.actions)
        move = moves[key]
        if not affordable(move.cons, avail):
            yield trace
            return
        nxt = _update(avail, move)
        for t in move.outcomes:
            yield from walk(trace + (t,), nxt)

    yield from walk((root,), _budget(coal, bound))


def is_uniform(model: GameModel, tree: dict, coal) -> bool:
    coal = model.order(coal)
    seen = {}
    for trace, joint in tree.items():
        for i, a in enumerate(coal):
            key = (a, tuple(model.class_id(a, s) for s in trace))
            if seen.setdefault(key, joint.actions[i]) != joint.actions[i]:
                return False
    return True


def holds_by_enumeration(model: GameModel, state: str, phi: Formula,
                         uniform: bool = False, limit: int = LIMIT,
                         _memo: Optional[dict] = None) -> bool:
    """Evaluate ``phi`` by enumerating every strategy tree explicitly."""
    memo = {} if _memo is None else _memo
    key = (state, phi)
    if key in memo:
        return memo[key]

    def sub(s, f):
        return holds_by_enumeration(model, s, f, uniform, limit, memo)

    if isinstance(phi, Const):
        result = phi.value
    elif isinstance(phi, Prop):
        result = state in model.holds(phi.name)
    elif isinstance(phi, RB_MODALITIES):
        coal = model.order(phi.coalition)
        roots = (tuple(t for t in model.states
                       if any(model.indistinguishable(a, state, t) for a in coal))
                 if uniform else (state,))
        count = count_strategy_trees(model, roots, coal, phi.bound)
        if count > limit:
            raise OracleRefusal(count, limit)
        cond = path_condition(phi)
        result = False
        for tree in enumerate_strategy_trees(model, roots, coal, phi.bound):
            if uniform and not is_uniform(model, tree, coal):
                continue
            if all(cond(len(lam), lambda i, f, lam=lam: sub(lam[i], f), phi)
                   for r in roots
                   for lam in maximal_computations(model, tree, r, coal, phi.bound)):
                result = True
                break
    else:
        result = _boolean(phi, lambda f: sub(state, f))
    memo[key] = result
    return result


ORACLES = {"perfect": PerfectOracle, "imperfect": UniformOracle, "ral": RalOracle}


def oracle_states(model: GameModel, phi: Formula, engine: str, eta=None,
                  limit: int = LIMIT, stats: Optional[dict] = None) -> frozenset[str]:
    """States where ``phi`` holds according to the oracle for ``engine``.

    ``stats``, if given, receives the number of histories explored and the
    length of the longest one.
    """
    if engine not in ORACLES:
        raise ValueError(f"unknown engine {engine!r}")
    _guard(model, phi, eta, limit)
    o = ORACLES[engine](model)
    if engine == "ral":
        vecs = o.vectors(eta)
        result = frozenset(s for s in model.states if o.holds(s, vecs, phi))
    else:
        result = frozenset(s for s in model.states if o.holds(s, phi))
    if stats is not None:
        stats.update(o.stats())
    return result


def oracle_labels(model: GameModel, phi0: Formula, engine: str, limit: int = LIMIT,
                  stats: Optional[dict] = None) -> dict[Formula, frozenset[str]]:
    """Per-subformula satisfying sets for the RB+-ATL# oracles."""
    if engine not in ("perfect", "imperfect"):
        raise ValueError(f"no global labelling for engine {engine!r}")
    _guard(model, phi0, None, limit)
    o = ORACLES[engine](model)
    labels = {f: frozenset(s for s in model.states if o.holds(s, f))
              for f in subformulas(phi0)}
    if stats is not None:
        stats.update(o.stats())
    return labels
