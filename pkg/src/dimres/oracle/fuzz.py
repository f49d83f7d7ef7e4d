"""Differential fuzzing of the three engines against the reference semantics.

Each instance ``i`` uses seed ``params.seed + i`` for its model and an
independent stream for its formulas, so a single failing seed can be
replayed on its own.  Besides engine/oracle agreement, every instance is
checked for the structural laws the engines must obey: identity
indistinguishability collapses the uniform engine onto the perfect one,
fresh-endowment RAL# formulas without opponents agree with the bounded
ones, zero budgets make Next false and Release equal to its invariant,
and searches stay within their depth and closed-set limits.
"""
from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass, field
from typing import Optional, TextIO

from ..formula import Allocation, Formula, Next, Or, Prop, Release, Until, to_text
from ..imperfect import check_i, initial_states, label_i
from ..model import GameModel
from ..perfect import SearchStats, check, label
from ..ral import ral_check
from .generate import (GenParams, random_allocation, random_model, random_ral_formula,
                       random_rb_formula, translate_to_ral)
from .semantics import LIMIT, OracleRefusal, oracle_states

MANIFEST_HEADER = ("seed", "params", "rb_formula", "ral_formula", "endowment",
                   "engine_verdicts", "oracle_verdicts")


@dataclass
class Finding:
    seed: int
    kind: str
    formula: str
    detail: str

    def __str__(self) -> str:
        return f"seed={self.seed} [{self.kind}] {self.formula}: {self.detail}"


@dataclass
class FuzzReport:
    count: int = 0
    disagreements: list[Finding] = field(default_factory=list)
    law_violations: list[Finding] = field(default_factory=list)
    refusals: list[Finding] = field(default_factory=list)
    comparisons: int = 0
    max_depth: int = 0
    depth_violations: int = 0
    closed_violations: int = 0
    rows: list[tuple[str, ...]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.law_violations

    def summary(self) -> str:
        lines = [f"instances: {self.count}",
                 f"engine/oracle comparisons: {self.comparisons}",
                 f"disagreements: {len(self.disagreements)}",
                 f"law violations: {len(self.law_violations)}",
                 f"oracle refusals: {len(self.refusals)}",
                 f"max search depth: {self.max_depth}",
                 f"depth violations: {self.depth_violations}",
                 f"closed-set violations: {self.closed_violations}"]
        for f in self.disagreements + self.law_violations + self.refusals:
            lines.append(str(f))
        return "\n".join(lines)

    def write_manifest(self, out: TextIO) -> None:
        out.write("\t".join(MANIFEST_HEADER) + "\n")
        for row in self.rows:
            out.write("\t".join(row) + "\n")


def _fmt(states) -> str:
    return ",".join(sorted(states))


def _verdicts(pairs) -> str:
    return ";".join(f"{name}={_fmt(states)}" for name, states in pairs)


def _zero(coal, n_res) -> Allocation:
    return Allocation.of({a: (0,) * n_res for a in coal})


def identity_copy(model: GameModel) -> GameModel:
    return dataclasses.replace(model, indist={})


def instance(params: GenParams, i: int):
    """Model, formulas and endowment of corpus instance ``i``."""
    seed = params.seed + i
    force = params.force_production or i == 0
    model = random_model(dataclasses.replace(params, seed=seed, force_production=force))
    rng = random.Random(f"formulas-{seed}")
    phi = random_rb_formula(rng, model, params.max_bound)
    psi = random_ral_formula(rng, model, params.max_bound)
    eta = random_allocation(rng, model.agents, model.n_resources, params.max_bound)
    coal = tuple(a for a in model.agents if rng.random() < 0.5) or model.agents[:1]
    return seed, model, phi, psi, eta, coal


class _Instance:
    def __init__(self, report: FuzzReport, seed: int, limit: int):
        self.report = report
        self.seed = seed
        self.limit = limit

    def disagree(self, kind, phi, engine, oracle):
        self.report.disagreements.append(Finding(
            self.seed, kind, to_text(phi), f"engine {_fmt(engine) or '-'} "
                                           f"oracle {_fmt(oracle) or '-'}"))

    def law(self, kind, phi, detail):
        self.report.law_violations.append(Finding(self.seed, kind, to_text(phi), detail))

    def oracle(self, model, phi, engine, eta=None):
        try:
            return oracle_states(model, phi, engine, eta, self.limit)
        except OracleRefusal as exc:
            self.report.refusals.append(Finding(self.seed, f"refusal-{engine}",
                                                to_text(phi), str(exc)))
            return None

    def compare(self, kind, phi, engine_states, oracle_states_):
        if oracle_states_ is None:
            return
        self.report.comparisons += 1
        if engine_states != oracle_states_:
            self.disagree(kind, phi, engine_states, oracle_states_)


def _absorb(report: FuzzReport, stats: SearchStats) -> None:
    report.max_depth = max(report.max_depth, stats.max_depth)
    report.depth_violations += stats.depth_violations
    report.closed_violations += stats.closed_violations


def run_instance(report: FuzzReport, params: GenParams, i: int, limit: int = LIMIT) -> None:
    seed, model, phi, psi, eta, coal = instance(params, i)
    run = _Instance(report, seed, limit)
    stats = SearchStats()

    perfect = label(model, phi, stats)
    uniform = label_i(model, phi, stats)
    ral = ral_check(model, psi, eta, stats)
    o_perfect = run.oracle(model, phi, "perfect")
    o_uniform = run.oracle(model, phi, "imperfect")
    o_ral = run.oracle(model, psi, "ral", eta)
    run.compare("perfect", phi, perfect[phi], o_perfect)
    run.compare("imperfect", phi, uniform[phi], o_uniform)
    run.compare("ral", psi, ral, o_ral)

    # identity indistinguishability: the uniform engine must match the perfect one
    ident = label_i(identity_copy(model), phi, stats)
    if ident != perfect:
        bad = [f for f in perfect if ident[f] != perfect[f]]
        run.law("identity", phi, f"first differing subformula {to_text(bad[0])}")

    # fresh endowments with no opponents coincide with bounds
    frag = translate_to_ral(phi, model.agents)
    frag_states = ral_check(model, frag, eta, stats)
    if frag_states != perfect[phi]:
        run.law("fragment", frag, f"ral {_fmt(frag_states) or '-'} "
                                  f"perfect {_fmt(perfect[phi]) or '-'}")

    # zero budgets: Next is false everywhere, Release reduces to its invariant
    zero = _zero(coal, model.n_resources)
    nxt = Next(coal, zero, phi)
    rel = Release(coal, zero, Prop("q"), phi)
    for engine, labeller in (("perfect", label), ("imperfect", label_i)):
        labels = labeller(model, Or(nxt, rel), stats)
        if labels[nxt]:
            run.law(f"zero-next-{engine}", nxt, f"holds at {_fmt(labels[nxt])}")
        inv = labels[phi]
        if engine == "perfect":
            expected = inv
        else:
            expected = frozenset(s for s in model.states
                                 if inv.issuperset(initial_states(model, coal, s)))
        if labels[rel] != expected:
            run.law(f"zero-release-{engine}", rel,
                    f"got {_fmt(labels[rel]) or '-'} expected {_fmt(expected) or '-'}")

    _absorb(report, stats)
    report.count += 1
    report.rows.append((
        str(seed), params.describe(), to_text(phi), to_text(psi), str(eta),
        _verdicts((("perfect", perfect[phi]), ("imperfect", uniform[phi]), ("ral", ral))),
        _verdicts((("perfect", o_perfect or ()), ("imperfect", o_uniform or ()),
                   ("ral", o_ral or ()))),
    ))


def run_fuzz(params: GenParams, count: int, limit: int = LIMIT,
             progress=None) -> FuzzReport:
    """Check ``count`` random instances; see the module docstring."""
    if count < 1:
        raise ValueError("count must be at least 1")
    report = FuzzReport()
    for i in range(count):
        run_instance(report, params, i, limit)
        if progress is not None:
            progress(i + 1, report)
    if report.depth_violations:
        report.law_violations.append(Finding(params.seed, "depth", "-",
                                             f"{report.depth_violations} nodes too deep"))
    if report.closed_violations:
        report.law_violations.append(Finding(params.seed, "closed-set", "-",
                                             f"{report.closed_violations} oversized closed sets"))
    return report


# -- monotonicity -------------------------------------------------------------

@dataclass
class MonotonicityResult:
    checked: int = 0
    violations: list[str] = field(default_factory=list)


def _raise_bound(rng, bound: Allocation, max_step: int) -> Allocation:
    return Allocation.of({a: tuple(x + rng.randint(0, max_step) for x in vec)
                          for a, vec in bound.as_dict().items()})


def _with_bound(phi: Formula, bound: Allocation) -> Formula:
    return dataclasses.replace(phi, bound=bound)


def monotonicity_suite(seed: int = 0, n: int = 200, params: Optional[GenParams] = None
                       ) -> MonotonicityResult:
    """Next and Until must stay true when the top-level bound grows pointwise."""
    params = params or GenParams(seed=seed)
    rng = random.Random(f"monotonicity-{seed}")
    result = MonotonicityResult()
    i = 0
    while result.checked < n:
        model = random_model(dataclasses.replace(params, seed=seed + i))
        i += 1
        coal = tuple(a for a in model.agents if rng.random() < 0.5) or model.agents[:1]
        bound = random_allocation(rng, coal, model.n_resources, params.max_bound)
        left = random_rb_formula(rng, model, params.max_bound, nesting=1)
        right = random_rb_formula(rng, model, params.max_bound, nesting=1)
        if rng.random() < 0.5:
            phi = Next(coal, bound, right)
        else:
            phi = Until(coal, bound, left, right)
        bigger = _with_bound(phi, _raise_bound(rng, bound, params.max_bound))
        for engine, checker in (("perfect", check), ("imperfect", check_i)):
            small, large = checker(model, phi), checker(model, bigger)
            if not small <= large:
                result.violations.append(
                    f"seed={seed + i - 1} {engine}: {to_text(phi)} holds at "
                    f"{_fmt(small - large)} but {to_text(bigger)} does not")
        result.checked += 1
    return result


__all__ = ["Finding", "FuzzReport", "MonotonicityResult", "identity_copy", "instance",
           "monotonicity_suite", "run_fuzz", "run_instance"]
