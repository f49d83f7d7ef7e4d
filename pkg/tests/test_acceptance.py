"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""
import dataclasses
import os
import subprocess
import sys
import time

import pytest

from dimres import witnesses
from dimres.formula import Allocation, Next, Prop, Release, parse_formula
from dimres.imperfect import check_i, initial_states, label_i
from dimres.oracle.fuzz import identity_copy, instance, monotonicity_suite, run_fuzz
from dimres.oracle.generate import GenParams, translate_to_ral
from dimres.perfect import SearchStats, check, label
from dimres.ral import ral_check

CORPUS_SIZE = 500
TIME_LIMIT = 300.0


def verdict(capsys, number, name, ok, detail):
    with capsys.disabled():
        print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def fuzz_run():
    start = time.perf_counter()
    report = run_fuzz(GenParams(), CORPUS_SIZE)
    return report, time.perf_counter() - start


@pytest.fixture(scope="module")
def corpus():
    params = GenParams()
    return [instance(params, i) for i in range(CORPUS_SIZE)]


def test_1_differential_correctness(capsys, fuzz_run):
    report, elapsed = fuzz_run
    by_engine = {e: sum(f.kind == e for f in report.disagreements)
                 for e in ("perfect", "imperfect", "ral")}
    ok = (report.count == CORPUS_SIZE and not report.disagreements and not report.refusals
          and report.comparisons == 3 * CORPUS_SIZE and elapsed < TIME_LIMIT)
    verdict(capsys, 1, "engines agree with the oracle", ok,
            f"{report.comparisons} comparisons on {report.count} instances, "
            f"disagreements {by_engine}, refusals {len(report.refusals)}, {elapsed:.1f}s")


def test_2_identity_reduction(capsys, corpus):
    bad = []
    for seed, model, phi, *_ in corpus:
        ident = identity_copy(model)
        if label_i(ident, phi) != label(ident, phi):
            bad.append(seed)
    verdict(capsys, 2, "identity indistinguishability collapses onto perfect information",
            not bad, f"{len(corpus)} instances, mismatching seeds {bad[:10]}")


def test_3_fragment_equivalence(capsys, corpus):
    bad = []
    for seed, model, phi, _, eta, _ in corpus:
        if ral_check(model, translate_to_ral(phi, model.agents), eta) != check(model, phi):
            bad.append(seed)
    verdict(capsys, 3, "fresh-endowment RAL# without opponents equals bounded checking",
            not bad, f"{len(corpus)} instances, mismatching seeds {bad[:10]}")


def test_4_depth_bound(capsys, corpus):
    stats = SearchStats()
    for _, model, phi, psi, eta, _ in corpus:
        label(model, phi, stats)
        label_i(model, phi, stats)
        ral_check(model, psi, eta, stats)
    ok = stats.depth_violations == 0 and stats.closed_violations == 0
    verdict(capsys, 4, "search depth within min first-resource budget + 1", ok,
            f"{stats.nodes_expanded} nodes, max depth {stats.max_depth}, "
            f"depth violations {stats.depth_violations}, "
            f"closed-set violations {stats.closed_violations} (largest {stats.max_closed})")


def test_5_monotonicity(capsys):
    result = monotonicity_suite(seed=0, n=200)
    m2 = witnesses.m2()
    at_1 = "s0" in check(m2, parse_formula(witnesses.m2_release(1)))
    at_2 = "s0" in check(m2, parse_formula(witnesses.m2_release(2)))
    ok = result.checked == 200 and not result.violations and at_1 and not at_2
    verdict(capsys, 5, "Next/Until monotone, Release witness non-monotone", ok,
            f"{result.checked} triples, {len(result.violations)} violations; "
            f"M2 Release at b=(1) {at_1}, at b=(2) {at_2}")


def test_6_degenerate_budget(capsys, corpus):
    violations = 0
    states = 0
    for _, model, phi, _, _, coal in corpus:
        zero = Allocation.of({a: (0,) * model.n_resources for a in coal})
        nxt = Next(coal, zero, phi)
        rel = Release(coal, zero, Prop("q"), phi)
        perfect = label(model, nxt) | label(model, rel)
        uniform = label_i(model, nxt) | label_i(model, rel)
        for s in model.states:
            states += 1
            violations += s in perfect[nxt]
            violations += (s in perfect[rel]) != (s in perfect[phi])
            violations += s in uniform[nxt]
            roots_ok = uniform[phi].issuperset(initial_states(model, coal, s))
            violations += (s in uniform[rel]) != roots_ok
    verdict(capsys, 6, "zero budgets: Next false, Release equals its invariant",
            violations == 0, f"{states} corpus states, {violations} violations")


def test_7_strong_uniformity_witness(capsys):
    m3 = witnesses.m3()
    phi = parse_formula(witnesses.M3_NEXT)
    perfect, uniform = check(m3, phi), check_i(m3, phi)
    ok = "s0" in perfect and not uniform & {"s0", "s0'"}
    verdict(capsys, 7, "M3 Next p: perfect labels s0, uniform labels neither s0 nor s0'",
            ok, f"perfect {sorted(perfect)}, imperfect {sorted(uniform)}")


DETERMINISM_RUNS = [
    ("check", "m1", "<{1}:[1=(2)]> (q U p)", "perfect", None),
    ("check", "m3", witnesses.M3_NEXT, "imperfect", None),
    ("check", "chain", witnesses.CHAIN_DOWN, "ral", "[1=(2)]"),
    ("oracle", "m2", witnesses.m2_release(1), "perfect", None),
    ("oracle", "m3_two_step", witnesses.M3_TWO_STEP_UNTIL, "imperfect", None),
    ("oracle", "chain", witnesses.CHAIN_DOWN, "ral", "[1=(2)]"),
]


def test_8_determinism(capsys, write_model):
    differing = []
    for command, name, phi, engine, eta in DETERMINISM_RUNS:
        path = write_model(witnesses.DOCS[name](), f"{name}.json")
        argv = [sys.executable, "-m", "dimres", command, "--model", path, "--formula", phi,
                "--engine", engine, "--json"] + (["--endowment", eta] if eta else [])
        outs = [subprocess.run(argv, capture_output=True,
                               env={**os.environ, "PYTHONHASHSEED": str(k)}).stdout
                for k in (0, 1)]
        if outs[0] != outs[1] or not outs[0]:
            differing.append(f"{command} {engine} {name}")
    verdict(capsys, 8, "check/oracle machine output byte-identical across runs",
            not differing, f"{len(DETERMINISM_RUNS)} commands, differing {differing}")
