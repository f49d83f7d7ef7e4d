"""Command-line interface.

Exit codes: 0 the formula holds somewhere (or the command succeeded),
1 it holds nowhere (``fuzz``: disagreements found), 2 user error, 3
unreadable input, 4 the oracle refused an oversized instance.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .formula import FormulaSyntaxError, parse_allocation, parse_formula, to_text
from .imperfect import label_i
from .model import ModelError, ModelFormatError, load_model, validate_model
from .oracle.fuzz import run_fuzz
from .oracle.generate import GenParams
from .oracle.semantics import LIMIT, OracleRefusal, oracle_labels, oracle_states
from .perfect import QueryError, SearchStats, check_query, label
from .ral import ral_check

OK, EMPTY, USAGE, IO, REFUSED = 0, 1, 2, 3, 4
ENGINES = ("perfect", "imperfect", "ral")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _err(*lines) -> None:
    for line in lines:
        print(line, file=sys.stderr)


def _read_model(path):
    try:
        return load_model(path)
    except OSError as exc:
        raise CliError(f"cannot read model {path}: {exc.strerror or exc}", IO) from None
    except ModelFormatError as exc:
        raise CliError(f"ill-formed model {path}: {exc}", IO) from None
    except ModelError as exc:
        raise CliError(f"invalid model {path}: {exc}", USAGE) from None


def cmd_validate(args) -> int:
    model = _read_model(args.model)
    diags = validate_model(model)
    for d in diags:
        print(d)
    return USAGE if diags else OK


def _formula_text(arg: str) -> str:
    if not arg.startswith("@"):
        return arg
    try:
        return Path(arg[1:]).read_text()
    except OSError as exc:
        raise CliError(f"cannot read formula {arg[1:]}: {exc.strerror or exc}", IO) from None


def _request(args):
    """Load and validate everything a check or oracle run needs."""
    model = _read_model(args.model)
    diags = validate_model(model)
    if diags:
        raise CliError("\n".join(diags), USAGE)
    try:
        phi = parse_formula(_formula_text(args.formula))
    except FormulaSyntaxError as exc:
        raise CliError(f"formula: {exc}", USAGE) from None
    eta = None
    if args.engine == "ral":
        if args.endowment is None:
            raise CliError("the ral engine needs --endowment", USAGE)
        try:
            eta = parse_allocation(args.endowment)
        except FormulaSyntaxError as exc:
            raise CliError(f"endowment: {exc}", USAGE) from None
    elif args.endowment is not None:
        raise CliError(f"--endowment only applies to the ral engine, not {args.engine}",
                       USAGE)
    expected = "ral" if args.engine == "ral" else "rb"
    try:
        check_query(model, phi, expected)
        if eta is not None:
            _check_endowment(model, eta)
    except QueryError as exc:
        raise CliError(str(exc), USAGE) from None
    return model, phi, eta


def _check_endowment(model, eta) -> None:
    missing = [a for a in model.agents if a not in eta]
    extra = [a for a in eta.agents if a not in model.agents]
    if missing or extra:
        raise QueryError(f"endowment must cover exactly the agents {','.join(model.agents)}")
    for a in model.agents:
        vec = eta[a]
        if len(vec) != model.n_resources or any(x < 0 for x in vec):
            raise QueryError(f"endowment of agent {a} must be {model.n_resources} "
                             f"natural numbers")


def _document(phi, engine, states, labels, stats) -> dict:
    doc = {"formula": to_text(phi), "engine": engine,
           "satisfying_states": sorted(states)}
    if labels is not None:
        doc["per_subformula"] = {to_text(f): sorted(v) for f, v in labels.items()}
    doc["stats"] = {"max_depth": stats["max_depth"],
                    "nodes_expanded": stats["nodes_expanded"]}
    return doc


def _emit(doc: dict, as_json: bool) -> int:
    if as_json:
        print(json.dumps(doc, indent=2))
    else:
        print(f"{doc['engine']}: {doc['formula']}")
        print(f"  holds at: {', '.join(doc['satisfying_states']) or '(no state)'}")
        for text, states in doc.get("per_subformula", {}).items():
            print(f"    {text}: {', '.join(states) or '-'}")
        st = doc["stats"]
        print(f"  search: max depth {st['max_depth']}, {st['nodes_expanded']} nodes")
    return OK if doc["satisfying_states"] else EMPTY


def cmd_check(args) -> int:
    model, phi, eta = _request(args)
    stats = SearchStats()
    if args.engine == "ral":
        states, labels = ral_check(model, phi, eta, stats), None
    else:
        labels = (label if args.engine == "perfect" else label_i)(model, phi, stats)
        states = labels[phi]
    return _emit(_document(phi, args.engine, states, labels, stats.as_dict()), args.json)


def cmd_oracle(args) -> int:
    model, phi, eta = _request(args)
    stats: dict = {}
    try:
        if args.engine == "ral":
            states = oracle_states(model, phi, "ral", eta, args.limit, stats)
            labels = None
        else:
            labels = oracle_labels(model, phi, args.engine, args.limit, stats)
            states = labels[phi]
    except OracleRefusal as exc:
        raise CliError(str(exc), REFUSED) from None
    return _emit(_document(phi, f"oracle-{args.engine}", states, labels, stats), args.json)


def cmd_fuzz(args) -> int:
    if args.count < 1:
        raise CliError("--count must be at least 1", USAGE)
    try:
        params = GenParams(**{f.name: getattr(args, f.name)
                              for f in dataclasses.fields(GenParams)})
    except ValueError as exc:
        raise CliError(str(exc), USAGE) from None
    report = run_fuzz(params, args.count, args.limit)
    print(report.summary())
    if args.manifest:
        try:
            with open(args.manifest, "w") as out:
                report.write_manifest(out)
        except OSError as exc:
            raise CliError(f"cannot write manifest: {exc.strerror or exc}", IO) from None
    return OK if report.ok else EMPTY


def _query_args(p) -> None:
    p.add_argument("--model", required=True, help="model JSON file")
    p.add_argument("--formula", required=True, help="formula text, or @file to read it")
    p.add_argument("--engine", required=True, choices=ENGINES)
    p.add_argument("--endowment", help="initial endowment for the ral engine, e.g. [1=(2)]")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dimres",
        description="Model checking for resource-bounded alternating-time logics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model file for well-formedness")
    p.add_argument("model")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("check", help="label states with a formula")
    _query_args(p)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("oracle", help="evaluate a formula with the brute-force semantics")
    _query_args(p)
    p.add_argument("--limit", type=int, default=LIMIT,
                   help="refuse instances whose estimated work exceeds this")
    p.set_defaults(run=cmd_oracle)

    p = sub.add_parser("fuzz", help="compare the engines with the oracle on random instances")
    defaults = GenParams()
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.add_argument("--count", type=int, required=True)
    for f in dataclasses.fields(GenParams):
        if f.name.startswith("max_"):
            p.add_argument("--" + f.name.replace("_", "-"), type=int,
                           default=getattr(defaults, f.name))
    p.add_argument("--indist-probability", type=float, default=defaults.indist_probability)
    p.add_argument("--force-production", action="store_true")
    p.add_argument("--limit", type=int, default=LIMIT, help="oracle size guard")
    p.add_argument("--manifest", help="write a tab-separated corpus manifest here")
    p.set_defaults(run=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.run(args)
    except CliError as exc:
        _err(str(exc))
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
