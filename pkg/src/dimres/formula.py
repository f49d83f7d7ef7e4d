"""Formula syntax for RB+-ATL# and RAL#: AST, parser, printer, subformulas.

Concrete syntax (binary connectives always parenthesised)::

    phi ::= true | false | NAME | !phi | (phi & phi) | (phi | phi)
          | <COAL : BOUND> X phi | <COAL : BOUND> (phi U phi) | <COAL : BOUND> (phi R phi)
          | <COAL | COAL down> ... | <COAL | COAL eta=ENDOW> ...
    COAL  ::= {NAME, ...}            (opponent coalitions may be {})
    BOUND ::= [NAME=(INT, ...), ...]  (ENDOW has the same shape)

In ``(phi R psi)`` the left operand releases the invariant ``psi``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

Vector = tuple[int, ...]

RESERVED = frozenset({"true", "false", "X", "U", "R"})


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Allocation:
    """Per-agent resource vectors (a bound or an endowment), sorted by agent."""

    entries: tuple[tuple[str, Vector], ...]

    @classmethod
    def of(cls, mapping: Mapping[str, Vector]) -> "Allocation":
        return cls(tuple(sorted((str(a), tuple(int(x) for x in v))
                                for a, v in mapping.items())))

    @property
    def agents(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.entries)

    def __getitem__(self, agent: str) -> Vector:
        for a, v in self.entries:
            if a == agent:
                return v
        raise KeyError(agent)

    def __contains__(self, agent) -> bool:
        return any(a == agent for a, _ in self.entries)

    def get(self, agent, default=None):
        return self[agent] if agent in self else default

    def as_dict(self) -> dict[str, Vector]:
        return dict(self.entries)

    def __str__(self) -> str:
        return "[" + ",".join(f"{a}=({','.join(map(str, v))})"
                              for a, v in self.entries) + "]"


Bound = Allocation
Endowment = Allocation


class Formula:
    """Base class of formula nodes."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula

    def children(self):
        return (self.sub,)


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Next(Formula):
    coalition: tuple[str, ...]
    bound: Allocation
    sub: Formula

    def children(self):
        return (self.sub,)


@dataclass(frozen=True)
class Until(Formula):
    coalition: tuple[str, ...]
    bound: Allocation
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Release(Formula):
    coalition: tuple[str, ...]
    bound: Allocation
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


# RAL# modalities: endowment None stands for the down-arrow (current resources).

@dataclass(frozen=True)
class RalNext(Formula):
    coalition: tuple[str, ...]
    opponents: tuple[str, ...]
    endowment: Optional[Allocation]
    sub: Formula

    def children(self):
        return (self.sub,)


@dataclass(frozen=True)
class RalUntil(Formula):
    coalition: tuple[str, ...]
    opponents: tuple[str, ...]
    endowment: Optional[Allocation]
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class RalRelease(Formula):
    coalition: tuple[str, ...]
    opponents: tuple[str, ...]
    endowment: Optional[Allocation]
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


TRUE = Const(True)
FALSE = Const(False)

RB_MODALITIES = (Next, Until, Release)
RAL_MODALITIES = (RalNext, RalUntil, RalRelease)
RbModality = Union[Next, Until, Release]
RalModality = Union[RalNext, RalUntil, RalRelease]


def coalition(agents) -> tuple[str, ...]:
    """Canonical (sorted, duplicate-free) coalition tuple."""
    return tuple(sorted(set(agents)))


# -- printing --------------------------------------------------------------

def _coal(agents) -> str:
    return "{" + ",".join(agents) + "}"


def _temporal(phi) -> str:
    if isinstance(phi, (Next, RalNext)):
        return f"X {to_text(phi.sub)}"
    op = "U" if isinstance(phi, (Until, RalUntil)) else "R"
    return f"({to_text(phi.left)} {op} {to_text(phi.right)})"


def to_text(phi: Formula) -> str:
    """Canonical concrete syntax; ``parse_formula(to_text(f)) == f``."""
    if isinstance(phi, Const):
        return "true" if phi.value else "false"
    if isinstance(phi, Prop):
        return phi.name
    if isinstance(phi, Not):
        return "!" + to_text(phi.sub)
    if isinstance(phi, (Or, And)):
        op = "|" if isinstance(phi, Or) else "&"
        return f"({to_text(phi.left)} {op} {to_text(phi.right)})"
    if isinstance(phi, RB_MODALITIES):
        return f"<{_coal(phi.coalition)}:{phi.bound}> {_temporal(phi)}"
    if isinstance(phi, RAL_MODALITIES):
        mode = "down" if phi.endowment is None else f"eta={phi.endowment}"
        return f"<{_coal(phi.coalition)}|{_coal(phi.opponents)} {mode}> {_temporal(phi)}"
    raise TypeError(f"not a formula: {phi!r}")


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z0-9_'.]+)|([<>{}\[\](),:|&!=]))")


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col


def _tokenize(text: str) -> list[_Tok]:
    toks, pos = [], 0
    line, line_start = 1, 0
    while True:
        # skip whitespace, tracking lines
        while pos < len(text) and text[pos].isspace():
            if text[pos] == "\n":
                line, line_start = line + 1, pos + 1
            pos += 1
        if pos >= len(text):
            toks.append(_Tok("eof", "", line, pos - line_start + 1))
            return toks
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise FormulaSyntaxError(f"unknown operator {text[pos]!r}", line, col)
        word, sym = m.group(1), m.group(2)
        toks.append(_Tok("word", word, line, col) if word else _Tok("sym", sym, line, col))
        pos = m.end()


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, message, tok=None):
        tok = tok or self.tok
        raise FormulaSyntaxError(message, tok.line, tok.col)

    def take(self) -> _Tok:
        tok = self.tok
        self.i += 1
        return tok

    def at(self, text) -> bool:
        return self.tok.kind != "eof" and self.tok.text == text

    def expect(self, text) -> _Tok:
        if not self.at(text):
            found = self.tok.text or "end of input"
            self.fail(f"expected {text!r}, found {found!r}")
        return self.take()

    def name(self, what) -> str:
        if self.tok.kind != "word":
            self.fail(f"expected {what}")
        return self.take().text

    def formula(self) -> Formula:
        tok = self.tok
        if tok.kind == "eof":
            self.fail("unexpected end of input")
        if self.at("!"):
            self.take()
            return Not(self.formula())
        if self.at("("):
            self.take()
            left = self.formula()
            if self.at("&") or self.at("|"):
                op = self.take().text
                right = self.formula()
                self.expect(")")
                return And(left, right) if op == "&" else Or(left, right)
            if self.at(")"):
                self.take()
                return left
            self.fail(f"expected '&', '|' or ')', found {self.tok.text or 'end of input'!r}")
        if self.at("<"):
            return self.modality()
        if tok.kind == "word":
            self.take()
            if tok.text == "true":
                return TRUE
            if tok.text == "false":
                return FALSE
            if tok.text in RESERVED:
                self.fail(f"unexpected operator {tok.text!r}", tok)
            return Prop(tok.text)
        self.fail(f"unexpected {tok.text!r}")

    def coal(self, allow_empty) -> tuple[str, ...]:
        start = self.expect("{")
        agents = []
        if not self.at("}"):
            agents.append(self.name("agent name"))
            while self.at(","):
                self.take()
                agents.append(self.name("agent name"))
        self.expect("}")
        if not agents and not allow_empty:
            self.fail("empty coalition rejected", start)
        return coalition(agents)

    def allocation(self) -> Allocation:
        start = self.expect("[")
        entries = {}
        while True:
            agent_tok = self.tok
            agent = self.name("agent name in bound")
            if agent in entries:
                self.fail(f"agent {agent} listed twice in bound", agent_tok)
            self.expect("=")
            self.expect("(")
            vec = [self.integer()]
            while self.at(","):
                self.take()
                vec.append(self.integer())
            self.expect(")")
            entries[agent] = tuple(vec)
            if not self.at(","):
                break
            self.take()
        self.expect("]")
        if not entries:
            self.fail("malformed bound", start)
        return Allocation.of(entries)

    def integer(self) -> int:
        tok = self.tok
        if tok.kind != "word" or not tok.text.isdigit():
            self.fail("malformed bound: expected a natural number")
        self.take()
        return int(tok.text)

    def modality(self) -> Formula:
        self.expect("<")
        agents = self.coal(allow_empty=False)
        if self.at(":"):
            self.take()
            bound = self.allocation()
            self.expect(">")
            kind, args = "rb", (agents, bound)
        elif self.at("|"):
            self.take()
            opponents = self.coal(allow_empty=True)
            mode_tok = self.tok
            mode = self.name("'down' or 'eta='")
            if mode == "down":
                endow = None
            elif mode == "eta":
                self.expect("=")
                endow = self.allocation()
            else:
                self.fail(f"unknown modality mode {mode!r}", mode_tok)
            self.expect(">")
            kind, args = "ral", (agents, opponents, endow)
        else:
            self.fail("expected ':' or '|' after coalition")

        if self.at("X"):
            self.take()
            sub = self.formula()
            return Next(*args, sub) if kind == "rb" else RalNext(*args, sub)
        self.expect("(")
        left = self.formula()
        op_tok = self.tok
        if not (self.at("U") or self.at("R")):
            self.fail(f"expected 'U' or 'R', found {op_tok.text or 'end of input'!r}")
        op = self.take().text
        right = self.formula()
        self.expect(")")
        if kind == "rb":
            return (Until if op == "U" else Release)(*args, left, right)
        return (RalUntil if op == "U" else RalRelease)(*args, left, right)


def parse_formula(text: str) -> Formula:
    parser = _Parser(text)
    phi = parser.formula()
    if parser.tok.kind != "eof":
        parser.fail(f"unexpected trailing {parser.tok.text!r}")
    return phi


def parse_allocation(text: str) -> Allocation:
    """Parse a bound/endowment written as ``[a=(1,2),b=(0,3)]``."""
    parser = _Parser(text)
    alloc = parser.allocation()
    if parser.tok.kind != "eof":
        parser.fail(f"unexpected trailing {parser.tok.text!r}")
    return alloc


# -- structure -------------------------------------------------------------

def iter_nodes(phi: Formula) -> Iterator[Formula]:
    yield phi
    for child in phi.children():
        yield from iter_nodes(child)


def size(phi: Formula) -> int:
    """Number of AST nodes."""
    return sum(1 for _ in iter_nodes(phi))


def subformulas(phi: Formula) -> list[Formula]:
    """Distinct subformulas, each listed after all of its proper subformulas."""
    seen: dict[Formula, None] = {}

    def visit(f):
        if f in seen:
            return
        for child in f.children():
            visit(child)
        seen[f] = None

    visit(phi)
    return list(seen)


def modal_depth(phi: Formula) -> int:
    inner = max((modal_depth(c) for c in phi.children()), default=0)
    return inner + 1 if isinstance(phi, RB_MODALITIES + RAL_MODALITIES) else inner


def family(phi: Formula) -> str:
    """'rb', 'ral', 'prop' (no modalities) or 'mixed'."""
    kinds = set()
    for f in iter_nodes(phi):
        if isinstance(f, RB_MODALITIES):
            kinds.add("rb")
        elif isinstance(f, RAL_MODALITIES):
            kinds.add("ral")
    if len(kinds) > 1:
        return "mixed"
    return kinds.pop() if kinds else "prop"


def validate_formula(phi: Formula, model) -> list[str]:
    """Diagnostics for using ``phi`` against ``model`` (empty when compatible)."""
    diags = []
    agents = set(model.agents)
    r = len(model.resources)

    def check_alloc(alloc, expected, what, text):
        if set(alloc.agents) != set(expected):
            diags.append(f"{what} in {text} must cover exactly {sorted(expected)}, "
                         f"got {list(alloc.agents)}")
        for a, vec in alloc.entries:
            if len(vec) != r:
                diags.append(f"{what} for agent {a} in {text} has length {len(vec)}, "
                             f"expected {r}")
            if any(x < 0 for x in vec):
                diags.append(f"{what} for agent {a} in {text} has negative entries")

    if family(phi) == "mixed":
        diags.append("mixed logic families: RB+-ATL# and RAL# modalities in one formula")
    for f in subformulas(phi):
        if isinstance(f, Prop) and f.name not in model.propositions:
            diags.append(f"undeclared proposition {f.name!r}")
        if isinstance(f, RB_MODALITIES + RAL_MODALITIES):
            text = to_text(f)
            if not f.coalition:
                diags.append(f"empty coalition in {text}")
            unknown = set(f.coalition) - agents
            if isinstance(f, RAL_MODALITIES):
                unknown |= set(f.opponents) - agents
            if unknown:
                diags.append(f"unknown agents {sorted(unknown)} in {text}")
            if isinstance(f, RB_MODALITIES):
                check_alloc(f.bound, f.coalition, "bound", text)
            elif f.endowment is not None:
                check_alloc(f.endowment, agents, "endowment", text)
    return diags
