"""Terms over {^, v, *, \\, /, 0, 1} with derived negations, and identities.

Grammar, loosest to tightest binding:

    join   := meet ('v' meet)*
    meet   := div ('^' div)*
    div    := mul [('\\' | '/') mul]        chained divisions need parentheses
    mul    := unary ('*' unary)*
    unary  := ('~' | '-') unary | atom    ~ is left negation x\\0, - is right negation 0/x
    atom   := '0' | '1' | identifier | '(' join ')'

A bare `v` is always the join operator, never a variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}" + (f" in {text!r}" if text else ""))
        self.position = position


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class One(Term):
    pass


@dataclass(frozen=True)
class Meet(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Join(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class LDiv(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class RDiv(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class LNeg(Term):
    arg: Term


@dataclass(frozen=True)
class RNeg(Term):
    arg: Term


BINARY_NODES = (Meet, Join, Mul, LDiv, RDiv)
UNARY_NODES = (LNeg, RNeg)


def variables(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, BINARY_NODES):
        return variables(t.left) | variables(t.right)
    if isinstance(t, UNARY_NODES):
        return variables(t.arg)
    return set()


def size(t: Term) -> int:
    """Number of nodes."""
    if isinstance(t, BINARY_NODES):
        return 1 + size(t.left) + size(t.right)
    if isinstance(t, UNARY_NODES):
        return 1 + size(t.arg)
    return 1


def occurrences(t: Term) -> int:
    """Leaf count, variables and constants alike."""
    if isinstance(t, BINARY_NODES):
        return occurrences(t.left) + occurrences(t.right)
    if isinstance(t, UNARY_NODES):
        return occurrences(t.arg)
    return 1


# ---- tokenizer -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(<=)|([A-Za-z_][A-Za-z0-9_]*)|(\d+)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos or m.lastindex is None:
            break
        start = m.start(m.lastindex)
        le, ident, num, ch = m.groups()
        if le:
            out.append(("op", "<=", start))
        elif ident:
            out.append(("op", "v", start) if ident == "v" else ("id", ident, start))
        elif num:
            if num not in ("0", "1"):
                raise ParseError(f"only the constants 0 and 1 are allowed, got {num!r}", start, text)
            out.append(("const", num, start))
        elif ch in "()*\\/^~-=":
            out.append(("op", ch, start))
        else:
            raise ParseError(f"unexpected character {ch!r}", start, text)
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at_op(self, *ops: str) -> bool:
        kind, val, _ = self.peek()
        return kind == "op" and val in ops

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.peek()[2], self.text)

    def join(self) -> Term:
        t = self.meet()
        while self.at_op("v"):
            self.take()
            t = Join(t, self.meet())
        return t

    def meet(self) -> Term:
        t = self.div()
        while self.at_op("^"):
            self.take()
            t = Meet(t, self.div())
        return t

    def div(self) -> Term:
        t = self.mul()
        if self.at_op("\\", "/"):
            op = self.take()[1]
            r = self.mul()
            t = LDiv(t, r) if op == "\\" else RDiv(t, r)
            if self.at_op("\\", "/"):
                raise self.error("chained division is ambiguous; add parentheses")
        return t

    def mul(self) -> Term:
        t = self.unary()
        while self.at_op("*"):
            self.take()
            t = Mul(t, self.unary())
        return t

    def unary(self) -> Term:
        if self.at_op("~"):
            self.take()
            return LNeg(self.unary())
        if self.at_op("-"):
            self.take()
            return RNeg(self.unary())
        return self.atom()

    def atom(self) -> Term:
        kind, val, _ = self.peek()
        if kind == "const":
            self.take()
            return Zero() if val == "0" else One()
        if kind == "id":
            self.take()
            return Var(val)
        if self.at_op("("):
            self.take()
            t = self.join()
            if not self.at_op(")"):
                raise self.error("expected ')'")
            self.take()
            return t
        if kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected token {val!r}")


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.join()
    if p.peek()[0] != "end":
        raise p.error(f"unexpected token {p.peek()[1]!r}")
    return t


# ---- printer ---------------------------------------------------------------

_LEVEL = {Join: 0, Meet: 1, LDiv: 2, RDiv: 2, Mul: 3, LNeg: 4, RNeg: 4}
_SYMBOL = {Join: " v ", Meet: " ^ ", LDiv: "\\", RDiv: "/", Mul: "*"}
# minimum operand levels (left, right) for each binary node
_NEED = {Join: (0, 1), Meet: (1, 2), LDiv: (3, 3), RDiv: (3, 3), Mul: (3, 4)}


def _level(t: Term) -> int:
    return _LEVEL.get(type(t), 5)


def _wrap(t: Term, need: int) -> str:
    s = format_term(t)
    return f"({s})" if _level(t) < need else s


def format_term(t: Term) -> str:
    """Print with the fewest parentheses that parse back to the same tree."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, UNARY_NODES):
        return ("~" if isinstance(t, LNeg) else "-") + _wrap(t.arg, 4)
    lo, hi = _NEED[type(t)]
    return _wrap(t.left, lo) + _SYMBOL[type(t)] + _wrap(t.right, hi)


# ---- identities ------------------------------------------------------------

class IdentityKind(Enum):
    EQUATION = "="
    INEQUATION = "<="


@dataclass(frozen=True)
class Identity:
    """lhs = rhs (= rest...) or lhs <= rhs."""

    kind: IdentityKind
    lhs: Term
    rhs: Term
    rest: tuple[Term, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind is IdentityKind.INEQUATION and self.rest:
            raise ValueError("an inequation has exactly two sides")

    @property
    def terms(self) -> tuple[Term, ...]:
        return (self.lhs, self.rhs) + self.rest

    def variables(self) -> list[str]:
        names: set[str] = set()
        for t in self.terms:
            names |= variables(t)
        return sorted(names)

    def __str__(self) -> str:
        return f" {self.kind.value} ".join(format_term(t) for t in self.terms)


def parse_identity(text: str, name: str = "") -> Identity:
    p = _Parser(text)
    terms = [p.join()]
    rels = []
    while p.at_op("=", "<="):
        rels.append(p.take()[1])
        terms.append(p.join())
    if p.peek()[0] != "end":
        raise p.error(f"unexpected token {p.peek()[1]!r}")
    if not rels:
        raise ParseError("an identity needs '=' or '<='", len(text), text)
    if "<=" in rels:
        if len(rels) > 1:
            raise ParseError("'<=' cannot be chained", len(text), text)
        return Identity(IdentityKind.INEQUATION, terms[0], terms[1], name=name)
    return Identity(IdentityKind.EQUATION, terms[0], terms[1], tuple(terms[2:]), name=name)


def parse_identity_file(text: str) -> list[Identity]:
    """Lines of the form `name : lhs = rhs` or `name : lhs <= rhs`; `#` starts a comment."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, body = line.partition(":")
        name = name.strip()
        if not sep or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_-]*", name):
            raise ParseError(f"line {lineno}: expected 'name : identity'", 0, raw)
        try:
            out.append(parse_identity(body, name=name))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}", exc.position) from exc
    return out


_CATALOG_TEXT = {
    "integral": "x <= 1",
    "zerobounded": "0 <= x",
    "rl": "1 = 0",
    "divis": "x*(x\\(x ^ y)) = x ^ y = ((x ^ y)/x)*x",
    "divint": "x*(x\\y) = x ^ y = (y/x)*x",
    "prelin": "x\\y v y\\x = 1 = y/x v x/y",
    "mvint": "x/(y\\x) = x v y = (x/y)\\x",
    "mvgen": "x/((x v y)\\x) = x v y = (x/(x v y))\\x",
    "dblneg": "~-x = x = -~x",
    "good": "~-x = -~x",
    "lg": "1 = x*(x\\1)",
    "comm": "x*y = y*x",
    "nvalued": "x*x*(y*y) <= y*x",
}


class Catalog(dict):
    """Name -> Identity, with attribute access."""

    def __getattr__(self, name: str) -> Identity:
        try:
            return self[name]
        except KeyError:
            raise AttributeError(name) from None


def catalog() -> Catalog:
    return Catalog((k, parse_identity(v, name=k)) for k, v in _CATALOG_TEXT.items())
