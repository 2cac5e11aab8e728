"""Syntax, states and expression evaluation for a small concurrent
imperative language.

Statements cover assignment, skip, sequencing, if/while, parallel
composition, atomic blocks and await.  Expressions are two-sorted:
integer expressions appear on the right of `:=`, boolean expressions in
guard positions.  Sorts are enforced by the grammar, so a well-parsed
program never mixes them.

The auxiliary forms `ParL`, `ParR` and `Suspend` are never produced by
the parser; they exist for the single-step reduction machinery only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator


# ---------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Arith:
    op: str  # '+', '-', '*'
    left: "IExpr"
    right: "IExpr"


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Cmp:
    op: str  # '=', '<', '<='
    left: "IExpr"
    right: "IExpr"


@dataclass(frozen=True)
class Not:
    arg: "BExpr"


@dataclass(frozen=True)
class And:
    left: "BExpr"
    right: "BExpr"


@dataclass(frozen=True)
class Or:
    left: "BExpr"
    right: "BExpr"


IExpr = IntLit | Var | Arith
BExpr = BoolLit | Cmp | Not | And | Or


# ---------------------------------------------------------------------------
# Statements


@dataclass(frozen=True)
class Assign:
    var: str
    expr: IExpr


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Seq:
    first: "Stmt"
    second: "Stmt"


@dataclass(frozen=True)
class If:
    guard: BExpr
    then: "Stmt"
    els: "Stmt"


@dataclass(frozen=True)
class While:
    guard: BExpr
    body: "Stmt"


@dataclass(frozen=True)
class Par:
    left: "Stmt"
    right: "Stmt"


@dataclass(frozen=True)
class Atomic:
    body: "Stmt"


@dataclass(frozen=True)
class Await:
    guard: BExpr
    body: "Stmt"


# Auxiliary forms used by single-step reduction only.


@dataclass(frozen=True)
class ParL:
    left: "Stmt"
    right: "Stmt"


@dataclass(frozen=True)
class ParR:
    left: "Stmt"
    right: "Stmt"


@dataclass(frozen=True)
class Suspend:
    pass


Stmt = Assign | Skip | Seq | If | While | Par | Atomic | Await | ParL | ParR | Suspend

SKIP = Skip()
SUSPEND = Suspend()


def has_auxiliary(s: Stmt) -> bool:
    """True if s contains any of the reduction-only statement forms."""
    if isinstance(s, (ParL, ParR, Suspend)):
        return True
    if isinstance(s, Seq):
        return has_auxiliary(s.first) or has_auxiliary(s.second)
    if isinstance(s, Par):
        return has_auxiliary(s.left) or has_auxiliary(s.right)
    if isinstance(s, If):
        return has_auxiliary(s.then) or has_auxiliary(s.els)
    if isinstance(s, While):
        return has_auxiliary(s.body)
    if isinstance(s, (Atomic, Await)):
        return has_auxiliary(s.body)
    return False


def stmt_vars(s: Stmt) -> set[str]:
    """All variable names occurring in s (read or written)."""
    out: set[str] = set()

    def expr(e) -> None:
        if isinstance(e, Var):
            out.add(e.name)
        elif isinstance(e, Arith):
            expr(e.left)
            expr(e.right)
        elif isinstance(e, Cmp):
            expr(e.left)
            expr(e.right)
        elif isinstance(e, Not):
            expr(e.arg)
        elif isinstance(e, (And, Or)):
            expr(e.left)
            expr(e.right)

    def walk(s: Stmt) -> None:
        if isinstance(s, Assign):
            out.add(s.var)
            expr(s.expr)
        elif isinstance(s, Seq):
            walk(s.first)
            walk(s.second)
        elif isinstance(s, If):
            expr(s.guard)
            walk(s.then)
            walk(s.els)
        elif isinstance(s, While):
            expr(s.guard)
            walk(s.body)
        elif isinstance(s, (Par, ParL, ParR)):
            walk(s.left)
            walk(s.right)
        elif isinstance(s, Atomic):
            walk(s.body)
        elif isinstance(s, Await):
            expr(s.guard)
            walk(s.body)

    walk(s)
    return out


def read_vars(s: Stmt) -> set[str]:
    """Variable names read in some expression of s."""
    out: set[str] = set()

    def expr(e) -> None:
        if isinstance(e, Var):
            out.add(e.name)
        elif isinstance(e, (Arith, Cmp, And, Or)):
            expr(e.left)
            expr(e.right)
        elif isinstance(e, Not):
            expr(e.arg)

    def walk(s: Stmt) -> None:
        if isinstance(s, Assign):
            expr(s.expr)
        elif isinstance(s, Seq):
            walk(s.first)
            walk(s.second)
        elif isinstance(s, If):
            expr(s.guard)
            walk(s.then)
            walk(s.els)
        elif isinstance(s, While):
            expr(s.guard)
            walk(s.body)
        elif isinstance(s, (Par, ParL, ParR)):
            walk(s.left)
            walk(s.right)
        elif isinstance(s, Atomic):
            walk(s.body)
        elif isinstance(s, Await):
            expr(s.guard)
            walk(s.body)

    walk(s)
    return out


def assigned_vars(s: Stmt) -> set[str]:
    out: set[str] = set()

    def walk(s: Stmt) -> None:
        if isinstance(s, Assign):
            out.add(s.var)
        elif isinstance(s, Seq):
            walk(s.first)
            walk(s.second)
        elif isinstance(s, If):
            walk(s.then)
            walk(s.els)
        elif isinstance(s, While):
            walk(s.body)
        elif isinstance(s, (Par, ParL, ParR)):
            walk(s.left)
            walk(s.right)
        elif isinstance(s, (Atomic, Await)):
            walk(s.body)

    walk(s)
    return out


# ---------------------------------------------------------------------------
# States


@dataclass(frozen=True)
class State:
    """Immutable finite map from variable names to integers.

    Unmapped names read as 0, which keeps expression evaluation total.
    """

    bindings: tuple[tuple[str, int], ...] = ()

    @staticmethod
    def of(**kwargs: int) -> "State":
        return State(tuple(sorted(kwargs.items())))

    @staticmethod
    def from_dict(d: dict[str, int]) -> "State":
        return State(tuple(sorted(d.items())))

    def get(self, name: str) -> int:
        for k, v in self.bindings:
            if k == name:
                return v
        return 0

    def set(self, name: str, value: int) -> "State":
        items = dict(self.bindings)
        items[name] = value
        return State(tuple(sorted(items.items())))

    def names(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.bindings)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{k}={v}" for k, v in self.bindings) + "}"


EMPTY_STATE = State()


_STATE_RE = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*)\s*=\s*(-?[0-9]+)\s*")


def parse_state(text: str) -> State:
    """Parse a state literal such as `{x=0, y=3}` or `{}`."""
    t = text.strip()
    if not (t.startswith("{") and t.endswith("}")):
        raise ParseError("state literal must be enclosed in { }", 1, 1)
    inner = t[1:-1].strip()
    if not inner:
        return EMPTY_STATE
    items: dict[str, int] = {}
    for part in inner.split(","):
        m = _STATE_RE.fullmatch(part)
        if not m:
            raise ParseError(f"bad state entry {part.strip()!r}", 1, 1)
        items[m.group(1)] = int(m.group(2))
    return State.from_dict(items)


# ---------------------------------------------------------------------------
# Expression evaluation


def eval_expr(e: IExpr, sigma: State) -> int:
    """Value of an integer expression in sigma; total."""
    if isinstance(e, IntLit):
        return e.value
    if isinstance(e, Var):
        return sigma.get(e.name)
    if isinstance(e, Arith):
        a = eval_expr(e.left, sigma)
        b = eval_expr(e.right, sigma)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        raise ValueError(f"unknown arithmetic operator {e.op!r}")
    raise TypeError(f"not an integer expression: {e!r}")


def sat(e: BExpr, sigma: State) -> bool:
    """Truth of a boolean expression in sigma; total."""
    if isinstance(e, BoolLit):
        return e.value
    if isinstance(e, Cmp):
        a = eval_expr(e.left, sigma)
        b = eval_expr(e.right, sigma)
        if e.op == "=":
            return a == b
        if e.op == "<":
            return a < b
        if e.op == "<=":
            return a <= b
        raise ValueError(f"unknown comparison operator {e.op!r}")
    if isinstance(e, Not):
        return not sat(e.arg, sigma)
    if isinstance(e, And):
        return sat(e.left, sigma) and sat(e.right, sigma)
    if isinstance(e, Or):
        return sat(e.left, sigma) or sat(e.right, sigma)
    raise TypeError(f"not a boolean expression: {e!r}")


# ---------------------------------------------------------------------------
# Pretty printing
#
# Statement precedence: `||` loosest, then `;`, then atoms; both binary
# forms associate to the right.  Arithmetic is printed without spaces
# (`x+2`), comparisons and boolean connectives with spaces (`x = 0`).

_PREC_PAR = 0
_PREC_SEQ = 1
_PREC_ATOM = 2


def _pretty_iexpr(e: IExpr, prec: int = 0) -> str:
    # prec levels: 0 additive, 1 multiplicative, 2 primary
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Arith):
        if e.op in "+-":
            mine = 0
        else:
            mine = 1
        text = f"{_pretty_iexpr(e.left, mine)}{e.op}{_pretty_iexpr(e.right, mine + 1)}"
        return f"({text})" if mine < prec else text
    raise TypeError(f"not an integer expression: {e!r}")


def _pretty_bexpr(e: BExpr, prec: int = 0) -> str:
    # prec levels: 0 or, 1 and, 2 not, 3 primary
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, Cmp):
        return f"{_pretty_iexpr(e.left)} {e.op} {_pretty_iexpr(e.right)}"
    if isinstance(e, Not):
        text = f"not {_pretty_bexpr(e.arg, 2)}"
        return f"({text})" if prec > 2 else text
    if isinstance(e, (And, Or)):
        word = "and" if isinstance(e, And) else "or"
        mine = 1 if isinstance(e, And) else 0
        text = f"{_pretty_bexpr(e.left, mine + 1)} {word} {_pretty_bexpr(e.right, mine)}"
        return f"({text})" if mine < prec else text
    raise TypeError(f"not a boolean expression: {e!r}")


def pretty(s: Stmt, prec: int = _PREC_PAR) -> str:
    """Concrete syntax for s; `parse(pretty(s)) == s` for parser-grammar
    statements.  Auxiliary forms render with their display glyphs and are
    not re-parseable."""
    if isinstance(s, Assign):
        return f"{s.var} := {_pretty_iexpr(s.expr)}"
    if isinstance(s, Skip):
        return "skip"
    if isinstance(s, Suspend):
        return "suspend"
    if isinstance(s, Seq):
        text = f"{pretty(s.first, _PREC_ATOM)}; {pretty(s.second, _PREC_SEQ)}"
        return f"({text})" if _PREC_SEQ < prec else text
    if isinstance(s, (Par, ParL, ParR)):
        glyph = {"Par": "||", "ParL": "⌊", "ParR": "⌋"}[type(s).__name__]
        text = f"{pretty(s.left, _PREC_SEQ)} {glyph} {pretty(s.right, _PREC_PAR)}"
        return f"({text})" if _PREC_PAR < prec else text
    if isinstance(s, If):
        return (
            f"if {_pretty_bexpr(s.guard)} then {pretty(s.then)} "
            f"else {pretty(s.els)} fi"
        )
    if isinstance(s, While):
        return f"while {_pretty_bexpr(s.guard)} do {pretty(s.body)} od"
    if isinstance(s, Atomic):
        return f"atomic {{ {pretty(s.body)} }}"
    if isinstance(s, Await):
        if isinstance(s.body, (Seq, Par)):
            return f"await {_pretty_bexpr(s.guard)} then {{ {pretty(s.body)} }}"
        return f"await {_pretty_bexpr(s.guard)} then {pretty(s.body, _PREC_ATOM)}"
    raise TypeError(f"not a statement: {s!r}")


# ---------------------------------------------------------------------------
# Parsing


class ParseError(Exception):
    """Syntax or sort error, with source position."""

    def __init__(self, message: str, line: int, col: int, kind: str = "syntax"):
        super().__init__(f"{kind} error at {line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col
        self.kind = kind


KEYWORDS = {
    "skip",
    "if",
    "then",
    "else",
    "fi",
    "while",
    "do",
    "od",
    "atomic",
    "await",
    "true",
    "false",
    "not",
    "and",
    "or",
    "suspend",
}

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<int>[0-9]+)
    | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
    | (?P<op>:=|<=|\|\||[;()\{\}+\-*=<])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'int', 'ident', 'kw', 'op', 'eof'
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if not m:
            raise ParseError(f"unexpected character {source[pos]!r}", line, col)
        text = m.group(0)
        if m.lastgroup != "ws":
            kind = m.lastgroup
            if kind == "ident" and text in KEYWORDS:
                kind = "kw"
            tokens.append(Token(kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.next()

    def error(self, message: str, kind: str = "syntax"):
        t = self.peek()
        raise ParseError(message, t.line, t.col, kind)

    # statements

    def stmt(self) -> Stmt:
        left = self.seq()
        if self.peek().text == "||":
            self.next()
            return Par(left, self.stmt())
        return left

    def seq(self) -> Stmt:
        left = self.atom()
        if self.peek().text == ";":
            self.next()
            return Seq(left, self.seq())
        return left

    def atom(self) -> Stmt:
        t = self.peek()
        if t.text == "skip":
            self.next()
            return SKIP
        if t.text == "if":
            self.next()
            guard = self.bexpr()
            self.expect("then")
            then = self.stmt()
            self.expect("else")
            els = self.stmt()
            self.expect("fi")
            return If(guard, then, els)
        if t.text == "while":
            self.next()
            guard = self.bexpr()
            self.expect("do")
            body = self.stmt()
            self.expect("od")
            return While(guard, body)
        if t.text == "atomic":
            self.next()
            self.expect("{")
            body = self.stmt()
            self.expect("}")
            return Atomic(body)
        if t.text == "await":
            self.next()
            guard = self.bexpr()
            self.expect("then")
            if self.peek().text == "{":
                self.next()
                body = self.stmt()
                self.expect("}")
            else:
                body = self.atom()
            return Await(guard, body)
        if t.text == "(":
            self.next()
            inner = self.stmt()
            self.expect(")")
            return inner
        if t.kind == "ident":
            name = self.next().text
            self.expect(":=")
            return Assign(name, self.iexpr())
        if t.text in ("true", "false"):
            self.error("boolean expression in statement position", kind="type")
        self.error(f"expected a statement, found {t.text or 'end of input'!r}")

    # integer expressions

    def iexpr(self) -> IExpr:
        left = self.iterm()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            left = Arith(op, left, self.iterm())
        return left

    def iterm(self) -> IExpr:
        left = self.ifactor()
        while self.peek().text == "*":
            self.next()
            left = Arith("*", left, self.ifactor())
        return left

    def ifactor(self) -> IExpr:
        t = self.peek()
        if t.kind == "int":
            self.next()
            return IntLit(int(t.text))
        if t.kind == "ident":
            self.next()
            return Var(t.text)
        if t.text == "(":
            self.next()
            inner = self.iexpr()
            self.expect(")")
            return inner
        if t.text in ("true", "false") or t.text == "not":
            self.error("boolean expression in integer position", kind="type")
        self.error(f"expected an integer expression, found {t.text or 'end of input'!r}")

    # boolean expressions

    def bexpr(self) -> BExpr:
        left = self.band()
        while self.peek().text == "or":
            self.next()
            left = Or(left, self.band())
        return left

    def band(self) -> BExpr:
        left = self.bnot()
        while self.peek().text == "and":
            self.next()
            left = And(left, self.bnot())
        return left

    def bnot(self) -> BExpr:
        if self.peek().text == "not":
            self.next()
            return Not(self.bnot())
        return self.bprimary()

    def bprimary(self) -> BExpr:
        t = self.peek()
        if t.text == "true":
            self.next()
            return BoolLit(True)
        if t.text == "false":
            self.next()
            return BoolLit(False)
        # Try a comparison first; on failure a parenthesis may instead
        # open a nested boolean expression.
        saved = self.pos
        try:
            left = self.iexpr()
            op = self.peek()
            if op.text not in ("=", "<", "<="):
                self.error("integer expression in guard position (expected a comparison)", kind="type")
            self.next()
            return Cmp(op.text, left, self.iexpr())
        except ParseError as first_err:
            if t.text == "(":
                self.pos = saved
                self.next()
                inner = self.bexpr()
                self.expect(")")
                return inner
            raise first_err


def parse(source: str) -> Stmt:
    """Parse concrete syntax into a Stmt.

    Raises ParseError (kind 'syntax' or 'type') with line/column on bad
    input.  Output never contains auxiliary statement forms.
    """
    parser = _Parser(_tokenize(source))
    result = parser.stmt()
    t = parser.peek()
    if t.kind != "eof":
        raise ParseError(f"trailing input {t.text!r}", t.line, t.col)
    return result


def parse_iexpr(source: str) -> IExpr:
    parser = _Parser(_tokenize(source))
    result = parser.iexpr()
    t = parser.peek()
    if t.kind != "eof":
        raise ParseError(f"trailing input {t.text!r}", t.line, t.col)
    return result


def parse_bexpr(source: str) -> BExpr:
    parser = _Parser(_tokenize(source))
    result = parser.bexpr()
    t = parser.peek()
    if t.kind != "eof":
        raise ParseError(f"trailing input {t.text!r}", t.line, t.col)
    return result
