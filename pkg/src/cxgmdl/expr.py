"""Meaning expressions: AST, parser and renderer.

The concrete syntax mirrors the triple notation used for constructions::

    mu(DS) = 10*mu(DS1) + mu(D)
    mu(1)  = 1*10**pos(1)
    mu(CL) = if mu(pp) in mu(CL1) then bottom else mu(CL1)++mu(pp)

Rendering has two flavours. Text mode produces the ASCII grammar-file
syntax. Glyph mode produces the canonical whitespace-free string that
description lengths are counted over, with ``mu``, ``->`` and ``bottom``
replaced by the single glyphs ``μ``, ``→`` and ``⊥``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Tuple, Union

MU = "μ"
ARROW = "→"
BOTTOM_GLYPH = "⊥"

KEYWORDS = frozenset({
    "if", "then", "else", "let", "in", "case", "of", "and", "or", "not",
    "bottom", "none", "mu", "pos", "left", "E", "Base",
})

# names that denote global (per-word) context; illegal in constructional mode
GLOBAL_FEATURES = ("pos", "E", "left")


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, column: int = 0):
        super().__init__(f"{message} (column {column + 1})")
        self.column = column


# ---------------------------------------------------------------- AST

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class BottomLit:
    pass


@dataclass(frozen=True)
class NoneLit:
    pass


@dataclass(frozen=True)
class Mu:
    ref: str


@dataclass(frozen=True)
class Pos:
    ref: str


@dataclass(frozen=True)
class Accum:
    """``E``: meaning of everything to the left of the current word."""


@dataclass(frozen=True)
class Left:
    """The left-neighbour token."""


@dataclass(frozen=True)
class BaseRef:
    pass


@dataclass(frozen=True)
class BinOp:
    op: str
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class If:
    cond: "Expr"
    then: "Expr"
    orelse: "Expr"


@dataclass(frozen=True)
class Let:
    name: str
    value: "Expr"
    body: "Expr"


@dataclass(frozen=True)
class Case:
    """Conditional table keyed on the left-neighbour token; misses give bottom."""
    table: Tuple[Tuple[str, "Expr"], ...]


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple["Expr", ...]


@dataclass(frozen=True)
class ListLit:
    items: Tuple["Expr", ...]


@dataclass(frozen=True)
class SetLit:
    items: Tuple["Expr", ...]


@dataclass(frozen=True)
class SenseCase:
    """Per-sense behaviour table of a lexicalized entry: ``{sense: expr, ...}``."""
    cases: Tuple[Tuple["Expr", "Expr"], ...]


Expr = Union[Num, Sym, BottomLit, NoneLit, Mu, Pos, Accum, Left, BaseRef, BinOp,
             Neg, Not, If, Let, Case, Call, ListLit, SetLit, SenseCase]

BUILTINS = frozenset({
    "pp", "ppt", "roles", "nfacts", "len", "last", "role", "type", "arg",
    "val", "isfact",
})

CMP_OPS = ("==", "!=", "<=", ">=", "<", ">", "in", "not in")
ADD_OPS = ("+", "-", "++")
MUL_OPS = ("*", "/", "%")


def walk(e: Expr):
    """Yield every node of ``e`` in pre-order."""
    yield e
    if isinstance(e, (BinOp,)):
        yield from walk(e.lhs)
        yield from walk(e.rhs)
    elif isinstance(e, (Neg, Not)):
        yield from walk(e.operand)
    elif isinstance(e, If):
        yield from walk(e.cond)
        yield from walk(e.then)
        yield from walk(e.orelse)
    elif isinstance(e, Let):
        yield from walk(e.value)
        yield from walk(e.body)
    elif isinstance(e, Case):
        for _, v in e.table:
            yield from walk(v)
    elif isinstance(e, Call):
        for a in e.args:
            yield from walk(a)
    elif isinstance(e, (ListLit, SetLit)):
        for a in e.items:
            yield from walk(a)
    elif isinstance(e, SenseCase):
        for k, v in e.cases:
            yield from walk(k)
            yield from walk(v)


def uses_global_features(e: Expr) -> bool:
    return any(isinstance(n, (Pos, Accum, Left)) for n in walk(e))


# ---------------------------------------------------------------- lexer

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op>\*\*|\+\+|==|!=|<=|>=|->|→|[-+*/%<>(){}\[\],:=])
  | (?P<glyph>[μ⊥])
  | (?P<word>[A-Za-z0-9_]+)
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'op', 'word', 'int', 'kw', 'eof'
    text: str
    col: int


def tokenize(text: str, offset: int = 0):
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[i]!r}", offset + i)
        kind = m.lastgroup
        s = m.group(kind)
        if kind == "glyph":
            kind, s = "kw", ("mu" if s == MU else "bottom")
        elif kind == "word":
            if s.isdigit():
                kind = "int"
            elif s in KEYWORDS:
                kind = "kw"
        if kind != "ws":
            toks.append(_Tok(kind, s, offset + i))
        i = m.end()
    toks.append(_Tok("eof", "", offset + len(text)))
    return toks


# ---------------------------------------------------------------- parser

class _Parser:
    def __init__(self, text: str, offset: int = 0):
        self.toks = tokenize(text, offset)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def advance(self) -> _Tok:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            raise ExprSyntaxError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}",
                                  self.tok.col)
        return self.advance()

    def error(self, msg: str):
        raise ExprSyntaxError(msg, self.tok.col)

    # expr := if | let | or
    def expr(self) -> Expr:
        if self.at("if"):
            self.advance()
            cond = self.expr()
            self.expect("then")
            then = self.expr()
            self.expect("else")
            return If(cond, then, self.expr())
        if self.at("let"):
            self.advance()
            if self.tok.kind != "word":
                self.error("expected a name after 'let'")
            name = self.advance().text
            self.expect("=")
            value = self.arith()
            self.expect("in")
            return Let(name, value, self.expr())
        return self.disj()

    def disj(self) -> Expr:
        e = self.conj()
        while self.at("or"):
            self.advance()
            e = BinOp("or", e, self.conj())
        return e

    def conj(self) -> Expr:
        e = self.negation()
        while self.at("and"):
            self.advance()
            e = BinOp("and", e, self.negation())
        return e

    def negation(self) -> Expr:
        if self.at("not"):
            self.advance()
            return Not(self.negation())
        return self.comparison()

    def comparison(self) -> Expr:
        e = self.arith()
        t = self.tok
        if t.kind in ("op", "kw") and t.text in ("==", "!=", "<=", ">=", "<", ">", "in"):
            self.advance()
            return BinOp(t.text, e, self.arith())
        if self.at("not") and self.peek().text == "in":
            self.advance()
            self.advance()
            return BinOp("not in", e, self.arith())
        return e

    def arith(self) -> Expr:
        e = self.term()
        while self.tok.kind == "op" and self.tok.text in ADD_OPS:
            op = self.advance().text
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.tok.kind == "op" and self.tok.text in MUL_OPS:
            op = self.advance().text
            e = BinOp(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.at("-"):
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        e = self.atom()
        if self.at("**"):
            self.advance()
            return BinOp("**", e, self.unary())
        return e

    def ref(self) -> str:
        self.expect("(")
        t = self.tok
        if t.kind not in ("word", "int", "kw"):
            self.error("expected a constituent reference")
        self.advance()
        self.expect(")")
        return t.text

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Num(int(t.text))
        if t.kind == "kw":
            if t.text == "bottom":
                self.advance()
                return BottomLit()
            if t.text == "none":
                self.advance()
                return NoneLit()
            if t.text == "E":
                self.advance()
                return Accum()
            if t.text == "left":
                self.advance()
                return Left()
            if t.text == "Base":
                self.advance()
                return BaseRef()
            if t.text == "mu":
                self.advance()
                return Mu(self.ref())
            if t.text == "pos":
                self.advance()
                return Pos(self.ref())
            if t.text == "case":
                return self.case()
            self.error(f"unexpected keyword {t.text!r}")
        if t.kind == "word":
            self.advance()
            if self.at("("):
                self.advance()
                args = []
                if not self.at(")"):
                    args.append(self.expr())
                    while self.at(","):
                        self.advance()
                        args.append(self.expr())
                self.expect(")")
                return Call(t.text, tuple(args))
            return Sym(t.text)
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if self.at("["):
            self.advance()
            items = self.items("]")
            return ListLit(tuple(items))
        if self.at("{"):
            return self.braces()
        self.error(f"unexpected {t.text or 'end of input'!r}")

    def items(self, close: str):
        items = []
        if not self.at(close):
            items.append(self.expr())
            while self.at(","):
                self.advance()
                items.append(self.expr())
        self.expect(close)
        return items

    def braces(self) -> Expr:
        self.expect("{")
        if self.at("}"):
            self.advance()
            return SetLit(())
        first = self.expr()
        if not self.at(":"):
            items = [first]
            while self.at(","):
                self.advance()
                items.append(self.expr())
            self.expect("}")
            return SetLit(tuple(items))
        cases = []
        key = first
        while True:
            self.expect(":")
            cases.append((key, self.expr()))
            if not self.at(","):
                break
            self.advance()
            key = self.expr()
        self.expect("}")
        return SenseCase(tuple(cases))

    def case(self) -> Expr:
        self.expect("case")
        self.expect("left")
        self.expect("of")
        self.expect("{")
        table = []
        while not self.at("}"):
            if self.tok.kind not in ("word", "int"):
                self.error("expected a token key in case table")
            key = self.advance().text
            self.expect(":")
            table.append((key, self.expr()))
            if self.at(","):
                self.advance()
            elif not self.at("}"):
                self.error("expected ',' or '}' in case table")
        self.expect("}")
        return Case(tuple(table))


def parse_expr(text: str, offset: int = 0) -> Expr:
    p = _Parser(text, offset)
    e = p.expr()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r} after expression")
    return e


def parse_meaning(text: str, offset: int = 0) -> Tuple[str, Expr]:
    """Parse ``mu(head) = body``; returns ``(head, body)``."""
    p = _Parser(text, offset)
    if not p.at("mu"):
        p.error("meaning must start with mu(...)")
    p.advance()
    head = p.ref()
    p.expect("=")
    body = p.expr()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r} after meaning")
    return head, body


# ---------------------------------------------------------------- renderer

_PREC = {"or": 1, "and": 2, "==": 4, "!=": 4, "<=": 4, ">=": 4, "<": 4, ">": 4,
         "in": 4, "not in": 4, "+": 5, "-": 5, "++": 5, "*": 6, "/": 6, "%": 6, "**": 8}
_WORD_OPS = ("or", "and", "in", "not in")


def _prec(e: Expr) -> int:
    if isinstance(e, (If, Let)):
        return 0
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Not):
        return 3
    if isinstance(e, Neg):
        return 7
    return 9


class _Renderer:
    def __init__(self, glyphs: bool):
        self.glyphs = glyphs
        self.sp = "" if glyphs else " "

    def kw(self, word: str) -> str:
        return word if self.glyphs else f" {word} "

    def wrap(self, e: Expr, min_prec: int) -> str:
        s = self(e)
        return f"({s})" if _prec(e) < min_prec else s

    def __call__(self, e: Expr) -> str:
        sp = self.sp
        if isinstance(e, Num):
            return str(e.value)
        if isinstance(e, Sym):
            return e.name
        if isinstance(e, BottomLit):
            return BOTTOM_GLYPH if self.glyphs else "bottom"
        if isinstance(e, NoneLit):
            return "none"
        if isinstance(e, Mu):
            return f"{MU if self.glyphs else 'mu'}({e.ref})"
        if isinstance(e, Pos):
            return f"pos({e.ref})"
        if isinstance(e, Accum):
            return "E"
        if isinstance(e, Left):
            return "left"
        if isinstance(e, BaseRef):
            return "Base"
        if isinstance(e, BinOp):
            p = _PREC[e.op]
            if e.op == "**":
                lhs, rhs = self.wrap(e.lhs, p + 1), self.wrap(e.rhs, 7)
            else:
                lhs, rhs = self.wrap(e.lhs, p), self.wrap(e.rhs, p + 1)
            op = self.kw(e.op) if e.op in _WORD_OPS else e.op
            return f"{lhs}{op}{rhs}"
        if isinstance(e, Neg):
            return f"-{self.wrap(e.operand, 7)}"
        if isinstance(e, Not):
            return f"not{sp}{self.wrap(e.operand, 3)}"
        if isinstance(e, If):
            return (f"if{sp}{self(e.cond)}{self.kw('then')}{self(e.then)}"
                    f"{self.kw('else')}{self(e.orelse)}")
        if isinstance(e, Let):
            return f"let{sp}{e.name}={self.wrap(e.value, 5)}{self.kw('in')}{self(e.body)}"
        if isinstance(e, Case):
            rows = ",".join(f"{k}:{self(v)}" for k, v in e.table)
            return f"case{sp}left{sp}of{sp}{{{rows}}}"
        if isinstance(e, Call):
            return f"{e.name}({','.join(self(a) for a in e.args)})"
        if isinstance(e, ListLit):
            return f"[{','.join(self(a) for a in e.items)}]"
        if isinstance(e, SetLit):
            return f"{{{','.join(self(a) for a in e.items)}}}"
        if isinstance(e, SenseCase):
            return "{" + ",".join(f"{self(k)}:{self(v)}" for k, v in e.cases) + "}"
        raise TypeError(f"not an expression: {e!r}")


def render_expr(e: Expr, glyphs: bool = False) -> str:
    return _Renderer(glyphs)(e)


def render_meaning(head: str, body: Expr, glyphs: bool = False) -> str:
    r = _Renderer(glyphs)
    mu = MU if glyphs else "mu"
    eq = "=" if glyphs else " = "
    return f"{mu}({head}){eq}{r(body)}"


def mu_refs(e: Expr) -> Tuple[str, ...]:
    return tuple(n.ref for n in walk(e) if isinstance(n, (Mu, Pos)))

