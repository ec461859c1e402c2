"""Semantic values, the PP typing table and the meaning-expression evaluator."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Mapping, Optional, Tuple

from . import expr as ex


class EvalError(Exception):
    """A meaning expression could not be evaluated (signals a grammar bug)."""


class _Bottom:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "⊥"

    def __reduce__(self):
        return (_Bottom, ())


class _NoneTok:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "none"

    def __reduce__(self):
        return (_NoneTok, ())


BOTTOM = _Bottom()
NONE = _NoneTok()


@dataclass(frozen=True)
class Sense:
    """A lexical sense record ``cat(type, id)``; verbs may carry a valence."""
    cat: str
    type: str
    id: str
    valence: int = 1

    def __str__(self):
        tail = f",{self.valence}" if self.valence != 1 else ""
        return f"{self.cat}({self.type},{self.id}{tail})"


@dataclass(frozen=True)
class Fact:
    """A typed fact contributed by an adjunct, e.g. ``pp(event_time, 12)``."""
    type: str
    payload: Any

    def __str__(self):
        return f"{self.type}:{show(self.payload)}"


@dataclass(frozen=True)
class Frame:
    """Ordered role pairs plus the adjunct facts attached to the clause."""
    roles: Tuple[Tuple[str, Any], ...] = ()
    facts: Tuple[Fact, ...] = ()

    def __len__(self):
        return len(self.roles) + len(self.facts)

    def fact_types(self) -> Tuple[str, ...]:
        return tuple(f.type for f in self.facts)


def show(v) -> str:
    if isinstance(v, Frame):
        roles = ",".join(f"[{r},{show(x)}]" for r, x in v.roles)
        facts = ",".join(str(f) for f in v.facts)
        return f"[{roles}]" + (f"{{{facts}}}" if v.facts else "")
    if isinstance(v, tuple):
        return "[" + ",".join(show(x) for x in v) + "]"
    if isinstance(v, frozenset):
        return "{" + ",".join(sorted(show(x) for x in v)) + "}"
    return str(v)


def normalize(v):
    """Order-insensitive form of a value, for comparing meaning sets."""
    if isinstance(v, Frame):
        return ("frame",
                tuple(sorted(((r, normalize(x)) for r, x in v.roles), key=repr)),
                tuple(sorted(((f.type, normalize(f.payload)) for f in v.facts), key=repr)))
    if isinstance(v, Fact):
        return ("fact", v.type, normalize(v.payload))
    if isinstance(v, tuple):
        return tuple(normalize(x) for x in v)
    return v


def normalize_set(values) -> FrozenSet:
    return frozenset(normalize(v) for v in values)


# ---------------------------------------------------------------- ontology

class PPTypeTable:
    """Partial map (preposition, noun semantic type) -> fact type."""

    def __init__(self, rows=()):
        self._rows: Dict[Tuple[str, str], str] = {}
        for prep, ntype, ftype in rows:
            key = (prep, ntype)
            if key in self._rows and self._rows[key] != ftype:
                raise ValueError(f"ambiguous PP type for {prep} {ntype}")
            self._rows[key] = ftype

    def lookup(self, prep: str, noun_type: str) -> Optional[str]:
        return self._rows.get((prep, noun_type))

    def rows(self):
        return [(p, n, f) for (p, n), f in self._rows.items()]

    def preps(self):
        return list(dict.fromkeys(p for p, _ in self._rows))

    def by_noun_type(self, noun_type: str):
        return [(p, f) for (p, n), f in self._rows.items() if n == noun_type]

    def fact_types(self):
        return set(self._rows.values())

    def __len__(self):
        return len(self._rows)

    def __eq__(self, other):
        return isinstance(other, PPTypeTable) and self._rows == other._rows

    def __repr__(self):
        return f"PPTypeTable({self.rows()!r})"


def pp_type_lookup(table: PPTypeTable, prep: str, noun_type: str) -> Optional[str]:
    return table.lookup(prep, noun_type)


@dataclass(frozen=True)
class Ontology:
    ppt: PPTypeTable = field(default_factory=PPTypeTable)
    conflicts: FrozenSet[Tuple[str, str]] = frozenset()

    def clash(self, a: str, b: str) -> bool:
        """Same type of information: equality or a declared (symmetric) conflict."""
        return a == b or (a, b) in self.conflicts or (b, a) in self.conflicts


EMPTY_ONTOLOGY = Ontology()


def fact_in(fact: Fact, clause: Frame, ontology: Ontology = EMPTY_ONTOLOGY) -> bool:
    return any(ontology.clash(fact.type, t) for t in clause.fact_types())


def append(a, b):
    """The plain ``++`` combinator over frames and facts."""
    if a is BOTTOM or b is BOTTOM:
        return BOTTOM
    fa, fb = _as_frame(a), _as_frame(b)
    return Frame(fa.roles + fb.roles, fa.facts + fb.facts)


def _as_frame(v) -> Frame:
    if isinstance(v, Frame):
        return v
    if isinstance(v, Fact):
        return Frame((), (v,))
    raise EvalError(f"cannot append {show(v)}")


def combine_adjunct(clause, adjunct, ontology: Ontology = EMPTY_ONTOLOGY):
    """Add ``adjunct`` to ``clause`` unless a fact of the same type is already there."""
    if clause is BOTTOM or adjunct is BOTTOM:
        return BOTTOM
    clause = _as_frame(clause)
    if fact_in(adjunct, clause, ontology):
        return BOTTOM
    return append(clause, adjunct)


# ---------------------------------------------------------------- evaluator

@dataclass
class Env:
    """Bindings visible to a meaning expression."""
    mu: Mapping[str, Any] = field(default_factory=dict)
    pos: Mapping[str, int] = field(default_factory=dict)
    context: Tuple = ()
    accum: Any = None
    left: Any = NONE
    ontology: Ontology = EMPTY_ONTOLOGY
    vars: Dict[str, Any] = field(default_factory=dict)


def _int(v, what):
    if isinstance(v, bool) or not isinstance(v, int):
        raise EvalError(f"{what}: expected a number, got {show(v)}")
    return v


def _bool(v):
    if not isinstance(v, bool):
        raise EvalError(f"expected a truth value, got {show(v)}")
    return v


def eval_meaning_expr(e: ex.Expr, env: Env):
    """Strictly evaluate ``e``; any bottom subterm makes the result bottom."""
    t = type(e)
    if t is ex.Num:
        return e.value
    if t is ex.Sym:
        return env.vars.get(e.name, e.name)
    if t is ex.BottomLit:
        return BOTTOM
    if t is ex.NoneLit:
        return NONE
    if t is ex.Mu:
        try:
            return env.mu[e.ref]
        except KeyError:
            raise EvalError(f"unbound reference mu({e.ref})") from None
    if t is ex.Pos:
        try:
            return env.pos[e.ref]
        except KeyError:
            raise EvalError(f"unbound reference pos({e.ref})") from None
    if t is ex.Accum:
        if env.accum is None:
            raise EvalError("E is not available here")
        return env.accum
    if t is ex.Left:
        return env.left
    if t is ex.BaseRef:
        if not env.context:
            raise EvalError("Base referenced with an empty context")
        return env.context[0]
    if t is ex.BinOp:
        return _binop(e, env)
    if t is ex.Neg:
        v = eval_meaning_expr(e.operand, env)
        return BOTTOM if v is BOTTOM else -_int(v, "-")
    if t is ex.Not:
        v = eval_meaning_expr(e.operand, env)
        return BOTTOM if v is BOTTOM else not _bool(v)
    if t is ex.If:
        c = eval_meaning_expr(e.cond, env)
        if c is BOTTOM:
            return BOTTOM
        return eval_meaning_expr(e.then if _bool(c) else e.orelse, env)
    if t is ex.Let:
        v = eval_meaning_expr(e.value, env)
        if v is BOTTOM:
            return BOTTOM
        saved = env.vars
        env.vars = {**saved, e.name: v}
        try:
            return eval_meaning_expr(e.body, env)
        finally:
            env.vars = saved
    if t is ex.Case:
        key = env.left
        for k, v in e.table:
            if k == key:
                return eval_meaning_expr(v, env)
        return BOTTOM
    if t is ex.Call:
        args = []
        for a in e.args:
            v = eval_meaning_expr(a, env)
            if v is BOTTOM:
                return BOTTOM
            args.append(v)
        if e.name in ex.BUILTINS:
            return _builtin(e.name, args, env)
        return _sense(e.name, args)
    if t is ex.ListLit:
        items = []
        for a in e.items:
            v = eval_meaning_expr(a, env)
            if v is BOTTOM:
                return BOTTOM
            items.append(v)
        if all(isinstance(i, tuple) and len(i) == 2 and isinstance(i[0], str) for i in items):
            return Frame(tuple(items))
        return tuple(items)
    if t is ex.SetLit:
        items = []
        for a in e.items:
            v = eval_meaning_expr(a, env)
            if v is BOTTOM:
                return BOTTOM
            items.append(v)
        return frozenset(items)
    if t is ex.SenseCase:
        raise EvalError("a sense table is only meaningful as a lexical entry")
    raise EvalError(f"cannot evaluate {e!r}")


def _sense(cat, args):
    if len(args) not in (2, 3) or not all(isinstance(a, str) for a in args[:2]):
        raise EvalError(f"malformed sense record {cat}{tuple(args)}")
    valence = _int(args[2], "valence") if len(args) == 3 else 1
    return Sense(cat, args[0], args[1], valence)


def _binop(e: ex.BinOp, env: Env):
    op = e.op
    a = eval_meaning_expr(e.lhs, env)
    if a is BOTTOM:
        return BOTTOM
    if op in ("and", "or"):
        if _bool(a) == (op == "or"):
            return a
        b = eval_meaning_expr(e.rhs, env)
        return b if b is BOTTOM else _bool(b)
    b = eval_meaning_expr(e.rhs, env)
    if b is BOTTOM:
        return BOTTOM
    if op == "++":
        return append(a, b)
    if op in ("in", "not in"):
        if isinstance(a, Fact) and isinstance(b, Frame):
            r = fact_in(a, b, env.ontology)
        elif isinstance(b, (frozenset, tuple)):
            r = a in b
        else:
            raise EvalError(f"'in' not defined for {show(a)} and {show(b)}")
        return r if op == "in" else not r
    if op == "==":
        return a == b
    if op == "!=":
        return a != b
    x, y = _int(a, op), _int(b, op)
    if op == "+":
        return x + y
    if op == "-":
        return x - y
    if op == "*":
        return x * y
    if op == "/":
        if y == 0:
            raise EvalError("division by zero")
        return x // y
    if op == "%":
        if y == 0:
            raise EvalError("modulo by zero")
        return x % y
    if op == "**":
        if y < 0:
            raise EvalError("negative exponent")
        return x ** y
    if op == "<":
        return x < y
    if op == ">":
        return x > y
    if op == "<=":
        return x <= y
    if op == ">=":
        return x >= y
    raise EvalError(f"unknown operator {op}")


def _frame_arg(v, fn) -> Frame:
    if isinstance(v, Frame):
        return v
    raise EvalError(f"{fn}() expects a frame, got {show(v)}")


def _builtin(name, args, env: Env):
    def arity(n):
        if len(args) != n:
            raise EvalError(f"{name}() takes {n} argument(s)")

    if name == "pp":
        arity(2)
        if args[0] is NONE:
            return BOTTOM
        if not isinstance(args[0], str):
            raise EvalError(f"pp() type must be a symbol, got {show(args[0])}")
        return Fact(args[0], args[1])
    if name == "ppt":
        arity(2)
        p, n = args
        if not isinstance(p, Sense) or not isinstance(n, Sense):
            raise EvalError("ppt() expects two sense records")
        ftype = env.ontology.ppt.lookup(p.type, n.type)
        return BOTTOM if ftype is None else ftype
    if name == "roles":
        arity(1)
        return tuple(r for r, _ in _frame_arg(args[0], name).roles)
    if name == "nfacts":
        arity(1)
        return len(_frame_arg(args[0], name).facts)
    if name == "len":
        arity(1)
        v = args[0]
        if not isinstance(v, (Frame, tuple, frozenset)):
            raise EvalError(f"len() of {show(v)}")
        return len(v)
    if name == "last":
        arity(1)
        f = _frame_arg(args[0], name)
        if f.facts:
            return f.facts[-1]
        if f.roles:
            return f.roles[-1]
        return NONE
    if name == "role":
        arity(2)
        f = _frame_arg(args[0], name)
        for r, v in f.roles:
            if r == args[1]:
                return v
        return BOTTOM
    if name == "type":
        arity(1)
        v = args[0]
        if isinstance(v, (Sense, Fact)):
            return v.type
        raise EvalError(f"type() of {show(v)}")
    if name == "arg":
        arity(1)
        if isinstance(args[0], Fact):
            return args[0].payload
        raise EvalError(f"arg() of {show(args[0])}")
    if name == "val":
        arity(1)
        if isinstance(args[0], Sense):
            return args[0].valence
        raise EvalError(f"val() of {show(args[0])}")
    if name == "isfact":
        arity(1)
        return isinstance(args[0], Fact)
    raise EvalError(f"unknown builtin {name}")
