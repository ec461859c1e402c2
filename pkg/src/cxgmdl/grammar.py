"""Grammar data model, the textual grammar format and canonical serialization.

A grammar file looks like::

    # base-10 numbers
    mode: constructional
    start: DS
    lexical: D DS
    d0 : <[10] ; "0" ; mu(0) = 0>
    ...
    ds : <[10] ; DS -> DS1 D ; mu(DS) = 10*mu(DS1) + mu(D)>

Header keys are ``mode``, ``start``, ``lexical`` (categories given to lexical
entries whose meaning carries no sense records), ``ppt`` (``at hour ->
event_time``) and ``conflict`` (two fact types that count as the same kind
of information).

Canonical serialization counts every character as one symbol, except the
glyphs μ, → and ⊥, which are one symbol each.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import expr as ex
from .semantics import Ontology, PPTypeTable, Sense, eval_meaning_expr, Env, EvalError

CONSTRUCTIONAL = "constructional"
LEXICALIZED = "lexicalized"
MODES = (CONSTRUCTIONAL, LEXICALIZED)


class GrammarError(ValueError):
    """Malformed grammar text or an inconsistent grammar."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


# ---------------------------------------------------------------- model

@dataclass(frozen=True)
class Context:
    params: Tuple = ()

    def render(self) -> str:
        return "[" + ",".join(str(p) for p in self.params) + "]"


@dataclass(frozen=True)
class Element:
    """One rhs element: a terminal token or a category with an optional type constraint."""
    name: str
    terminal: bool = False
    constraint: Optional[Tuple[str, ...]] = None

    @property
    def category(self) -> str:
        # DS1, CL1, noun2 ... are numbered copies of DS, CL, noun
        return self.name.rstrip("0123456789") or self.name

    @property
    def sem_type(self) -> Optional[str]:
        if not self.constraint:
            return None
        t = self.constraint[0]
        return None if t[:1].isupper() else t

    def render(self) -> str:
        if self.terminal:
            return f'"{self.name}"'
        if self.constraint:
            return f"{self.name}({','.join(self.constraint)})"
        return self.name


@dataclass(frozen=True)
class FormPattern:
    lhs: Optional[str]
    rhs: Tuple[Element, ...]

    @property
    def is_lexical(self) -> bool:
        return self.lhs is None

    @property
    def token(self) -> str:
        return self.rhs[0].name

    def render(self, glyphs: bool = False) -> str:
        if self.lhs is None:
            return self.rhs[0].name if glyphs else f'"{self.rhs[0].name}"'
        if glyphs:
            return f"{self.lhs}{ex.ARROW}" + ",".join(e.render() for e in self.rhs)
        return f"{self.lhs} -> " + " ".join(e.render() for e in self.rhs)


@dataclass(frozen=True)
class MeaningExpr:
    head: str
    body: ex.Expr

    def render(self, glyphs: bool = False) -> str:
        return ex.render_meaning(self.head, self.body, glyphs)


@dataclass(frozen=True)
class Construction:
    name: str
    context: Context
    form: FormPattern
    meaning: MeaningExpr

    @property
    def is_lexical(self) -> bool:
        return self.form.is_lexical

    def render(self) -> str:
        return (f"{self.name} : <{self.context.render()} ; {self.form.render()} ; "
                f"{self.meaning.render()}>")

    def canonical(self) -> str:
        return (f"<{self.context.render()};{self.form.render(glyphs=True)};"
                f"{self.meaning.render(glyphs=True)}>")

    def resolve(self, ref: str) -> Optional[int]:
        """Map a meaning reference to a 0-based rhs index (or -1 for the head)."""
        if self.is_lexical:
            return -1 if ref == self.form.token else None
        if ref == self.form.lhs and ref not in self.labels():
            return -1
        labels = self.labels()
        if labels.count(ref) == 1:
            return labels.index(ref)
        if ref.isdigit() and 1 <= int(ref) <= len(self.form.rhs):
            return int(ref) - 1
        return None

    def labels(self) -> List[str]:
        return [e.name if not e.terminal else "" for e in self.form.rhs]


@dataclass
class Grammar:
    constructions: Tuple[Construction, ...]
    mode: str = CONSTRUCTIONAL
    start: Tuple[str, ...] = ()
    lexical_categories: Tuple[str, ...] = ()
    ppt: PPTypeTable = field(default_factory=PPTypeTable)
    conflicts: Tuple[Tuple[str, str], ...] = ()
    name: str = ""

    def __post_init__(self):
        self.constructions = tuple(self.constructions)
        self.start = tuple(self.start)
        self.lexical_categories = tuple(self.lexical_categories)
        self.conflicts = tuple(tuple(c) for c in self.conflicts)
        self._ontology = Ontology(self.ppt, frozenset(self.conflicts))

    @property
    def ontology(self) -> Ontology:
        return self._ontology

    @property
    def lexicon(self) -> Tuple[Construction, ...]:
        return tuple(c for c in self.constructions if c.is_lexical)

    @property
    def rules(self) -> Tuple[Construction, ...]:
        return tuple(c for c in self.constructions if not c.is_lexical)

    def get(self, name: str) -> Construction:
        for c in self.constructions:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def alphabet(self) -> Tuple[str, ...]:
        return tuple(sorted(set(canonical_serialize(self))))

    def vocabulary(self) -> Tuple[str, ...]:
        """Every token the grammar knows: lexical terminals and rule terminals."""
        seen = dict.fromkeys(c.form.token for c in self.lexicon)
        for r in self.rules:
            for e in r.form.rhs:
                if e.terminal:
                    seen.setdefault(e.name)
        return tuple(seen)

    def declarations(self) -> List[str]:
        """Canonical strings of the header declarations (the table section)."""
        out = []
        if self.start:
            out.append(f"start({','.join(self.start)})")
        if self.lexical_categories:
            out.append(f"lexical({','.join(self.lexical_categories)})")
        for p, n, f in self.ppt.rows():
            out.append(f"ppt({p},{n})={f}")
        for a, b in self.conflicts:
            out.append(f"conflict({a},{b})")
        return out


# ---------------------------------------------------------------- lexical alternatives

@dataclass(frozen=True)
class Alternative:
    """One reading of a lexical entry: the sense it fixes and its meaning body."""
    index: int
    sense: Optional[Sense]
    body: Optional[ex.Expr]  # None: the meaning is the sense record itself
    categories: Tuple[str, ...]


def alternatives(g: Grammar, c: Construction) -> Tuple[Alternative, ...]:
    body = c.meaning.body
    out = []
    if isinstance(body, ex.SetLit) and body.items and all(isinstance(i, ex.Call) for i in body.items):
        for k, item in enumerate(body.items):
            s = _const_sense(item)
            out.append(Alternative(k, s, None, g.lexical_categories or (s.cat,)))
    elif isinstance(body, ex.SenseCase):
        for k, (key, b) in enumerate(body.cases):
            s = _const_sense(key)
            out.append(Alternative(k, s, b, g.lexical_categories or (s.cat,)))
    else:
        out.append(Alternative(0, None, body, g.lexical_categories))
    return tuple(out)


def _const_sense(e: ex.Expr) -> Sense:
    try:
        v = eval_meaning_expr(e, Env())
    except EvalError as err:
        raise GrammarError(f"bad sense record: {err}") from None
    if not isinstance(v, Sense):
        raise GrammarError(f"not a sense record: {ex.render_expr(e)}")
    return v


# ---------------------------------------------------------------- text format

_DECL_RE = re.compile(r"^\s*(mode|start|lexical|ppt|conflict)\s*:\s*(.*?)\s*$")
_CONS_RE = re.compile(r"^\s*([A-Za-z_]\w*)\s*:\s*<(.*)>\s*$")
_ELEM_RE = re.compile(r'\s*(?:"([^"]*)"|([A-Za-z_]\w*)(?:\(([^)]*)\))?)')


def _strip_comment(line: str) -> str:
    out, quoted = [], False
    for ch in line:
        if ch == '"':
            quoted = not quoted
        if ch == "#" and not quoted:
            break
        out.append(ch)
    return "".join(out)


def _parse_context(text: str, line: int, col: int) -> Context:
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise GrammarError("context must be a bracketed list like [10] or []", line, col)
    inner = t[1:-1].strip()
    params = []
    if inner:
        for p in inner.split(","):
            p = p.strip()
            if not re.fullmatch(r"\w+", p):
                raise GrammarError(f"bad context parameter {p!r}", line, col)
            params.append(int(p) if p.isdigit() else p)
    return Context(tuple(params))


def _parse_form(text: str, line: int, col: int) -> FormPattern:
    t = text.strip()
    arrow = "->" if "->" in t else ("→" if "→" in t else None)
    if arrow is None:
        m = re.fullmatch(r'"([^"]+)"', t)
        if not m or not m.group(1).strip() or any(ch.isspace() for ch in m.group(1)):
            raise GrammarError("a lexical form is one quoted token", line, col)
        return FormPattern(None, (Element(m.group(1), terminal=True),))
    lhs, rhs_text = t.split(arrow, 1)
    lhs = lhs.strip()
    if not re.fullmatch(r"[A-Za-z_]\w*", lhs):
        raise GrammarError(f"bad lhs category {lhs!r}", line, col)
    rhs = []
    pos = 0
    rhs_text = rhs_text.strip()
    while pos < len(rhs_text):
        m = _ELEM_RE.match(rhs_text, pos)
        if not m or m.end() == pos:
            raise GrammarError(f"bad rhs element near {rhs_text[pos:]!r}", line, col)
        if m.group(1) is not None:
            rhs.append(Element(m.group(1), terminal=True))
        else:
            cons = None
            if m.group(3) is not None:
                cons = tuple(x.strip() for x in m.group(3).split(",") if x.strip())
                if not 1 <= len(cons) <= 2:
                    raise GrammarError("feature constraints are (type) or (type,Var)", line, col)
            rhs.append(Element(m.group(2), constraint=cons))
        pos = m.end()
        while pos < len(rhs_text) and rhs_text[pos] in " \t,":
            pos += 1
    if not rhs:
        raise GrammarError("structural rule with empty rhs", line, col)
    return FormPattern(lhs, tuple(rhs))


def _split_triple(body: str, line: int, col: int):
    # context and form never contain ';', the meaning may
    parts = body.split(";", 2)
    if len(parts) != 3:
        raise GrammarError("construction must be <context ; form ; meaning>", line, col)
    return parts


def parse_construction(text: str, line: int = 0) -> Construction:
    m = _CONS_RE.match(text)
    if not m:
        raise GrammarError("expected 'name : <context ; form ; meaning>'", line, 1)
    name, body = m.group(1), m.group(2)
    base = m.start(2)
    ctx_t, form_t, mean_t = _split_triple(body, line, base + 1)
    context = _parse_context(ctx_t, line, base + 1)
    form = _parse_form(form_t, line, base + len(ctx_t) + 2)
    mcol = base + len(ctx_t) + len(form_t) + 2
    try:
        head, mbody = ex.parse_meaning(mean_t, mcol)
    except ex.ExprSyntaxError as err:
        raise GrammarError(str(err).rsplit(" (column", 1)[0], line, err.column + 1) from None
    c = Construction(name, context, form, MeaningExpr(head, mbody))
    expected = form.token if form.is_lexical else form.lhs
    if head != expected:
        raise GrammarError(f"meaning head mu({head}) does not name the form {expected!r}",
                           line, mcol + 1)
    for ref in ex.mu_refs(mbody):
        if c.resolve(ref) is None:
            raise GrammarError(f"unresolved constituent reference mu({ref}) in {name}",
                               line, mcol + 1)
    return c


def parse_grammar_text(text: str, name: str = "") -> Grammar:
    mode = None
    start: List[str] = []
    lexcats: List[str] = []
    ppt_rows = []
    conflicts = []
    cons: List[Construction] = []
    names: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        d = _DECL_RE.match(line)
        if d and "<" not in line:
            key, val = d.group(1), d.group(2)
            if key == "mode":
                if val not in MODES:
                    raise GrammarError(f"unknown mode {val!r}", lineno, 1)
                mode = val
            elif key == "start":
                start.extend(val.split())
            elif key == "lexical":
                lexcats.extend(val.split())
            elif key == "ppt":
                m = re.fullmatch(r"(\S+)\s+(\S+)\s*->\s*(\S+)", val)
                if not m:
                    raise GrammarError("ppt declarations read 'prep type -> fact_type'", lineno, 1)
                ppt_rows.append(m.groups())
            elif key == "conflict":
                parts = val.split()
                if len(parts) != 2:
                    raise GrammarError("conflict declarations name two fact types", lineno, 1)
                conflicts.append(tuple(parts))
            continue
        c = parse_construction(line, lineno)
        if c.name in names:
            raise GrammarError(f"duplicate construction name {c.name!r} "
                               f"(first on line {names[c.name]})", lineno, 1)
        names[c.name] = lineno
        cons.append(c)
    if not cons:
        raise GrammarError("no constructions")
    try:
        table = PPTypeTable(ppt_rows)
    except ValueError as err:
        raise GrammarError(str(err)) from None
    return Grammar(tuple(cons), mode or CONSTRUCTIONAL, tuple(start), tuple(lexcats),
                   table, tuple(conflicts), name)


def render(g: Grammar) -> str:
    lines = [f"mode: {g.mode}"]
    if g.start:
        lines.append("start: " + " ".join(g.start))
    if g.lexical_categories:
        lines.append("lexical: " + " ".join(g.lexical_categories))
    for p, n, f in g.ppt.rows():
        lines.append(f"ppt: {p} {n} -> {f}")
    for a, b in g.conflicts:
        lines.append(f"conflict: {a} {b}")
    lines.extend(c.render() for c in g.constructions)
    return "\n".join(lines) + "\n"


def load_grammar(path) -> Grammar:
    with open(path, encoding="utf-8") as fh:
        return parse_grammar_text(fh.read(), name=str(path))


# ---------------------------------------------------------------- canonical form

def serialize_construction(c: Construction) -> List[str]:
    return list(c.canonical())


def canonical_serialize(g: Grammar) -> List[str]:
    """Header declarations, then constructions in declaration order, one symbol per item."""
    out: List[str] = []
    for d in g.declarations():
        out.extend(d)
    for c in g.constructions:
        out.extend(c.canonical())
    return out


# ---------------------------------------------------------------- validation

@dataclass
class ValidationReport:
    errors: List[Tuple[str, str]] = field(default_factory=list)
    warnings: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __str__(self):
        lines = [f"error   {n}: {m}" for n, m in self.errors]
        lines += [f"warning {n}: {m}" for n, m in self.warnings]
        return "\n".join(lines) or "ok"


def universal_fold(c: Construction) -> Optional[str]:
    """'sum' or 'append' when ``c`` is a universal left fold ``X -> X1 Y``, else None."""
    f = c.form
    if f.lhs is None or len(f.rhs) != 2 or any(e.terminal or e.constraint for e in f.rhs):
        return None
    first, second = f.rhs
    if first.category != f.lhs or first.name == f.lhs:
        return None
    body = c.meaning.body
    if not (isinstance(body, ex.BinOp) and body.op in ("+", "++")):
        return None
    if body.lhs != ex.Mu(first.name) or body.rhs != ex.Mu(second.name):
        return None
    return "sum" if body.op == "+" else "append"


def validate(g: Grammar) -> ValidationReport:
    rep = ValidationReport()
    seen = set()
    for c in g.constructions:
        if c.name in seen:
            rep.errors.append((c.name, "duplicate construction name"))
        seen.add(c.name)
        f = c.form
        if f.is_lexical:
            if len(f.rhs) != 1 or not f.rhs[0].terminal:
                rep.errors.append((c.name, "lexical entry must have exactly one terminal"))
        elif not any(not e.terminal for e in f.rhs):
            rep.errors.append((c.name, "structural rule needs at least one category on its rhs"))
        for ref in ex.mu_refs(c.meaning.body):
            if c.resolve(ref) is None:
                rep.errors.append((c.name, f"unresolved constituent reference mu({ref})"))
        body = c.meaning.body
        if g.mode == CONSTRUCTIONAL and ex.uses_global_features(body):
            rep.errors.append((c.name, "global feature in constructional mode"))
        if any(isinstance(n, ex.BaseRef) for n in ex.walk(body)) and not c.context.params:
            rep.errors.append((c.name, "Base referenced but the context is empty"))
        if not f.is_lexical:
            if g.mode == LEXICALIZED and universal_fold(c) is None:
                rep.errors.append((c.name, "non-universal structural rule in lexicalized mode"))
            if any(isinstance(n, (ex.Pos, ex.Accum, ex.Left)) for n in ex.walk(body)):
                rep.errors.append((c.name, "global features are only legal in lexical entries"))
        else:
            try:
                alts = alternatives(g, c)
            except GrammarError as err:
                rep.errors.append((c.name, str(err)))
                continue
            if not all(a.categories for a in alts):
                rep.errors.append((c.name, "lexical entry has no category "
                                           "(declare 'lexical:' or use sense records)"))
    contexts = {c.context for c in g.constructions}
    if len(contexts) > 1:
        rep.warnings.append(("", f"constructions disagree on context: "
                                 f"{sorted(x.render() for x in contexts)}"))
    if not g.start:
        rep.errors.append(("", "no start category declared"))
    produced = set(g.lexical_categories)
    for c in g.lexicon:
        try:
            for a in alternatives(g, c):
                produced.update(a.categories)
        except GrammarError:
            pass
    produced.update(r.form.lhs for r in g.rules)
    for r in g.rules:
        for e in r.form.rhs:
            if not e.terminal and e.category not in produced:
                rep.warnings.append((r.name, f"category {e.category} is never produced"))
    for s in g.start:
        if s not in produced:
            rep.errors.append(("", f"start category {s} is never produced"))
    folds = {universal_fold(r) for r in g.rules}
    if g.mode == LEXICALIZED and len(folds) > 1:
        rep.errors.append(("", "a lexicalized grammar uses a single universal fold"))
    return rep
