"""Bottom-up chart parsing, semantic evaluation and bounded language enumeration."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .grammar import (LEXICALIZED, Alternative, Construction, Grammar, alternatives,
                      universal_fold)
from .semantics import BOTTOM, NONE, Env, Frame, eval_meaning_expr


class ParseError(ValueError):
    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class UnknownToken(ParseError):
    pass


@dataclass(frozen=True, eq=False)
class ChartEdge:
    start: int
    end: int
    category: str
    construction: str
    children: Tuple[Union["ChartEdge", str], ...]
    alt: Optional[Alternative] = None  # set on lexical edges

    @property
    def span(self) -> Tuple[int, int]:
        return (self.start, self.end)

    def key(self):
        kids = tuple(c if isinstance(c, str) else id(c) for c in self.children)
        return (self.start, self.end, self.category, self.construction,
                self.alt.index if self.alt else None, kids)

    def leaves(self) -> List["ChartEdge"]:
        if self.alt is not None:
            return [self]
        out = []
        for c in self.children:
            if isinstance(c, ChartEdge):
                out.extend(c.leaves())
        return out

    def tree(self) -> str:
        if self.alt is not None:
            tag = f"{self.category}"
            if self.alt.sense is not None:
                tag += f"[{self.alt.sense}]"
            return f"({tag} {self.children[0]})"
        kids = " ".join(c.tree() if isinstance(c, ChartEdge) else repr(c) for c in self.children)
        return f"({self.category} {kids})"


@dataclass(frozen=True)
class Derivation:
    root: ChartEdge

    def tree(self) -> str:
        return self.root.tree()


class _Index:
    """Per-grammar lookup tables, cached on the grammar object."""

    def __init__(self, g: Grammar):
        self.lexical: Dict[str, List[Tuple[Construction, Alternative]]] = {}
        for c in g.lexicon:
            for a in alternatives(g, c):
                self.lexical.setdefault(c.form.token, []).append((c, a))
        self.rules = g.rules
        self.terminals = {e.name for r in self.rules for e in r.form.rhs if e.terminal}
        self.unary = [r for r in self.rules if len(r.form.rhs) == 1]
        self.nary = [r for r in self.rules if len(r.form.rhs) > 1]
        # (terminal, name, category, sem_type) per rhs element, computed once
        self.shapes = {r.name: tuple((e.terminal, e.name, e.category, e.sem_type)
                                     for e in r.form.rhs) for r in self.rules}
        self.folds = {r.name: universal_fold(r) for r in self.rules}


def _index(g: Grammar) -> _Index:
    idx = g.__dict__.get("_parse_index")
    if idx is None:
        idx = _Index(g)
        g.__dict__["_parse_index"] = idx
    return idx


_MAX_UNARY_ROUNDS = 8


def _type_ok(t, edge: ChartEdge) -> bool:
    if t is None:
        return True
    return edge.alt is not None and edge.alt.sense is not None and edge.alt.sense.type == t


class Chart:
    def __init__(self, g: Grammar, tokens: Sequence[str]):
        self.g = g
        self.tokens = list(tokens)
        self.idx = _index(g)
        self.cells: Dict[Tuple[int, int], List[ChartEdge]] = {}
        self.by_start: Dict[Tuple[int, str], List[ChartEdge]] = {}
        self._seen = set()

    def edges(self):
        for cell in self.cells.values():
            yield from cell

    def __len__(self):
        return sum(len(c) for c in self.cells.values())

    def add(self, edge: ChartEdge) -> bool:
        k = edge.key()
        if k in self._seen:
            return False
        self._seen.add(k)
        self.cells.setdefault(edge.span, []).append(edge)
        self.by_start.setdefault((edge.start, edge.category), []).append(edge)
        return True

    def fill(self):
        n = len(self.tokens)
        for i, tok in enumerate(self.tokens):
            entries = self.idx.lexical.get(tok)
            if not entries and tok not in self.idx.terminals:
                raise UnknownToken(f"unknown token {tok!r} at index {i}", i)
            for c, a in entries or ():
                for cat in a.categories:
                    self.add(ChartEdge(i, i + 1, cat, c.name, (tok,), a))
            self._unary(i, i + 1)
        for length in range(2, n + 1):
            for i in range(0, n - length + 1):
                j = i + length
                for r in self.idx.nary:
                    for kids in list(self._match(self.idx.shapes[r.name], 0, i, j)):
                        self.add(ChartEdge(i, j, r.form.lhs, r.name, kids))
                self._unary(i, j)
        return self

    def _unary(self, i, j):
        if not self.idx.unary:
            return
        for _ in range(_MAX_UNARY_ROUNDS):
            added = False
            for r in self.idx.unary:
                terminal, name, cat, t = self.idx.shapes[r.name][0]
                if terminal:
                    if j == i + 1 and self.tokens[i] == name:
                        added |= self.add(ChartEdge(i, j, r.form.lhs, r.name, (name,)))
                    continue
                for e in list(self.cells.get((i, j), ())):
                    if e.category == cat and _type_ok(t, e):
                        added |= self.add(ChartEdge(i, j, r.form.lhs, r.name, (e,)))
            if not added:
                return

    def _match(self, rhs, k, i, j):
        """Yield child tuples covering [i, j) for rhs[k:]."""
        terminal, name, cat, t = rhs[k]
        last = k == len(rhs) - 1
        if terminal:
            if i < j and self.tokens[i] == name:
                if last:
                    if i + 1 == j:
                        yield (name,)
                else:
                    for rest in self._match(rhs, k + 1, i + 1, j):
                        yield (name,) + rest
            return
        limit = j - (len(rhs) - k - 1)
        for e in self.by_start.get((i, cat), ()):
            m = e.end
            if (m != j if last else m > limit) or not _type_ok(t, e):
                continue
            if last:
                yield (e,)
            else:
                for rest in self._match(rhs, k + 1, m, j):
                    yield (e,) + rest

    def derivations(self) -> List[Derivation]:
        roots = [e for e in self.cells.get((0, len(self.tokens)), ()) if e.category in self.g.start]
        return [Derivation(e) for e in roots]


def chart(g: Grammar, tokens: Sequence[str]) -> Chart:
    if not tokens:
        raise ParseError("empty input")
    return Chart(g, tokens).fill()


def parse(g: Grammar, tokens: Sequence[str]) -> List[Derivation]:
    """All derivations of ``tokens`` (syntax only), in chart order."""
    return chart(g, tokens).derivations()


# ---------------------------------------------------------------- evaluation

def _fold_identity(g: Grammar):
    kinds = {universal_fold(r) for r in g.rules} - {None}
    if kinds == {"append"}:
        return Frame()
    return 0


def evaluate(g: Grammar, d: Derivation, tokens: Sequence[str]):
    """Bottom-up meaning of ``d``; bottom propagates upward."""
    tokens = list(tokens)
    n = len(tokens)
    ctx = (g.constructions[0].context.params if g.constructions else ())
    onto = g.ontology
    lexicalized = g.mode == LEXICALIZED
    by_name = {c.name: c for c in g.constructions}

    def leaf(edge: ChartEdge, accum):
        a = edge.alt
        if a.body is None:
            return a.sense
        c = by_name[edge.construction]
        tok = edge.children[0]
        env = Env(mu={}, pos={tok: n - 1 - edge.start}, context=c.context.params,
                  accum=accum if lexicalized else None,
                  left=tokens[edge.start - 1] if edge.start > 0 else NONE,
                  ontology=onto)
        return eval_meaning_expr(a.body, env)

    def node(edge: ChartEdge, accum):
        if edge.alt is not None:
            return leaf(edge, accum)
        c = by_name[edge.construction]
        vals = []
        left_acc = accum
        for k, child in enumerate(edge.children):
            if isinstance(child, str):
                vals.append(child)
                continue
            v = node(child, left_acc)
            if v is BOTTOM:
                return BOTTOM
            vals.append(v)
            left_acc = v
        mu = {}
        for k, (el, v) in enumerate(zip(c.form.rhs, vals)):
            mu[str(k + 1)] = v
            if not el.terminal:
                mu[el.name] = v
        env = Env(mu=mu, context=c.context.params or ctx, ontology=onto)
        return eval_meaning_expr(c.meaning.body, env)

    return node(d.root, _fold_identity(g) if lexicalized else None)


def interpret(g: Grammar, tokens: Sequence[str]) -> frozenset:
    """Non-bottom meanings over every derivation (and so every sense assignment)."""
    out = set()
    for d in parse(g, tokens):
        v = evaluate(g, d, tokens)
        if v is not BOTTOM:
            out.add(v)
    return frozenset(out)


def accepts(g: Grammar, tokens: Sequence[str]) -> bool:
    try:
        return bool(interpret(g, tokens))
    except UnknownToken:
        return False


def enumerate_sentences(g: Grammar, max_tokens: int, vocabulary=None) -> List[Tuple[str, ...]]:
    """Every accepted token sequence of length <= ``max_tokens``, in lexicographic order."""
    if max_tokens < 1:
        raise ValueError("max_tokens must be >= 1")
    vocab = sorted(vocabulary if vocabulary is not None else g.vocabulary())
    found = []
    for n in range(1, max_tokens + 1):
        for seq in itertools.product(vocab, repeat=n):
            if interpret(g, seq):
                found.append(seq)
    return sorted(found)
