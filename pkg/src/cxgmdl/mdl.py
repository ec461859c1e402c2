"""Description length of grammars and of data encoded with them.

Grammar cost is a symbol count over the canonical serialization, coded with a
fixed-width code of ceil(log2 |alphabet|) bits per symbol. Data cost is the
number of bits needed to pick out each sentence's derivation.
"""
from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .grammar import CONSTRUCTIONAL, LEXICALIZED, Grammar
from .parser import ChartEdge, UnknownToken, chart, evaluate
from .semantics import BOTTOM

SECTIONS = ("lexicon", "structural", "ontology", "header")


class DataError(ValueError):
    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class ComparisonError(ValueError):
    pass


def bits_per_symbol(alphabet_size: int) -> int:
    """ceil(log2 n), exact on integers; a one-letter alphabet still needs a bit."""
    return max(1, (alphabet_size - 1).bit_length())


@dataclass
class DLReport:
    symbolCount: int
    bitCount: int
    perSection: Dict[str, int]
    alphabetSize: int

    def section(self, name: str) -> int:
        return self.perSection[name]


def _section_symbols(g: Grammar) -> Dict[str, int]:
    sec = dict.fromkeys(SECTIONS, 0)
    for d in g.declarations():
        key = "ontology" if d.startswith(("ppt(", "conflict(")) else "header"
        sec[key] += len(d)
    for c in g.constructions:
        sec["lexicon" if c.is_lexical else "structural"] += len(c.canonical())
    return sec


def grammar_dl(g: Grammar) -> DLReport:
    sec = _section_symbols(g)
    n = sum(sec.values())
    alpha = len(g.alphabet)
    return DLReport(n, n * bits_per_symbol(alpha), sec, alpha)


# ---------------------------------------------------------------- data term

def _choices(edge: ChartEdge, cells: Dict[Tuple[int, int, str], int]) -> int:
    """Product of applicable-alternative counts over the nodes of ``edge``."""
    k = cells[(edge.start, edge.end, edge.category)]
    for c in edge.children:
        if isinstance(c, ChartEdge):
            k *= _choices(c, cells)
    return k


def sentence_bits(g: Grammar, tokens: Sequence[str]) -> int:
    """Bits to encode one accepted sentence: ceil(log2) of its cheapest code space.

    Each token costs log2(vocabulary size); each node costs log2 of the number
    of distinct expansions (construction, lexical reading) found for its span
    and category. Computed on integers so the
    rounding is exact.
    """
    tokens = list(tokens)
    ch = chart(g, tokens)
    expansions: Dict[Tuple[int, int, str], set] = {}
    for e in ch.edges():
        key = (e.start, e.end, e.category)
        # distinct ways to expand the cell; ambiguity below is paid for below
        expansions.setdefault(key, set()).add((e.construction, e.alt.index if e.alt else None))
    cells = {k: len(v) for k, v in expansions.items()}
    best = None
    for d in ch.derivations():
        if evaluate(g, d, tokens) is BOTTOM:
            continue
        k = _choices(d.root, cells)
        best = k if best is None else min(best, k)
    if best is None:
        raise ValueError("sentence not accepted")
    space = best * len(g.vocabulary()) ** len(tokens)
    return (space - 1).bit_length()


def data_dl(g: Grammar, corpus: Sequence[Sequence[str]]) -> int:
    total = 0
    for i, s in enumerate(corpus):
        try:
            total += sentence_bits(g, s)
        except (ValueError, UnknownToken) as err:
            raise DataError(f"sentence {i} cannot be encoded: {err}", i) from None
    return total


# ---------------------------------------------------------------- comparison

@dataclass
class ComparisonReport:
    dlA: DLReport
    dlB: DLReport
    dataBitsA: int
    dataBitsB: int
    ratioSemanticPayload: Fraction
    ratioRaw: Fraction
    labels: Tuple[str, str] = ("A", "B")
    totalA: int = field(init=False)
    totalB: int = field(init=False)

    def __post_init__(self):
        self.totalA = self.dlA.bitCount + self.dataBitsA
        self.totalB = self.dlB.bitCount + self.dataBitsB

    @property
    def verdict(self) -> str:
        if self.totalA == self.totalB:
            return "tie"
        return self.labels[0] if self.totalA < self.totalB else self.labels[1]


def _label(g: Grammar, fallback: str) -> str:
    return {CONSTRUCTIONAL: "construction", LEXICALIZED: "lexicalized"}.get(g.mode, fallback)


def payload_ratio(dlA: DLReport, dlB: DLReport) -> Fraction:
    """Formula symbols B repeats in its lexicon per symbol of machinery A needs instead.

    Numerator: lexicon(B) - lexicon(A), the part of B's entries beyond the
    stubs A also has. Denominator: what A spends outside the lexicon beyond
    B's own non-lexical sections. 0/0 counts as 1 (identical grammars).
    """
    extra_lex = dlB.section("lexicon") - dlA.section("lexicon")
    rest = lambda r: r.symbolCount - r.section("lexicon")
    extra_rules = rest(dlA) - rest(dlB)
    if extra_lex == 0 and extra_rules == 0:
        return Fraction(1)
    if extra_rules <= 0:
        return Fraction(extra_lex) if extra_lex > 0 else Fraction(0)
    return Fraction(extra_lex, extra_rules)


def raw_ratio(dlA: DLReport, dlB: DLReport) -> Fraction:
    den = dlA.section("lexicon") + dlA.section("structural")
    return Fraction(dlB.section("lexicon"), den) if den else Fraction(1)


def compare(gA: Grammar, gB: Grammar, corpus: Sequence[Sequence[str]]) -> ComparisonReport:
    from .parser import accepts

    corpus = [tuple(s) for s in corpus]
    for i, s in enumerate(corpus):
        a, b = accepts(gA, s), accepts(gB, s)
        if a != b:
            raise ComparisonError(f"grammars disagree on sentence {i} ({' '.join(s)}): "
                                  f"A {'accepts' if a else 'rejects'}, "
                                  f"B {'accepts' if b else 'rejects'}")
    dlA, dlB = grammar_dl(gA), grammar_dl(gB)
    la, lb = _label(gA, "A"), _label(gB, "B")
    if la == lb:
        la, lb = "A", "B"
    return ComparisonReport(dlA, dlB, data_dl(gA, corpus), data_dl(gB, corpus),
                            payload_ratio(dlA, dlB), raw_ratio(dlA, dlB), (la, lb))


def linear_fit(xs: Sequence[float], ys: Sequence[float]) -> Tuple[float, float, float]:
    """Least-squares slope, intercept and largest absolute residual."""
    fit = statistics.linear_regression(xs, ys)
    resid = max(abs(y - (fit.slope * x + fit.intercept)) for x, y in zip(xs, ys))
    return fit.slope, fit.intercept, resid


# ---------------------------------------------------------------- report formats

def dl_items(r: DLReport, prefix: str = "") -> List[Tuple[str, object]]:
    items = [(prefix + "symbolCount", r.symbolCount), (prefix + "bitCount", r.bitCount),
             (prefix + "alphabetSize", r.alphabetSize)]
    items += [(f"{prefix}section.{s}", r.perSection[s]) for s in SECTIONS]
    return items


def comparison_items(c: ComparisonReport) -> List[Tuple[str, object]]:
    items = dl_items(c.dlA, "dlA.") + dl_items(c.dlB, "dlB.")
    items += [("dataBitsA", c.dataBitsA), ("dataBitsB", c.dataBitsB),
              ("totalA", c.totalA), ("totalB", c.totalB),
              ("ratioSemanticPayload", c.ratioSemanticPayload),
              ("ratioSemanticPayloadFloat", f"{float(c.ratioSemanticPayload):.4f}"),
              ("ratioRaw", c.ratioRaw), ("ratioRawFloat", f"{float(c.ratioRaw):.4f}"),
              ("verdict", c.verdict)]
    return items


def format_kv(items) -> str:
    return "".join(f"{k}={v}\n" for k, v in items)


def format_table(items) -> str:
    width = max((len(k) for k, _ in items), default=0)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in items)
