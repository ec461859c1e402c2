import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cxgmdl import builders as b
from cxgmdl.grammar import parse_grammar_text, render
from cxgmdl.lexicalize import lexicalize
from cxgmdl.mdl import (SECTIONS, ComparisonError, DataError, bits_per_symbol, compare,
                        comparison_items, data_dl, format_kv, grammar_dl, linear_fit,
                        sentence_bits)
from cxgmdl.repro import number_corpus

from conftest import lpp_pair, number_pair


def lexicon_chars(g) -> int:
    # independent count over the rendered lexical lines
    total = 0
    for line in render(g).splitlines():
        if '"' in line and "->" not in line:
            body = line.split(":", 1)[1].replace("mu", "μ").replace("bottom", "⊥")
            total += len("".join(body.split()).replace('"', ""))
    return total


def test_99_symbols():
    a, l = (grammar_dl(g) for g in number_pair(10))
    assert l.section("lexicon") - a.section("lexicon") == 99


def test_base_100_lexicon_difference():
    g, lg = number_pair(100)
    want = lexicon_chars(lg) - lexicon_chars(g)
    # 99 entries each gain "*100**pos(t)" with t the token
    assert want == sum(len(f"*100**pos({t})") for t in b.digit_tokens(100)[1:])
    assert grammar_dl(lg).section("lexicon") - grammar_dl(g).section("lexicon") == want


@pytest.mark.parametrize("g", [*number_pair(10), *lpp_pair()], ids=["cxg", "lex", "lppc", "lppl"])
def test_report_invariants(g):
    r = grammar_dl(g)
    assert r.symbolCount == sum(r.perSection[s] for s in SECTIONS)
    assert r.bitCount == r.symbolCount * math.ceil(math.log2(r.alphabetSize))
    assert r.alphabetSize == len(set("".join(c.canonical() for c in g.constructions)) |
                                 set("".join(g.declarations())))


def test_empty_ontology_section():
    assert grammar_dl(number_pair(10)[0]).section("ontology") == 0
    assert grammar_dl(lpp_pair()[0]).section("ontology") > 0


@pytest.mark.parametrize("n,want", [(1, 1), (2, 1), (3, 2), (10, 4), (16, 4), (17, 5)])
def test_bits_per_symbol(n, want):
    assert bits_per_symbol(n) == want


def test_data_dl_examples():
    g, lg = number_pair(10)
    assert data_dl(g, [["0"]]) == 4
    assert data_dl(g, []) == 0
    for n in range(1, 15):
        want = math.ceil(n * math.log2(10) - 1e-9)
        assert sentence_bits(g, ["7"] * n) == sentence_bits(lg, ["7"] * n) == want


def test_data_dl_rejects_bad_sentence():
    g, _ = number_pair(10, True)
    with pytest.raises(DataError) as err:
        data_dl(g, [["1", "2"], ["2", "1"]])
    assert err.value.index == 1


def test_ambiguity_costs_bits(lpp):
    g, lg = lpp
    one = sentence_bits(g, "we meet at 12".split())
    two = sentence_bits(g, "we meet at 2200".split())
    # the two readings of 2200 are both chart alternatives for the noun cell
    assert two == one + 1
    assert sentence_bits(lg, "we meet at 2200".split()) == sentence_bits(lg, "we meet at 12".split()) + 1


def test_compare_base10():
    g, lg = number_pair(10)
    r = compare(g, lg, number_corpus())
    assert r.verdict == "construction"
    assert r.dataBitsA == r.dataBitsB
    assert r.totalA == r.dlA.bitCount + r.dataBitsA < r.totalB
    assert r.ratioSemanticPayload == Fraction(99, 3)
    kv = format_kv(comparison_items(r))
    assert "verdict=construction\n" in kv and "ratioSemanticPayload=33\n" in kv


def test_compare_identical():
    g, _ = number_pair(10)
    r = compare(g, g, [["1"]])
    assert r.totalA == r.totalB and r.verdict == "tie"
    assert r.ratioSemanticPayload == 1


def test_compare_mismatch():
    g, _ = number_pair(10)
    asc, _ = number_pair(10, True)
    with pytest.raises(ComparisonError, match="sentence 1"):
        compare(g, asc, [["1", "2"], ["2", "1"]])


def test_lpp_ratio_50_nouns():
    g = b.build_lpp_construction(b.synthetic_lexicon(50))
    r = compare(g, lexicalize(g), [["h0", "meet", "at", "h3", "pm"]])
    assert r.ratioSemanticPayload >= 10
    assert r.dataBitsA == r.dataBitsB


def test_monotone_gap_in_base():
    corpus = number_corpus(30)
    gaps = []
    for base in (10, 11, 12, 16, 20, 36, 50):
        g = b.build_number_construction(base)
        r = compare(g, b.build_number_lexicalized(base), corpus)
        gaps.append(r.totalB - r.totalA)
    assert all(x < y for x, y in zip(gaps, gaps[1:]))


def test_linear_fit_exact_line():
    slope, icpt, resid = linear_fit([1, 2, 3, 4], [3, 5, 7, 9])
    assert (slope, icpt) == pytest.approx((2, 1)) and resid == pytest.approx(0)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 60))
def test_lexicalized_larger_for_every_base(base):
    a = grammar_dl(b.build_number_construction(base))
    l = grammar_dl(b.build_number_lexicalized(base))
    assert l.section("lexicon") - a.section("lexicon") == sum(
        len(f"*{base}**pos({t})") for t in b.digit_tokens(base)[1:])


def test_parse_then_measure_is_stable():
    g, _ = number_pair(16)
    assert grammar_dl(parse_grammar_text(render(g))) == grammar_dl(g)
