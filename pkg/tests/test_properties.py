"""Cross-module invariants."""
import itertools

from hypothesis import given, settings, strategies as st

from cxgmdl import builders as b
from cxgmdl.grammar import canonical_serialize
from cxgmdl.lexicalize import lexicalize
from cxgmdl.mdl import grammar_dl
from cxgmdl.parser import Derivation, accepts, chart, evaluate, interpret

from conftest import lpp_pair, number_pair


def test_canonical_strings_are_distinct():
    for g in (*number_pair(10), *number_pair(10, True), *lpp_pair()):
        strings = [c.canonical() for c in g.constructions]
        assert len(set(strings)) == len(strings)


def test_serialization_is_additive():
    for g in (*number_pair(16), *lpp_pair()):
        total = len(canonical_serialize(g))
        parts = sum(len(d) for d in g.declarations()) + sum(len(c.canonical())
                                                            for c in g.constructions)
        assert total == parts == grammar_dl(g).symbolCount


def test_leading_zeros():
    for g in number_pair(10):
        assert interpret(g, ["0", "7"]) == {7}
        assert interpret(g, ["0", "0", "0"]) == {0}


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 60))
def test_amplification_at_every_base(base):
    def gap(asc):
        g, lg = b.build_number_construction(base, asc), b.build_number_lexicalized(base, asc)
        return grammar_dl(lg).symbolCount - grammar_dl(g).symbolCount
    assert gap(True) > gap(False)


def _fact_type(spec, pp):
    types = {spec.ppt.lookup(pp[0], s.type) for w, ss in spec.entries if w == pp[1] for s in ss}
    types.discard(None)
    return types.pop() if len(types) == 1 else None


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_bottom_absorption(data):
    # once a fact type repeats, no further adjuncts can rescue the sentence
    spec = b.fixture_lexicon()
    g, lg = lpp_pair()
    typed = [p for p in b.pp_inventory(spec) if _fact_type(spec, p) and len(p) == 2]
    first = data.draw(st.sampled_from(typed))
    same = [p for p in typed if _fact_type(spec, p) == _fact_type(spec, first)]
    again = data.draw(st.sampled_from(same))
    middle = data.draw(st.lists(st.sampled_from(typed), max_size=1))
    tail = data.draw(st.lists(st.sampled_from(b.pp_inventory(spec)), max_size=2))
    s = b.pp_sentence(("we", "meet"), [first, *middle, again, *tail])
    assert not accepts(g, s) and not accepts(lg, s)


def test_chart_growth_is_polynomial():
    spec = b.fixture_lexicon()
    pps = [("at", "12"), ("with", "bob"), ("at", "6_avenue_and_44_street"), ("to", "6", "pm")]
    for g in lpp_pair():
        ratios = []
        for k in range(len(pps) + 1):
            s = b.pp_sentence(("bob", "give", "we", "bob"), pps[:k])
            ratios.append(len(chart(g, s)) / len(s) ** 2)
        c = max(ratios)
        assert c < 2, ratios
        # and the longest sentence keeps to the same bound
        s = b.pp_sentence(("bob", "give", "we", "bob"), pps * 2)
        assert len(chart(g, s)) <= c * len(s) ** 2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from("0123456789"), min_size=2, max_size=8), st.data())
def test_constructional_locality(toks, data):
    # a constituent's meaning ignores the tokens outside it
    g, _ = number_pair(10)
    k = data.draw(st.integers(1, len(toks) - 1))
    other = toks[:k] + data.draw(st.lists(st.sampled_from("0123456789"),
                                          min_size=len(toks) - k, max_size=len(toks) - k))

    def prefix_value(s):
        ch = chart(g, s)
        (e,) = [e for e in ch.cells[(0, k)] if e.category == "DS"]
        return evaluate(g, Derivation(e), s)

    assert prefix_value(toks) == prefix_value(other) == int("".join(toks[:k]))


def test_lpp_size_law():
    prev = None
    pp_formula = None
    for n in range(3, 31, 3):
        g = b.build_lpp_construction(b.synthetic_lexicon(n))
        lg = lexicalize(g)
        cur = (g, lg)
        if prev is not None:
            new = [c for c in g.lexicon if c.name not in {x.name for x in prev[0].lexicon}]
            d_cxg = grammar_dl(g).symbolCount - grammar_dl(prev[0]).symbolCount
            d_lex = grammar_dl(lg).symbolCount - grammar_dl(prev[1]).symbolCount
            # construction side grows by exactly the new stubs
            assert d_cxg == sum(len(c.canonical()) for c in new)
            # every new noun with a PP reading carries the whole adjunct formula
            hour = next(c for c in lg.lexicon if c.name == new[0].name)
            pp_formula = pp_formula or hour.canonical().count("pp(T,X)")
            assert pp_formula == 2
            assert d_lex >= 3 * len("ifleftin{at,from,to,with}thenletT=caseleftof")
            assert d_lex > 10 * d_cxg
        prev = cur


def test_permutations_small_exhaustive():
    # every ordering of every accepted 3-PP multiset from a small inventory
    spec = b.fixture_lexicon()
    g, lg = lpp_pair()
    pps = [("at", "12"), ("from", "5"), ("to", "6", "pm"), ("with", "bob"),
           ("at", "6_avenue_and_44_street")]
    for combo in itertools.combinations(pps, 3):
        results = {accepts(g, b.pp_sentence(("we", "meet"), p))
                   for p in itertools.permutations(combo)}
        assert len(results) == 1
