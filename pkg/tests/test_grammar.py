import pytest
from hypothesis import given, strategies as st

from cxgmdl import builders as b
from cxgmdl.grammar import (GrammarError, canonical_serialize, parse_construction,
                            parse_grammar_text, render, universal_fold, validate)

from conftest import lpp_pair, number_pair


def char_count(line: str) -> int:
    """Symbols in one grammar-file construction line, counted straight off the text."""
    ctx, form, meaning = line.split(":", 1)[1].split(";", 2)
    if "->" in form:
        # rhs elements are kept apart by one separator symbol
        lhs, rhs = form.split("->")
        form = lhs + "→" + ",".join(rhs.split())
    body = ";".join((ctx, form, meaning.replace("mu", "μ").replace("bottom", "⊥")))
    return len("".join(body.split()).replace('"', ""))


def test_canonical_form_of_entries():
    c = parse_construction('d_1 : <[10] ; "1" ; mu(1) = 1*10**pos(1)>')
    assert c.canonical() == "<[10];1;μ(1)=1*10**pos(1)>"
    s = parse_construction('d_1 : <[10] ; "1" ; mu(1) = 1>')
    assert s.canonical() == "<[10];1;μ(1)=1>"
    assert len(c.canonical()) - len(s.canonical()) == 11


def test_structural_rule_canonical():
    c = parse_construction("ds : <[10] ; DS -> DS1 D ; mu(DS) = 10*mu(DS1)+mu(D)>")
    assert c.canonical() == "<[10];DS→DS1,D;μ(DS)=10*μ(DS1)+μ(D)>"


@pytest.mark.parametrize("base", [2, 10, 36, 100])
@pytest.mark.parametrize("asc", [False, True])
def test_symbol_count_matches_text(base, asc):
    for g in number_pair(base, asc):
        lines = [ln for ln in render(g).splitlines() if "<" in ln]
        assert [char_count(ln) for ln in lines] == [len(c.canonical()) for c in g.constructions]


def test_round_trip_families():
    for g in (*number_pair(10), *number_pair(16, True), *lpp_pair()):
        again = parse_grammar_text(render(g))
        assert canonical_serialize(again) == canonical_serialize(g)
        assert render(again) == render(g)


@given(st.integers(2, 60), st.booleans())
def test_round_trip_property(base, asc):
    for g in (b.build_number_construction(base, asc), b.build_number_lexicalized(base, asc)):
        assert render(parse_grammar_text(render(g))) == render(g)


def test_header_parsing(lpp):
    g, _ = lpp
    assert g.start == ("CL",)
    assert ("event_time", "beginning_time") in g.conflicts
    assert g.ppt.lookup("with", "person") == "participant"
    assert len(g.lexicon) == 13


@pytest.mark.parametrize("text,line,msg", [
    ("", 0, "no constructions"),
    ("mode: weird\n", 1, "unknown mode"),
    ('a : <[] ; "x" ; mu(x) = 1>\na : <[] ; "y" ; mu(y) = 2>\n', 2, "duplicate"),
    ('a : <[] ; "x" ; mu(y) = 1>\n', 1, "does not name"),
    ("r : <[] ; S -> A B ; mu(S) = mu(C)>\n", 1, "unresolved"),
    ('a : <[] ; "x" ; mu(x) = 1 +>\n', 1, "expected"),
    ('a : [] ; "x" ; mu(x) = 1\n', 1, "expected 'name"),
    ('a : <10 ; "x" ; mu(x) = 1>\n', 1, "context"),
    ('a : <[] ; "x y" ; mu(x) = 1>\n', 1, "one quoted token"),
    ("ppt: at hour event_time\n", 1, "ppt"),
])
def test_parse_errors(text, line, msg):
    with pytest.raises(GrammarError) as err:
        parse_grammar_text(text)
    assert msg in str(err.value)
    assert err.value.line == line


def test_error_column_points_into_meaning():
    with pytest.raises(GrammarError) as err:
        parse_grammar_text('a : <[] ; "x" ; mu(x) = 1 + >\n')
    assert err.value.column > len('a : <[] ; "x" ;')


def test_validate_families():
    for g in (*number_pair(10), *number_pair(10, True), *lpp_pair()):
        assert validate(g).ok, str(validate(g))


def test_validate_rejects_globals_in_constructional_mode():
    g = parse_grammar_text('start: D\nlexical: D\nd : <[] ; "1" ; mu(1) = 10**pos(1)>\n')
    assert "global feature in constructional mode" in str(validate(g))


def test_validate_rejects_non_universal_rule_when_lexicalized():
    text = ('mode: lexicalized\nstart: DS\nlexical: D DS\nd : <[10] ; "1" ; mu(1) = 1>\n'
            "ds : <[10] ; DS -> DS1 D ; mu(DS) = 10*mu(DS1)+mu(D)>\n")
    assert "non-universal structural rule" in str(validate(parse_grammar_text(text)))


def test_validate_rejects_globals_in_rules():
    text = ('start: S\nlexical: W\nw : <[] ; "a" ; mu(a) = 1>\n'
            "s : <[] ; S -> W ; mu(S) = pos(W)>\n")
    rep = validate(parse_grammar_text(text))
    assert "only legal in lexical entries" in str(rep)


def test_universal_fold():
    assert universal_fold(parse_construction("f : <[] ; S -> S1 W ; mu(S) = mu(S1)++mu(W)>")) \
        == "append"
    assert universal_fold(parse_construction("f : <[] ; DS -> DS1 D ; mu(DS) = mu(DS1)+mu(D)>")) \
        == "sum"
    assert universal_fold(parse_construction(
        "f : <[] ; DS -> DS1 D ; mu(DS) = 2*mu(DS1)+mu(D)>")) is None
    assert universal_fold(parse_construction("f : <[] ; DS -> D DS1 ; mu(DS) = mu(D)+mu(DS1)>")) \
        is None


def test_alphabet_is_character_set():
    g, _ = number_pair(10)
    text = "".join(canonical_serialize(g))
    assert g.alphabet == tuple(sorted(set(text)))
    assert "μ" in g.alphabet and "→" in g.alphabet
