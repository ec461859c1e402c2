import itertools

from hypothesis import given, strategies as st

from cxgmdl.semantics import (BOTTOM, Fact, Frame, Ontology, PPTypeTable, Sense, append,
                              combine_adjunct, fact_in, normalize, normalize_set, pp_type_lookup,
                              show)

TABLE = PPTypeTable([("at", "hour", "event_time"), ("from", "hour", "beginning_time"),
                     ("with", "person", "participant")])
ONTO = Ontology(TABLE, frozenset({("event_time", "beginning_time")}))
BOB = Sense("noun", "person", "bob_0")
TWELVE = Sense("noun", "hour", "12_0")
CLAUSE = Frame((("agent", Sense("noun", "person", "we_0")),
                ("action", Sense("verb", "meeting", "meet_0", 2))))


def test_sense_str():
    assert str(Sense("verb", "meeting", "meet_0", 2)) == "verb(meeting,meet_0,2)"
    assert str(BOB) == "noun(person,bob_0)"


def test_ppt_lookup():
    assert pp_type_lookup(TABLE, "at", "hour") == "event_time"
    assert pp_type_lookup(TABLE, "at", "person") is None
    assert TABLE.by_noun_type("hour") == [("at", "event_time"), ("from", "beginning_time")]


def test_clash_is_symmetric_and_reflexive():
    assert ONTO.clash("event_time", "event_time")
    assert ONTO.clash("event_time", "beginning_time")
    assert ONTO.clash("beginning_time", "event_time")
    assert not ONTO.clash("event_time", "participant")


def test_combine_adjunct():
    f1 = Fact("event_time", TWELVE)
    c1 = combine_adjunct(CLAUSE, f1, ONTO)
    assert c1.facts == (f1,)
    assert combine_adjunct(c1, Fact("event_time", TWELVE), ONTO) is BOTTOM
    assert combine_adjunct(c1, Fact("beginning_time", TWELVE), ONTO) is BOTTOM
    c2 = combine_adjunct(c1, Fact("participant", BOB), ONTO)
    assert c2.fact_types() == ("event_time", "participant")
    assert combine_adjunct(BOTTOM, f1, ONTO) is BOTTOM
    assert fact_in(f1, c2, ONTO)


def test_append_and_show():
    f = append(Frame((("agent", BOB),)), Fact("event_time", TWELVE))
    assert show(f) == "[[agent,noun(person,bob_0)]]{event_time:noun(hour,12_0)}"
    assert append(f, BOTTOM) is BOTTOM


def test_normalize_ignores_order():
    a = Frame((("agent", BOB), ("action", "x")), (Fact("p", 1), Fact("q", 2)))
    b = Frame((("action", "x"), ("agent", BOB)), (Fact("q", 2), Fact("p", 1)))
    assert a != b
    assert normalize(a) == normalize(b)
    assert normalize_set([a]) == normalize_set([b])


FACT_TYPES = ["event_time", "beginning_time", "participant", "location"]


@given(st.lists(st.sampled_from(FACT_TYPES), max_size=5))
def test_combine_order_independent(types):
    # bottom iff two facts clash, whatever the order they are folded in
    flat = Ontology()
    clash = len(set(types)) < len(types)
    for perm in set(itertools.permutations(types)):
        acc = CLAUSE
        for t in perm:
            acc = combine_adjunct(acc, Fact(t, TWELVE), flat)
        assert (acc is BOTTOM) == clash


@given(st.lists(st.sampled_from(FACT_TYPES), max_size=4))
def test_combine_with_conflicts(types):
    want = any(ONTO.clash(a, b) for a, b in itertools.combinations(types, 2))
    acc = CLAUSE
    for t in types:
        acc = combine_adjunct(acc, Fact(t, TWELVE), ONTO)
    assert (acc is BOTTOM) == want
