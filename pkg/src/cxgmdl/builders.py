"""Grammar families: base-B numbers and clauses followed by typed PPs.

The number builders write grammar text the way one would by hand and parse
it back; :func:`lexicalize` in :mod:`cxgmdl.lexicalize` derives the
lexicalized grammars structurally, so comparing the two is a real check.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Dict, List, Sequence, Tuple

from .grammar import Grammar, GrammarError, parse_grammar_text
from .semantics import PPTypeTable, Sense

DIGITS36 = "0123456789abcdefghijklmnopqrstuvwxyz"


def digit_tokens(base: int) -> List[str]:
    """Token for each digit value: 0-9a-z up to base 36, decimal numerals beyond."""
    if base <= 36:
        return list(DIGITS36[:base])
    return [str(v) for v in range(base)]


def digit_values(base: int) -> Dict[str, int]:
    return {t: v for v, t in enumerate(digit_tokens(base))}


def _check_base(base):
    if not isinstance(base, int) or base < 2:
        raise ValueError(f"base must be an integer >= 2, got {base!r}")


def _number_header(base: int, mode: str) -> List[str]:
    return [f"# base-{base} numbers", f"mode: {mode}", "start: DS", "lexical: D DS"]


def _name(tok: str) -> str:
    return "d_" + tok


def build_number_construction(base: int, ascending_only: bool = False) -> Grammar:
    """Stub lexicon mu(d)=d plus one structural rule DS -> DS1 D."""
    _check_base(base)
    lines = _number_header(base, "constructional")
    for v, tok in enumerate(digit_tokens(base)):
        lines.append(f'{_name(tok)} : <[{base}] ; "{tok}" ; mu({tok}) = {v}>')
    step = f"{base}*mu(DS1)+mu(D)"
    if ascending_only:
        # the last digit of DS1 is mu(DS1) mod base; strictly ascending
        meaning = f"if mu(D)>mu(DS1)%{base} then {step} else bottom"
    else:
        meaning = step
    lines.append(f"ds : <[{base}] ; DS -> DS1 D ; mu(DS) = {meaning}>")
    return parse_grammar_text("\n".join(lines) + "\n", name=f"number{base}-cxg")


def build_number_lexicalized(base: int, ascending_only: bool = False) -> Grammar:
    """Positional formula in every non-zero entry plus the universal sum fold."""
    _check_base(base)
    lines = _number_header(base, "lexicalized")
    for v, tok in enumerate(digit_tokens(base)):
        if v == 0:
            meaning = "if left!=none then bottom else 0" if ascending_only else "0"
        else:
            value = f"{v}*{base}**pos({tok})"
            if ascending_only:
                left_digit = f"E/{base}**(pos({tok})+1)%{base}"
                meaning = f"if {left_digit}>={v} then bottom else {value}"
            else:
                meaning = value
        lines.append(f'{_name(tok)} : <[{base}] ; "{tok}" ; mu({tok}) = {meaning}>')
    lines.append(f"ds : <[{base}] ; DS -> DS1 D ; mu(DS) = mu(DS1)+mu(D)>")
    return parse_grammar_text("\n".join(lines) + "\n", name=f"number{base}-lex")


# ---------------------------------------------------------------- clause + PP language

_SENSE_RE = re.compile(r"^([A-Za-z_]\w*)\(([A-Za-z0-9_]+),([A-Za-z0-9_]+)(?:,(\d+))?\)$")

FRAMES = ("SV", "SVO", "SVOO")


@dataclass
class LexiconSpec:
    """Words with their sense records, the PP typing table and the type ontology.

    A verb sense's valence v licenses the first v clause frames of SV, SVO,
    SVOO. ``suffixes`` maps tokens such as ``pm`` to the noun type they may
    follow inside a PP.
    """
    entries: List[Tuple[str, List[Sense]]]
    ppt: PPTypeTable = field(default_factory=PPTypeTable)
    conflicts: List[Tuple[str, str]] = field(default_factory=list)
    suffixes: Dict[str, str] = field(default_factory=dict)

    @property
    def prepositions(self) -> List[str]:
        return [w for w, ss in self.entries if any(s.cat == "prep" for s in ss)]

    def verb_frames(self) -> Dict[str, Tuple[str, ...]]:
        return {s.id: FRAMES[:s.valence] for _, ss in self.entries for s in ss if s.cat == "verb"}

    def nouns(self) -> List[str]:
        return [w for w, ss in self.entries if any(s.cat == "noun" for s in ss)]

    def check(self):
        if not self.entries:
            raise GrammarError("empty lexicon")
        words = set()
        noun_types = set()
        for w, senses in self.entries:
            if w in words:
                raise GrammarError(f"word {w!r} listed twice")
            words.add(w)
            if not senses:
                raise GrammarError(f"word {w!r} has no senses")
            ids = [s.id for s in senses]
            if len(set(ids)) != len(ids):
                raise GrammarError(f"sense ids of {w!r} are not unique")
            cats = {s.cat for s in senses}
            if "prep" in cats and len(cats) > 1:
                raise GrammarError(f"{w!r} mixes a preposition with other categories")
            for s in senses:
                if s.cat not in ("noun", "verb", "prep"):
                    raise GrammarError(f"unsupported category {s.cat!r} on {w!r}")
                if s.cat == "verb" and not 1 <= s.valence <= 3:
                    raise GrammarError(f"valence of {s.id} must be 1..3")
                if s.cat == "noun":
                    noun_types.add(s.type)
        for p, n, _ in self.ppt.rows():
            if n not in noun_types:
                raise GrammarError(f"ppt row ({p}, {n}) names a type no noun carries")
        for tok in self.suffixes:
            if tok in words:
                raise GrammarError(f"suffix {tok!r} is also a lexical word")
        return self


def parse_sense(text: str) -> Sense:
    m = _SENSE_RE.match(text.strip())
    if not m:
        raise GrammarError(f"bad sense record {text!r}")
    cat, typ, sid, val = m.groups()
    return Sense(cat, typ, sid, int(val) if val else 1)


def parse_lexicon_text(text: str) -> LexiconSpec:
    entries, rows, conflicts, suffixes = [], [], [], {}
    in_lexicon = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line == "lexicon:":
                in_lexicon = True
            elif line.startswith("ppt:"):
                m = re.fullmatch(r"ppt:\s*(\S+)\s+(\S+)\s*->\s*(\S+)", line)
                if not m:
                    raise GrammarError("ppt declarations read 'prep type -> fact_type'")
                rows.append(m.groups())
            elif line.startswith("conflict:"):
                parts = line[len("conflict:"):].split()
                if len(parts) != 2:
                    raise GrammarError("conflict declarations name two fact types")
                conflicts.append(tuple(parts))
            elif line.startswith("suffix:"):
                parts = line[len("suffix:"):].split()
                if len(parts) != 2:
                    raise GrammarError("suffix declarations read 'token noun_type'")
                suffixes[parts[0]] = parts[1]
            elif in_lexicon:
                word, _, senses = line.partition(":")
                if not senses.strip():
                    raise GrammarError("lexicon lines read 'word : sense sense ...'")
                entries.append((word.strip(), [parse_sense(s) for s in senses.split()]))
            else:
                raise GrammarError(f"unexpected line {line!r}")
        except GrammarError as err:
            raise GrammarError(str(err), lineno, 1) from None
    return LexiconSpec(entries, PPTypeTable(rows), conflicts, suffixes)


def load_lexicon(path) -> LexiconSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_lexicon_text(fh.read())


def fixture_lexicon() -> LexiconSpec:
    """The small clause+PP lexicon shipped with the package."""
    text = resources.files("cxgmdl").joinpath("data/lpp_fixture.lex").read_text("utf-8")
    return parse_lexicon_text(text)


def synthetic_lexicon(n_nouns: int) -> LexiconSpec:
    """Fixture-style lexicon with ``n_nouns`` PP-typed nouns (hour/person/location)."""
    base = fixture_lexicon()
    entries = [(w, ss) for w, ss in base.entries if not any(s.cat == "noun" for s in ss)]
    types = ("hour", "person", "location")
    for k in range(n_nouns):
        t = types[k % len(types)]
        w = f"{t[0]}{k}"
        entries.append((w, [Sense("noun", t, f"{w}_0")]))
    return LexiconSpec(entries, base.ppt, list(base.conflicts), dict(base.suffixes))


def _entry_name(word: str) -> str:
    return "w_" + re.sub(r"\W", "_", word)


def build_lpp_construction(spec: LexiconSpec) -> Grammar:
    """Lexicon matrix, SV/SVO/SVOO clauses, typed PPs and the guarded adjunct rule."""
    spec.check()
    lines = ["# clauses followed by typed PPs", "mode: constructional", "start: CL"]
    for p, n, f in spec.ppt.rows():
        lines.append(f"ppt: {p} {n} -> {f}")
    for a, b in spec.conflicts:
        lines.append(f"conflict: {a} {b}")
    for word, senses in spec.entries:
        recs = ",".join(str(s) for s in senses)
        lines.append(f'{_entry_name(word)} : <[] ; "{word}" ; mu({word}) = {{{recs}}}>')
    valence = max((s.valence for _, ss in spec.entries for s in ss if s.cat == "verb"), default=0)
    if valence >= 1:
        lines.append("sv : <[] ; CL -> noun verb ; "
                     "mu(CL) = [[action,mu(verb)],[agent,mu(noun)]]>")
    if valence >= 2:
        lines.append("svo : <[] ; CL -> noun verb noun1 ; mu(CL) = if val(mu(verb))>=2 then "
                     "[[action,mu(verb)],[agent,mu(noun)],[object,mu(noun1)]] else bottom>")
    if valence >= 3:
        lines.append("svoo : <[] ; CL -> noun verb noun1 noun2 ; mu(CL) = if val(mu(verb))>=3 "
                     "then [[action,mu(verb)],[agent,mu(noun)],[object,mu(noun1)],"
                     "[object2,mu(noun2)]] else bottom>")
    pp_meaning = "mu(pp) = pp(ppt(mu(prep),mu(noun)),mu(noun))"
    lines.append(f"pp : <[] ; pp -> prep noun ; {pp_meaning}>")
    for tok, ntype in spec.suffixes.items():
        lines.append(f'pp_{_entry_name(tok)[2:]} : <[] ; pp -> prep noun({ntype}) "{tok}" ; '
                     f'{pp_meaning}>')
    lines.append("adjunct : <[] ; CL -> CL1 pp ; "
                 "mu(CL) = if mu(pp) in mu(CL1) then bottom else mu(CL1)++mu(pp)>")
    return parse_grammar_text("\n".join(lines) + "\n", name="lpp-cxg")


def pp_sentence(clause: Sequence[str], pps: Sequence[Sequence[str]]) -> Tuple[str, ...]:
    out = list(clause)
    for p in pps:
        out.extend(p)
    return tuple(out)


def clause_inventory(spec: LexiconSpec) -> List[Tuple[str, ...]]:
    """Every noun-verb[-noun[-noun]] string, licensed or not."""
    nouns = spec.nouns()
    verbs = [w for w, ss in spec.entries if any(s.cat == "verb" for s in ss)]
    out = []
    for k in range(len(FRAMES)):
        for v in verbs:
            for ns in itertools.product(nouns, repeat=k + 1):
                out.append((ns[0], v) + ns[1:])
    return out


def pp_inventory(spec: LexiconSpec) -> List[Tuple[str, ...]]:
    """Every preposition + noun, bare and with each suffix."""
    out = []
    for p in spec.prepositions:
        for n in spec.nouns():
            out.append((p, n))
            out.extend((p, n, s) for s in spec.suffixes)
    return out


def pp_extensions(clause: Sequence[str], pps: Sequence[Sequence[str]], max_pps: int,
                  keep: Callable[[Tuple[str, ...]], bool], ordered: bool = True):
    """Yield clause+PP sentences with up to ``max_pps`` adjuncts.

    A sentence is extended only when ``keep`` returns True for it; meaning
    is bottom-absorbing, so a prefix nobody accepts has no accepted
    extension. With ``ordered=False`` PPs come in non-decreasing inventory
    order, one representative per multiset.
    """
    stack = [(tuple(clause), 0, 0)]
    while stack:
        sent, depth, lo = stack.pop()
        yield sent
        if depth == max_pps or not keep(sent):
            continue
        start = 0 if ordered else lo
        for k in range(len(pps) - 1, start - 1, -1):
            stack.append((sent + tuple(pps[k]), depth + 1, k))
