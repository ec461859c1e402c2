"""Reproduce the headline claims and tabulate measured against expected values."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable, List

from . import builders as b
from .lexicalize import check_lpp_preservation, lexicalize
from .mdl import compare, grammar_dl, linear_fit, payload_ratio
from .parser import accepts, interpret


@dataclass
class Claim:
    key: str
    claim: str
    expected: str
    measured: str
    ok: bool
    seconds: float = 0.0


def _timed(fn: Callable[[], Claim]) -> Claim:
    t = time.perf_counter()
    c = fn()
    c.seconds = time.perf_counter() - t
    return c


def digits_to_int(tokens, base: int) -> int:
    vals = b.digit_values(base)
    n = 0
    for t in tokens:
        n = n * base + vals[t]
    return n


def claim_99() -> Claim:
    a = grammar_dl(b.build_number_construction(10))
    l = grammar_dl(b.build_number_lexicalized(10))
    delta = l.section("lexicon") - a.section("lexicon")
    return Claim("C1", "lexicon grows by 11 symbols per non-zero digit", "99 = 11 x 9",
                 str(delta), delta == 99)


def claim_17341(samples: int = 1000, seed: int = 0) -> Claim:
    toks = "1 7 3 4 1".split()
    got = [interpret(g, toks) for g in (b.build_number_construction(10),
                                        b.build_number_lexicalized(10))]
    ok = all(v == frozenset({17341}) for v in got)
    rng = random.Random(seed)
    grammars = {B: (b.build_number_construction(B), b.build_number_lexicalized(B))
                for B in (2, 10, 16)}
    bad = 0
    for _ in range(samples):
        B = rng.choice((2, 10, 16))
        s = [rng.choice(b.digit_tokens(B)) for _ in range(rng.randint(1, 12))]
        want = frozenset({digits_to_int(s, B)})
        bad += sum(interpret(g, s) != want for g in grammars[B])
    return Claim("C2", "mu(17341) under both base-10 grammars; random strings",
                 "{17341}; 0 mismatches", f"{sorted(got[0])}; {bad} mismatches", ok and bad == 0)


ACCEPT = "we meet at 12 with bob at 6_avenue_and_44_street"
REJECT = "we meet at 12 pm with bob from 5 to 6 pm"


def claim_sentences() -> Claim:
    spec = b.fixture_lexicon()
    g = b.build_lpp_construction(spec)
    lg = lexicalize(g)
    res = [(accepts(x, ACCEPT.split()), accepts(x, REJECT.split())) for x in (g, lg)]
    ok = all(r == (True, False) for r in res)
    return Claim("C3", "repetition of fact types is rejected", "accept / reject",
                 " ".join("accept/reject" if r == (True, False) else str(r) for r in res), ok)


def claim_equivalence(max_pps: int = 4) -> Claim:
    spec = b.fixture_lexicon()
    g = b.build_lpp_construction(spec)
    r = check_lpp_preservation(spec, g, lexicalize(g), max_pps=max_pps)
    return Claim("C4", f"lexicalization preserves meaning (<= {max_pps} PPs)",
                 "0 mismatches", f"{len(r.mismatches)} of {r.checked} ({r.accepted} accepted)",
                 r.ok and r.checked > 0)


def claim_order_of_magnitude(nouns: int = 50) -> Claim:
    ratios = {}
    for B in (10, 36, 100):
        ratios[f"B={B}"] = payload_ratio(grammar_dl(b.build_number_construction(B)),
                                         grammar_dl(b.build_number_lexicalized(B)))
    g = b.build_lpp_construction(b.synthetic_lexicon(nouns))
    ratios[f"lpp{nouns}"] = payload_ratio(grammar_dl(g), grammar_dl(lexicalize(g)))
    bases = list(range(10, 37))
    totals = [grammar_dl(b.build_number_lexicalized(B)).symbolCount for B in bases]
    structural = {grammar_dl(b.build_number_construction(B)).section("structural") for B in bases}
    _, _, resid = linear_fit(bases, totals)
    ok = min(ratios.values()) >= 10 and resid <= 1 and len(structural) == 1
    measured = ", ".join(f"{k}:{float(v):.1f}" for k, v in ratios.items())
    return Claim("C5", "lexicalized grammar an order of magnitude larger",
                 "ratios >= 10; residual <= 1; structural constant",
                 f"{measured}; residual {resid:.2g}; structural {sorted(structural)}", ok)


def claim_amplification() -> Claim:
    gaps = []
    for asc in (False, True):
        a = grammar_dl(b.build_number_construction(10, asc))
        l = grammar_dl(b.build_number_lexicalized(10, asc))
        gaps.append(l.symbolCount - a.symbolCount)
    g = b.build_number_construction(10, True)
    lg = b.build_number_lexicalized(10, True)
    toks = b.digit_tokens(10)
    accepted = 0
    agree = True
    for x, y in itertools.product(toks, repeat=2):
        want = int(x) < int(y)
        got = (accepts(g, [x, y]), accepts(lg, [x, y]))
        agree &= got == (want, want)
        accepted += want
    ok = gaps[1] > gaps[0] and agree and accepted == 45
    return Claim("C6", "extra conditions widen the gap", "gap(asc) > gap(plain); 45 pairs",
                 f"{gaps[1]} > {gaps[0]}; {accepted} pairs, agree={agree}", ok)


def number_corpus(n: int = 100, seed: int = 1, max_len: int = 8) -> List[List[str]]:
    rng = random.Random(seed)
    return [[rng.choice(b.digit_tokens(10)) for _ in range(rng.randint(1, max_len))]
            for _ in range(n)]


def claim_verdict() -> Claim:
    r = compare(b.build_number_construction(10), b.build_number_lexicalized(10), number_corpus())
    ok = r.verdict == "construction" and r.totalA < r.totalB and r.dataBitsA == r.dataBitsB
    return Claim("C7", "construction grammar minimizes total description length",
                 "verdict construction; equal data bits",
                 f"{r.verdict}; {r.totalA} < {r.totalB}; data {r.dataBitsA}/{r.dataBitsB}", ok)


def random_pp_sentences(spec, rng, n: int, accepted: bool, g, max_pps: int = 4):
    """Sample clause+PP sentences; rejected ones repeat a fact type."""
    clauses = [c for c in b.clause_inventory(spec) if len(c) <= 3 and accepts(g, c)]
    pps = b.pp_inventory(spec)
    out = []
    while len(out) < n:
        k = rng.randint(2, max_pps)
        chosen = [rng.choice(pps) for _ in range(k)]
        s = b.pp_sentence(rng.choice(clauses), chosen)
        if accepted:
            if accepts(g, s):
                out.append((s, chosen))
        else:
            if not accepts(g, s) and _repeats_type(spec, chosen):
                out.append((s, chosen))
    return out


def _repeats_type(spec, pps) -> bool:
    types = []
    for p in pps:
        nt = [s.type for w, ss in spec.entries if w == p[1] for s in ss]
        ft = {spec.ppt.lookup(p[0], t) for t in nt} - {None}
        if len(ft) != 1:
            return False
        types.append(ft.pop())
    return len(set(types)) < len(types)


def claim_permutations(n: int = 200, seed: int = 2) -> Claim:
    spec = b.fixture_lexicon()
    g = b.build_lpp_construction(spec)
    rng = random.Random(seed)
    bad = 0
    for want, sample in ((True, random_pp_sentences(spec, rng, n, True, g)),
                         (False, random_pp_sentences(spec, rng, n, False, g))):
        for s, chosen in sample:
            clause = s[:len(s) - sum(map(len, chosen))]
            for perm in set(itertools.permutations(chosen)):
                bad += accepts(g, b.pp_sentence(clause, perm)) != want
    return Claim("C8", "PP order never changes acceptance", "0 flips", f"{bad} flips", bad == 0)


CLAIMS = (claim_99, claim_17341, claim_sentences, claim_equivalence,
          claim_order_of_magnitude, claim_amplification, claim_verdict, claim_permutations)


def run_all() -> List[Claim]:
    return [_timed(fn) for fn in CLAIMS]


def format_claims(claims: List[Claim]) -> str:
    """Fixed-width table; timings are left out so reruns are byte-identical."""
    rows = [("id", "claim", "expected", "measured", "status")]
    rows += [(c.key, c.claim, c.expected, c.measured, "PASS" if c.ok else "FAIL")
             for c in claims]
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "".join("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() + "\n" for r in rows)
