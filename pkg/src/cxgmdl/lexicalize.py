"""Compile structural-rule semantics into per-word lexical entries.

Supported shapes are the two families built in :mod:`cxgmdl.builders`:

* numbers: ``DS -> DS1 D`` with ``K*mu(DS1)+mu(D)`` (optionally guarded by
  ``mu(D)>mu(DS1)%K``). Every non-zero digit gets ``d*K**pos(d)``.
* clauses with typed PP adjuncts: every noun sense gets the preposition table
  for its type, the repetition guard over ``E``, and its argument placement;
  verbs, prepositions and PP suffix tokens get their left-context checks.

The result keeps only a universal left fold as structural machinery.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import expr as ex
from .grammar import (CONSTRUCTIONAL, LEXICALIZED, Construction, Element,
                      FormPattern, Grammar, GrammarError, MeaningExpr, alternatives,
                      parse_construction, universal_fold)
from .parser import interpret
from .semantics import Env, EvalError, Sense, eval_meaning_expr, normalize_set


class UnsupportedGrammar(GrammarError):
    pass


def lexicalize(g: Grammar) -> Grammar:
    if g.mode != CONSTRUCTIONAL:
        raise UnsupportedGrammar("grammar is already lexicalized")
    if _number_rule(g) is not None:
        return _lexicalize_numbers(g)
    if _adjunct_rule(g) is not None:
        return _lexicalize_clauses(g)
    raise UnsupportedGrammar("structural rules are outside the supported right-linear families")


# ---------------------------------------------------------------- numbers

def _step_multiplier(e: ex.Expr, rule: Construction) -> Optional[ex.Expr]:
    """K when ``e`` is ``K*mu(first)+mu(second)``."""
    first, second = (el.name for el in rule.form.rhs)
    if not (isinstance(e, ex.BinOp) and e.op == "+" and e.rhs == ex.Mu(second)):
        return None
    m = e.lhs
    if isinstance(m, ex.BinOp) and m.op == "*" and m.rhs == ex.Mu(first) \
            and isinstance(m.lhs, (ex.Num, ex.BaseRef)):
        return m.lhs
    return None


def _number_rule(g: Grammar):
    """(rule, K, ascending) for a digit-spine grammar, else None."""
    if len(g.rules) != 1:
        return None
    r = g.rules[0]
    f = r.form
    if len(f.rhs) != 2 or any(e.terminal for e in f.rhs) or f.rhs[0].category != f.lhs:
        return None
    body = r.meaning.body
    k = _step_multiplier(body, r)
    if k is not None:
        return r, k, False
    first, second = (el.name for el in f.rhs)
    if isinstance(body, ex.If) and isinstance(body.orelse, ex.BottomLit):
        k = _step_multiplier(body.then, r)
        guard = ex.BinOp(">", ex.Mu(second), ex.BinOp("%", ex.Mu(first), k)) if k else None
        if k is not None and body.cond == guard:
            return r, k, True
    return None


def _lexicalize_numbers(g: Grammar) -> Grammar:
    rule, k_expr, ascending = _number_rule(g)
    params = rule.context.params
    k = k_expr.value if isinstance(k_expr, ex.Num) else params[0]
    K = ex.Num(k)
    out: List[Construction] = []
    for c in g.lexicon:
        try:
            v = eval_meaning_expr(c.meaning.body, Env(context=params))
        except EvalError as err:
            raise UnsupportedGrammar(f"{c.name}: digit meaning is not constant ({err})") from None
        if not isinstance(v, int):
            raise UnsupportedGrammar(f"{c.name}: digit meaning is not a number")
        tok = c.form.token
        body = c.meaning.body
        if v != 0:
            # mu(d) = d*K**pos(d): the positional value, repeated per entry
            body = ex.BinOp("*", body, ex.BinOp("**", K, ex.Pos(tok)))
        if ascending:
            if v == 0:
                cond = ex.BinOp("!=", ex.Left(), ex.NoneLit())
            else:
                shift = ex.BinOp("**", K, ex.BinOp("+", ex.Pos(tok), ex.Num(1)))
                left_digit = ex.BinOp("%", ex.BinOp("/", ex.Accum(), shift), K)
                cond = ex.BinOp(">=", left_digit, c.meaning.body)
            body = ex.If(cond, ex.BottomLit(), body)
        out.append(Construction(c.name, c.context, c.form, MeaningExpr(c.meaning.head, body)))
    first, second = rule.form.rhs
    fold = ex.BinOp("+", ex.Mu(first.name), ex.Mu(second.name))
    out.append(Construction(rule.name, rule.context, rule.form,
                            MeaningExpr(rule.meaning.head, fold)))
    return Grammar(tuple(out), LEXICALIZED, g.start, g.lexical_categories, g.ppt, g.conflicts,
                   name=(g.name or "grammar") + "-lexicalized")


# ---------------------------------------------------------------- clauses + PPs

def _adjunct_rule(g: Grammar) -> Optional[Construction]:
    for r in g.rules:
        f = r.form
        if len(f.rhs) != 2 or f.rhs[0].category != f.lhs:
            continue
        clause, adj = (ex.Mu(e.name) for e in f.rhs)
        want = ex.If(ex.BinOp("in", adj, clause), ex.BottomLit(), ex.BinOp("++", clause, adj))
        if r.meaning.body == want:
            return r
    return None


def _frame_roles(body: ex.Expr, rule: Construction) -> Dict[int, str]:
    """rhs index -> role name, read off the frame literal of a clause rule."""
    roles = {}
    for n in ex.walk(body):
        if isinstance(n, ex.ListLit) and len(n.items) == 2 and isinstance(n.items[0], ex.Sym) \
                and isinstance(n.items[1], ex.Mu):
            idx = rule.resolve(n.items[1].ref)
            if idx is not None and idx >= 0:
                roles[idx] = n.items[0].name
    return roles


def _min_valence(body: ex.Expr) -> int:
    if isinstance(body, ex.If) and isinstance(body.orelse, ex.BottomLit):
        c = body.cond
        if isinstance(c, ex.BinOp) and c.op == ">=" and isinstance(c.lhs, ex.Call) \
                and c.lhs.name == "val" and isinstance(c.rhs, ex.Num):
            return c.rhs.value
    return 1


def _lexicalize_clauses(g: Grammar) -> Grammar:
    adj = _adjunct_rule(g)
    clause_cat, pp_cat = adj.form.lhs, adj.form.rhs[1].category
    clauses, pps = [], []
    for r in g.rules:
        if r is adj:
            continue
        cats = [e.category for e in r.form.rhs]
        if r.form.lhs == clause_cat and not any(e.terminal for e in r.form.rhs) \
                and len(cats) >= 2 and cats[0] == "noun" and cats[1] == "verb" \
                and all(c == "noun" for c in cats[2:]):
            clauses.append(r)
        elif r.form.lhs == pp_cat and cats[:2] == ["prep", "noun"] and len(cats) <= 3 \
                and all(e.terminal for e in r.form.rhs[2:]):
            pps.append(r)
        else:
            raise UnsupportedGrammar(f"rule {r.name} is outside the clause+PP family")
    if not clauses or not pps:
        raise UnsupportedGrammar("need clause and PP rules")

    # role at each clause position, and the least valence that licenses reaching it
    slot_role: Dict[int, str] = {}
    slot_valence: Dict[int, int] = {}
    lengths = set()
    for r in clauses:
        roles = _frame_roles(r.meaning.body, r)
        if set(roles) != set(range(len(r.form.rhs))):
            raise UnsupportedGrammar(f"clause rule {r.name} does not assign a role to every slot")
        v = _min_valence(r.meaning.body)
        lengths.add(len(r.form.rhs))
        for i, role in roles.items():
            if slot_role.setdefault(i, role) != role:
                raise UnsupportedGrammar(f"slot {i} has conflicting roles")
            slot_valence[i] = min(slot_valence.get(i, v), v)
    if 2 not in lengths or lengths != set(range(2, max(lengths) + 1)):
        raise UnsupportedGrammar("clause frames must be SV, SVO, SVOO prefixes")
    for i in (0, 1):
        slot_valence[i] = 1

    suffixes: Dict[str, Optional[str]] = {}
    for r in pps:
        if len(r.form.rhs) == 3:
            suffixes[r.form.rhs[2].name] = r.form.rhs[1].sem_type

    preps = []
    for c in g.lexicon:
        alts = alternatives(g, c)
        if any(a.sense is not None and a.sense.cat == "prep" for a in alts):
            preps.append(c.form.token)
    prep_set = "{" + ",".join(preps) + "}"
    action = slot_role[1]

    def noun_behaviour(tok: str, s: Sense) -> str:
        rows = g.ppt.by_noun_type(s.type)
        if rows:
            table = ",".join(f"{p}:{f}" for p, f in rows)
            head = (f"let T=case left of {{{table}}} in "
                    f"if pp(T,X) in E then bottom else pp(T,X)")
        else:
            head = "bottom"
        subject = f"if pos({tok})==0 then bottom else [[{slot_role[0]},X]]"
        chain = f"if left in {prep_set} then {head} else if E==[] then {subject} " \
                f"else if nfacts(E)>0 then bottom"
        for i in sorted(k for k in slot_role if k >= 2):
            before = ",".join(slot_role[j] for j in range(i))
            chain += (f" else if roles(E)==[{before}] and val(role(E,{action}))>="
                      f"{slot_valence[i]} then [[{slot_role[i]},X]]")
        return f"let X={s} in {chain} else bottom"

    def verb_behaviour(tok: str, s: Sense) -> str:
        return f"let X={s} in if roles(E)==[{slot_role[0]}] then [[{action},X]] else bottom"

    def prep_behaviour(tok: str, s: Sense) -> str:
        return f"if left in {prep_set} or pos({tok})==0 or len(roles(E))<2 then bottom else []"

    behaviours = {"noun": noun_behaviour, "verb": verb_behaviour, "prep": prep_behaviour}
    ctx = adj.context.render()
    lines = []
    for c in g.lexicon:
        tok = c.form.token
        cases = []
        for a in alternatives(g, c):
            if a.sense is None or a.sense.cat not in behaviours:
                raise UnsupportedGrammar(f"{c.name}: unsupported lexical reading")
            cases.append(f"{a.sense}: {behaviours[a.sense.cat](tok, a.sense)}")
        lines.append(f'{c.name} : <{ctx} ; "{tok}" ; mu({tok}) = {{{", ".join(cases)}}}>')
    blocked = "{" + ",".join(preps + list(suffixes)) + "}"
    for tok, ntype in suffixes.items():
        check = "isfact(last(E))"
        if ntype:
            check += f" and type(arg(last(E)))=={ntype}"
        lines.append(f'w_{tok} : <{ctx} ; "{tok}" ; mu({tok}) = if left in {blocked} then bottom '
                     f'else if {check} then [] else bottom>')
    cons = [parse_construction(line) for line in lines]
    fold = Construction("fold", adj.context, FormPattern("S", (Element("S1"), Element("W"))),
                        MeaningExpr("S", ex.BinOp("++", ex.Mu("S1"), ex.Mu("W"))))
    assert universal_fold(fold) == "append"
    cons.append(fold)
    return Grammar(tuple(cons), LEXICALIZED, ("S",), ("W", "S"), conflicts=g.conflicts,
                   name=(g.name or "grammar") + "-lexicalized")


# ---------------------------------------------------------------- preservation check

@dataclass
class PreservationReport:
    checked: int = 0
    accepted: int = 0
    mismatches: List[Tuple[Tuple[str, ...], frozenset, frozenset]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _compare_one(g, lg, sent, report):
    a = normalize_set(interpret(g, sent))
    b = normalize_set(interpret(lg, sent))
    report.checked += 1
    if a != b:
        report.mismatches.append((sent, a, b))
    if a or b:
        report.accepted += 1
    return bool(a or b)


def check_sentences(g: Grammar, lg: Grammar, sentences) -> PreservationReport:
    report = PreservationReport()
    for s in sentences:
        _compare_one(g, lg, tuple(s), report)
    return report


def check_lpp_preservation(spec, g: Grammar, lg: Grammar, max_pps: int = 4,
                           full_depth: int = 2) -> PreservationReport:
    """Compare meaning sets on a structured enumeration of clause+PP sentences.

    Every clause string is checked bare. Each licensed clause frame (first
    verb that licenses it) is followed by every ordered PP sequence up to
    ``full_depth``, and by every PP multiset in inventory order up to
    ``max_pps``. Prefixes rejected by both grammars are not extended.
    """
    from .builders import FRAMES, clause_inventory, pp_extensions, pp_inventory

    report = PreservationReport()
    clauses = clause_inventory(spec)
    for c in clauses:
        _compare_one(g, lg, c, report)
    pps = pp_inventory(spec)
    keep = lambda s: _compare_one(g, lg, s, report)
    nouns = spec.nouns()
    reps = []
    for k in range(len(FRAMES)):
        verb = next((w for w, ss in spec.entries
                     if any(s.cat == "verb" and s.valence > k for s in ss)), None)
        if verb is not None:
            args = [nouns[(i + 1) % len(nouns)] for i in range(k)]
            reps.append((nouns[0], verb, *args))
    for c in reps:
        for ordered, depth in ((True, full_depth), (False, max_pps)):
            for _ in pp_extensions(c, pps, depth, keep, ordered):
                pass
    return report
